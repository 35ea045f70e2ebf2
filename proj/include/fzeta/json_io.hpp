#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fzeta/core.hpp"

namespace fzeta {

using nlohmann::json;

// Descriptor schema: every numeric field is a decimal or p/q string so that
// rational parameters survive the round trip exactly. Unknown keys are
// rejected.

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw domain_error(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

inline Rational rat_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw domain_error(std::string("descriptor: field '") + key + "' must be a decimal string");
  return Rational::parse(j.at(key).get<std::string>());
}

inline double num_field(const json& j, const char* key) { return rat_field(j, key).to_double(); }

inline double num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? num_field(j, key) : fallback;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fractal strings
// ---------------------------------------------------------------------------

inline FractalString parse_string_rule(const json& j) {
  if (!j.is_object() || !j.contains("rule"))
    throw domain_error("string descriptor: expected an object with a 'rule'");
  const std::string rule = j.at("rule").get<std::string>();
  if (rule == "geometric") {
    detail::check_keys(j, {"rule", "ratio"}, "string");
    return FractalString::geometric(detail::num_field(j, "ratio"));
  }
  if (rule == "cantor") {
    detail::check_keys(j, {"rule", "m", "a"}, "string");
    return FractalString::cantor(j.at("m").get<int>(), detail::rat_field(j, "a"));
  }
  if (rule == "power") {
    detail::check_keys(j, {"rule", "p"}, "string");
    return FractalString::power(detail::num_field(j, "p"));
  }
  if (rule == "triangular") {
    detail::check_keys(j, {"rule"}, "string");
    return FractalString::triangular();
  }
  if (rule == "explicit") {
    detail::check_keys(j, {"rule", "lengths"}, "string");
    std::vector<double> lengths;
    for (const auto& v : j.at("lengths")) lengths.push_back(Rational::parse(v.get<std::string>()).to_double());
    return FractalString::explicit_lengths(std::move(lengths));
  }
  throw domain_error("string descriptor: unknown rule '" + rule + "'");
}

inline json dump_string_rule(const FractalString& s) {
  json j;
  using Rule = FractalString::Rule;
  switch (s.rule()) {
    case Rule::geometric:
      j["rule"] = "geometric";
      j["ratio"] = std::to_string(s.ratio());
      break;
    case Rule::cantor_gaps:
      j["rule"] = "cantor";
      j["m"] = s.branch_count();
      j["a"] = std::to_string(s.ratio());
      break;
    case Rule::power:
      j["rule"] = "power";
      j["p"] = std::to_string(1.0 / s.zeta_abscissa());
      break;
    case Rule::triangular:
      j["rule"] = "triangular";
      break;
    case Rule::explicit_list: {
      j["rule"] = "explicit";
      json lens = json::array();
      for (std::uint64_t i = 1; i <= s.explicit_count(); ++i)
        lens.push_back(std::to_string(s.length(i)));
      j["lengths"] = lens;
      break;
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// Set descriptors
// ---------------------------------------------------------------------------

inline SetDescriptor parse_set(const json& j);

namespace detail {

inline SetDescriptor parse_set_impl(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw domain_error("set descriptor: expected an object with a 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "point_set") {
    check_keys(j, {"type", "points"}, "point_set");
    PointSet1D p;
    for (const auto& v : j.at("points")) p.points.push_back(Rational::parse(v.get<std::string>()).to_double());
    std::sort(p.points.begin(), p.points.end());
    return make_set(std::move(p));
  }
  if (type == "interval_union") {
    check_keys(j, {"type", "intervals"}, "interval_union");
    IntervalUnion1D u;
    for (const auto& v : j.at("intervals"))
      u.intervals.emplace_back(Rational::parse(v.at(0).get<std::string>()).to_double(),
                               Rational::parse(v.at(1).get<std::string>()).to_double());
    std::sort(u.intervals.begin(), u.intervals.end());
    return make_set(std::move(u));
  }
  if (type == "cantor_block") {
    check_keys(j, {"type", "m", "a", "offset", "scale", "delta"}, "cantor_block");
    CantorBlock c;
    c.params.m = j.at("m").get<int>();
    c.params.a = rat_field(j, "a");
    c.params.delta = num_or(j, "delta", 0.0);
    c.offset = num_or(j, "offset", 0.0);
    c.scale = num_or(j, "scale", 1.0);
    c.params.validate();
    return make_set(std::move(c));
  }
  if (type == "string_endpoints") {
    check_keys(j, {"type", "string"}, "string_endpoints");
    return make_set(StringEndpointSet{parse_string_rule(j.at("string"))});
  }
  if (type == "sphere") {
    check_keys(j, {"type", "dim", "radius", "center"}, "sphere");
    Sphere s;
    s.dim = j.at("dim").get<int>();
    s.radius = num_field(j, "radius");
    if (j.contains("center"))
      for (const auto& v : j.at("center"))
        s.center.push_back(Rational::parse(v.get<std::string>()).to_double());
    return make_set(std::move(s));
  }
  if (type == "pixel_set") {
    check_keys(j, {"type", "width", "height", "extent", "rows"}, "pixel_set");
    PixelSet2D p;
    p.width = j.at("width").get<int>();
    p.height = j.at("height").get<int>();
    const auto& e = j.at("extent");
    p.extent = {Rational::parse(e.at(0).get<std::string>()).to_double(),
                Rational::parse(e.at(1).get<std::string>()).to_double(),
                Rational::parse(e.at(2).get<std::string>()).to_double(),
                Rational::parse(e.at(3).get<std::string>()).to_double()};
    p.mask.assign(static_cast<std::size_t>(p.width) * p.height, 0);
    const auto& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != p.height)
      throw domain_error("pixel_set: row count must equal height");
    for (int y = 0; y < p.height; ++y) {
      const std::string row = rows.at(y).get<std::string>();
      if (static_cast<int>(row.size()) != p.width)
        throw domain_error("pixel_set: row length must equal width");
      for (int x = 0; x < p.width; ++x)
        p.mask[static_cast<std::size_t>(y) * p.width + x] = row[static_cast<std::size_t>(x)] == '1';
    }
    return make_set(std::move(p));
  }
  if (type == "union") {
    check_keys(j, {"type", "members"}, "union");
    UnionOfDescriptors u;
    for (const auto& m : j.at("members")) u.members.push_back(parse_set(m));
    return make_set(std::move(u));
  }
  throw domain_error("set descriptor: unknown type '" + type + "'");
}

}  // namespace detail

inline SetDescriptor parse_set(const json& j) { return detail::parse_set_impl(j); }

inline json dump_set(const SetDescriptor& set);

namespace detail {

struct DumpVisitor {
  json operator()(const PointSet1D& p) const {
    json j{{"type", "point_set"}};
    json pts = json::array();
    for (double x : p.points) pts.push_back(std::to_string(x));
    j["points"] = pts;
    return j;
  }
  json operator()(const IntervalUnion1D& u) const {
    json j{{"type", "interval_union"}};
    json iv = json::array();
    for (auto& [a, b] : u.intervals) iv.push_back({std::to_string(a), std::to_string(b)});
    j["intervals"] = iv;
    return j;
  }
  json operator()(const CantorBlock& c) const {
    json j{{"type", "cantor_block"}};
    j["m"] = c.params.m;
    j["a"] = c.params.a.str();
    j["offset"] = std::to_string(c.offset);
    j["scale"] = std::to_string(c.scale);
    return j;
  }
  json operator()(const StringEndpointSet& s) const {
    return json{{"type", "string_endpoints"}, {"string", dump_string_rule(s.string)}};
  }
  json operator()(const Sphere& s) const {
    json j{{"type", "sphere"}, {"dim", s.dim}, {"radius", std::to_string(s.radius)}};
    json c = json::array();
    for (double v : s.center) c.push_back(std::to_string(v));
    j["center"] = c;
    return j;
  }
  json operator()(const PixelSet2D& p) const {
    json j{{"type", "pixel_set"}, {"width", p.width}, {"height", p.height}};
    j["extent"] = {std::to_string(p.extent.x0), std::to_string(p.extent.y0),
                   std::to_string(p.extent.x1), std::to_string(p.extent.y1)};
    json rows = json::array();
    for (int y = 0; y < p.height; ++y) {
      std::string row(static_cast<std::size_t>(p.width), '0');
      for (int x = 0; x < p.width; ++x)
        if (p.at(x, y)) row[static_cast<std::size_t>(x)] = '1';
      rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
  }
  json operator()(const UnionOfDescriptors& u) const {
    json j{{"type", "union"}};
    json members = json::array();
    for (auto& m : u.members) members.push_back(dump_set(m));
    j["members"] = members;
    return j;
  }
};

}  // namespace detail

inline json dump_set(const SetDescriptor& set) {
  return std::visit(detail::DumpVisitor{}, set.value);
}

// ---------------------------------------------------------------------------
// Relative fractal drums
// ---------------------------------------------------------------------------

inline RelativeFractalDrum parse_drum(const json& j) {
  detail::check_keys(j, {"set", "region", "ambient_dim"}, "drum");
  RelativeFractalDrum d;
  d.set = parse_set(j.at("set"));
  d.ambient_dim = j.at("ambient_dim").get<int>();
  const json& r = j.at("region");
  const std::string type = r.at("type").get<std::string>();
  if (type == "cusp") {
    detail::check_keys(r, {"type", "alpha", "coeff", "x_max"}, "cusp");
    d.region = CuspRegion{detail::num_field(r, "alpha"), detail::num_or(r, "coeff", 1.0),
                          detail::num_or(r, "x_max", 1.0)};
  } else if (type == "exp_cusp") {
    detail::check_keys(r, {"type", "scale", "x_scale", "x_max"}, "exp_cusp");
    d.region = ExpCuspRegion{detail::num_or(r, "scale", 1.0), detail::num_or(r, "x_scale", 1.0),
                             detail::num_or(r, "x_max", 1.0)};
  } else if (type == "complement") {
    detail::check_keys(r, {"type"}, "complement");
    d.region = HalfOpenComplement{};
  } else if (type == "box") {
    detail::check_keys(r, {"type", "box"}, "box");
    const auto& b = r.at("box");
    d.region = BoxRegion{{Rational::parse(b.at(0).get<std::string>()).to_double(),
                          Rational::parse(b.at(1).get<std::string>()).to_double(),
                          Rational::parse(b.at(2).get<std::string>()).to_double(),
                          Rational::parse(b.at(3).get<std::string>()).to_double()}};
  } else if (type == "pixel_region") {
    detail::check_keys(r, {"type", "box"}, "pixel_region");
    const auto& b = r.at("box");
    d.region = PixelRegion2D{{Rational::parse(b.at(0).get<std::string>()).to_double(),
                              Rational::parse(b.at(1).get<std::string>()).to_double(),
                              Rational::parse(b.at(2).get<std::string>()).to_double(),
                              Rational::parse(b.at(3).get<std::string>()).to_double()}};
  } else {
    throw domain_error("drum: unknown region type '" + type + "'");
  }
  return d;
}

inline json dump_drum(const RelativeFractalDrum& d) {
  json j;
  j["set"] = dump_set(d.set);
  j["ambient_dim"] = d.ambient_dim;
  if (const auto* c = std::get_if<CuspRegion>(&d.region))
    j["region"] = {{"type", "cusp"},
                   {"alpha", std::to_string(c->alpha)},
                   {"coeff", std::to_string(c->coeff)},
                   {"x_max", std::to_string(c->x_max)}};
  else if (const auto* e = std::get_if<ExpCuspRegion>(&d.region))
    j["region"] = {{"type", "exp_cusp"},
                   {"scale", std::to_string(e->scale)},
                   {"x_scale", std::to_string(e->x_scale)},
                   {"x_max", std::to_string(e->x_max)}};
  else if (std::get_if<HalfOpenComplement>(&d.region))
    j["region"] = {{"type", "complement"}};
  else if (const auto* b = std::get_if<BoxRegion>(&d.region))
    j["region"] = {{"type", "box"},
                   {"box",
                    {std::to_string(b->box.x0), std::to_string(b->box.y0),
                     std::to_string(b->box.x1), std::to_string(b->box.y1)}}};
  else if (const auto* p = std::get_if<PixelRegion2D>(&d.region))
    j["region"] = {{"type", "pixel_region"},
                   {"box",
                    {std::to_string(p->box.x0), std::to_string(p->box.y0),
                     std::to_string(p->box.x1), std::to_string(p->box.y1)}}};
  return j;
}

}  // namespace fzeta
