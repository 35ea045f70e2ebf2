#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "fzeta/common.hpp"
#include "fzeta/rational.hpp"

namespace fzeta {

// ---------------------------------------------------------------------------
// Fractal strings
// ---------------------------------------------------------------------------

// A bounded fractal string: nonincreasing positive lengths with finite sum.
// Rule-generated strings expose certified tail sums so truncations carry an
// explicit error budget.
class FractalString {
 public:
  enum class Rule { explicit_list, geometric, cantor_gaps, power, triangular };

  static FractalString explicit_lengths(std::vector<double> lengths) {
    FractalString s;
    s.rule_ = Rule::explicit_list;
    std::sort(lengths.begin(), lengths.end(), std::greater<double>());
    for (double l : lengths)
      if (!(l > 0.0)) throw domain_error("FractalString: lengths must be positive");
    s.lengths_ = std::move(lengths);
    s.total_ = 0.0;
    for (auto it = s.lengths_.rbegin(); it != s.lengths_.rend(); ++it) s.total_ += *it;
    return s;
  }

  // l_j = r^j, j >= 1.
  static FractalString geometric(double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw domain_error("geometric string: ratio in (0,1)");
    FractalString s;
    s.rule_ = Rule::geometric;
    s.ratio_ = ratio;
    s.total_ = ratio / (1.0 - ratio);
    return s;
  }

  // Deleted-gap lengths of C^(m,a): (m-1)m^(n-1) gaps of width
  // a^(n-1)(1-ma)/(m-1) at generation n. For (2,1/3) this is the classic
  // Cantor string, lengths 3^-n with multiplicity 2^(n-1) and total 1.
  static FractalString cantor(int m, Rational a) {
    if (m < 2) throw domain_error("cantor string: m >= 2");
    const double ad = a.to_double();
    if (!(ad > 0.0 && m * ad < 1.0)) throw domain_error("cantor string: need 0 < a and m*a < 1");
    FractalString s;
    s.rule_ = Rule::cantor_gaps;
    s.m_ = m;
    s.ratio_ = ad;
    s.total_ = 1.0;
    return s;
  }

  // l_j = j^-p, p > 1.
  static FractalString power(double p) {
    if (!(p > 1.0)) throw domain_error("power string: need p > 1 for a finite total length");
    FractalString s;
    s.rule_ = Rule::power;
    s.power_ = p;
    s.total_ = s.power_tail(1);
    return s;
  }

  // l_j = 1/(j(j+1)); endpoints a_k = 1/k exactly.
  static FractalString triangular() {
    FractalString s;
    s.rule_ = Rule::triangular;
    s.total_ = 1.0;
    return s;
  }

  Rule rule() const { return rule_; }
  double total_length() const { return total_; }
  double ratio() const { return ratio_; }
  int branch_count() const { return m_; }

  // 1-based j.
  double length(std::uint64_t j) const {
    if (j == 0) throw domain_error("FractalString::length: 1-based index");
    switch (rule_) {
      case Rule::explicit_list:
        if (j > lengths_.size()) throw domain_error("FractalString::length: index past end");
        return lengths_[j - 1];
      case Rule::geometric:
        return std::pow(ratio_, static_cast<double>(j));
      case Rule::cantor_gaps: {
        const auto g = cantor_generation(j);
        return cantor_gap_width(g);
      }
      case Rule::power:
        return std::pow(static_cast<double>(j), -power_);
      case Rule::triangular:
        return 1.0 / (static_cast<double>(j) * (static_cast<double>(j) + 1.0));
    }
    return 0.0;
  }

  bool finite() const { return rule_ == Rule::explicit_list; }
  std::uint64_t explicit_count() const { return lengths_.size(); }

  // sum_{j >= k} l_j, exact for geometric/cantor/triangular rules, Euler-
  // Maclaurin bounded for power rules. Returned pair is (value, error bound).
  std::pair<double, double> tail_sum(std::uint64_t k) const {
    if (k == 0) throw domain_error("FractalString::tail_sum: 1-based index");
    switch (rule_) {
      case Rule::explicit_list: {
        double acc = 0.0;
        for (std::uint64_t j = lengths_.size(); j >= k && j > 0; --j) acc += lengths_[j - 1];
        return {acc, 0.0};
      }
      case Rule::geometric:
        return {std::pow(ratio_, static_cast<double>(k)) / (1.0 - ratio_), 0.0};
      case Rule::cantor_gaps: {
        // Remainder of generation g, plus all later generations; the
        // per-generation totals (1-ma)(ma)^(n-1) sum geometrically.
        const auto g = cantor_generation(k);
        const std::uint64_t remaining_in_g = cantor_count_through(g) - k + 1;
        double acc = static_cast<double>(remaining_in_g) * cantor_gap_width(g);
        acc += cantor_generation_total(g + 1) / (1.0 - m_ * ratio_);
        return {acc, 0.0};
      }
      case Rule::power: {
        return {power_tail(k), power_tail_err(k)};
      }
      case Rule::triangular:
        return {1.0 / static_cast<double>(k), 0.0};
    }
    return {0.0, 0.0};
  }

  // Run-length view: (count, width) groups in decreasing width order, plus an
  // optional geometric continuation (count and width multiply by fixed ratios
  // per extra group). The zeta and tube evaluators work from this view so
  // rule-generated strings never materialize points.
  struct Group {
    double log_count;
    double width;
  };
  struct GeometricTail {
    double log_count_first;   // log of the count in the first tail group
    double log_width_first;   // log of the width in the first tail group
    double log_count_ratio;   // per-group increment of log count
    double log_width_ratio;   // per-group increment of log width (negative)
  };

  std::vector<Group> head_groups(std::uint64_t max_groups) const {
    std::vector<Group> out;
    switch (rule_) {
      case Rule::explicit_list: {
        std::size_t i = 0;
        while (i < lengths_.size() && out.size() < max_groups) {
          std::size_t j = i;
          while (j < lengths_.size() && lengths_[j] == lengths_[i]) ++j;
          out.push_back({std::log(static_cast<double>(j - i)), lengths_[i]});
          i = j;
        }
        break;
      }
      case Rule::cantor_gaps: {
        for (std::uint64_t n = 1; n <= max_groups; ++n) {
          const double log_count = std::log(static_cast<double>(m_ - 1)) +
                                   (static_cast<double>(n) - 1.0) * std::log(static_cast<double>(m_));
          out.push_back({log_count, cantor_gap_width(n)});
        }
        break;
      }
      case Rule::geometric:
      case Rule::power:
      case Rule::triangular: {
        for (std::uint64_t j = 1; j <= max_groups; ++j) out.push_back({0.0, length(j)});
        break;
      }
    }
    return out;
  }

  std::optional<GeometricTail> geometric_tail_after(std::uint64_t groups) const {
    switch (rule_) {
      case Rule::geometric: {
        GeometricTail t;
        t.log_count_first = 0.0;
        t.log_width_first = (static_cast<double>(groups) + 1.0) * std::log(ratio_);
        t.log_count_ratio = 0.0;
        t.log_width_ratio = std::log(ratio_);
        return t;
      }
      case Rule::cantor_gaps: {
        GeometricTail t;
        t.log_count_first = std::log(static_cast<double>(m_ - 1)) +
                            static_cast<double>(groups) * std::log(static_cast<double>(m_));
        t.log_width_first = std::log(cantor_gap_width(groups + 1));
        t.log_count_ratio = std::log(static_cast<double>(m_));
        t.log_width_ratio = std::log(ratio_);
        return t;
      }
      default:
        return std::nullopt;
    }
  }

  // Abscissa of convergence of the geometric zeta sum_j l_j^s.
  double zeta_abscissa() const {
    switch (rule_) {
      case Rule::explicit_list:
        return -std::numeric_limits<double>::infinity();
      case Rule::geometric:
        return 0.0;
      case Rule::cantor_gaps:
        return std::log(static_cast<double>(m_)) / std::log(1.0 / ratio_);
      case Rule::power:
        return 1.0 / power_;
      case Rule::triangular:
        return 0.5;
    }
    return 0.0;
  }

  double cantor_gap_width(std::uint64_t n) const {
    // a^(n-1) (1 - m a)/(m - 1)
    return std::exp((static_cast<double>(n) - 1.0) * std::log(ratio_)) * (1.0 - m_ * ratio_) /
           (m_ - 1);
  }

 private:
  std::uint64_t cantor_count_through(std::uint64_t n) const {
    // sum_{i<=n} (m-1)m^(i-1) = m^n - 1
    double v = std::pow(static_cast<double>(m_), static_cast<double>(n)) - 1.0;
    if (v > 9e18) throw capacity_error("cantor string: generation index too deep");
    return static_cast<std::uint64_t>(v + 0.5);
  }
  std::uint64_t cantor_generation(std::uint64_t j) const {
    std::uint64_t n = 1;
    while (cantor_count_through(n) < j) ++n;
    return n;
  }
  double cantor_generation_total(std::uint64_t n) const {
    // (m-1) m^(n-1) * w_n = (1-ma) (ma)^(n-1)
    return (1.0 - m_ * ratio_) *
           std::exp((static_cast<double>(n) - 1.0) * std::log(m_ * ratio_));
  }

  double power_tail(std::uint64_t k) const {
    // Euler-Maclaurin: sum_{j>=k} j^-p = k^(1-p)/(p-1) + k^-p/2 + p k^-(p+1)/12 - ...
    const double kk = static_cast<double>(k);
    return std::pow(kk, 1.0 - power_) / (power_ - 1.0) + 0.5 * std::pow(kk, -power_) +
           power_ / 12.0 * std::pow(kk, -power_ - 1.0);
  }
  double power_tail_err(std::uint64_t k) const {
    const double kk = static_cast<double>(k);
    return power_ * (power_ + 1.0) * (power_ + 2.0) / 720.0 * std::pow(kk, -power_ - 3.0);
  }

  Rule rule_ = Rule::explicit_list;
  std::vector<double> lengths_;
  double total_ = 0.0;
  double ratio_ = 0.0;
  double power_ = 0.0;
  int m_ = 0;
};

// ---------------------------------------------------------------------------
// Generalized Cantor parameters
// ---------------------------------------------------------------------------

struct GeneralizedCantorParams {
  int m = 2;                 // branch count, >= 2
  Rational a{1, 3};          // contraction ratio, 0 < a and m a < 1
  double delta = 0.0;        // collar width used by zeta evaluation; 0 = default
  // When set, a is derived as m^(-1/D) at use sites; assemblies that require
  // several components with exactly equal dimension store (m, D) this way.
  std::optional<double> locked_dimension;

  static GeneralizedCantorParams from_dimension(int m, double D) {
    if (!(D > 0.0 && D < 1.0))
      throw domain_error("GeneralizedCantorParams: locked dimension must lie in (0,1)");
    GeneralizedCantorParams p;
    p.m = m;
    p.locked_dimension = D;
    return p;
  }

  void validate() const {
    if (m < 2) throw domain_error("GeneralizedCantorParams: m >= 2 required");
    if (locked_dimension) {
      if (!(*locked_dimension > 0.0 && *locked_dimension < 1.0))
        throw domain_error("GeneralizedCantorParams: locked dimension must lie in (0,1)");
      return;  // a = m^(-1/D) automatically satisfies 0 < a < 1/m
    }
    if (!a.positive() || !(Rational(m) * a < Rational(1)))
      throw domain_error("GeneralizedCantorParams: need 0 < a and m*a < 1");
  }

  double a_value() const {
    if (locked_dimension)
      return std::exp(-std::log(static_cast<double>(m)) / *locked_dimension);
    return a.to_double();
  }
  // D = log_{1/a} m, always in (0,1).
  double dimension() const {
    if (locked_dimension) return *locked_dimension;
    return std::log(static_cast<double>(m)) / std::log(1.0 / a_value());
  }
  // Multiplicative period T = log(1/a).
  double period() const { return std::log(1.0 / a_value()); }
  double oscillatory_period() const { return 2.0 * pi / period(); }
  // Half-width of a first-generation hole; the tube formula is valid on (0,c).
  double gap_half_width() const { return (1.0 - m * a_value()) / (2.0 * (m - 1)); }
  // Default collar for numeric evaluation.
  double default_delta() const { return delta > 0.0 ? delta : 0.5 * gap_half_width(); }
};

// Gap families of C^(m,a) as a geometric continuation: generation n holds
// (m-1) m^(n-1) holes of width a^(n-1) (1-ma)/(m-1).
inline FractalString::GeometricTail cantor_gap_tail(const GeneralizedCantorParams& p,
                                                    double scale = 1.0) {
  p.validate();
  FractalString::GeometricTail t;
  t.log_count_first = std::log(static_cast<double>(p.m - 1));
  t.log_width_first = std::log(scale * 2.0 * p.gap_half_width());
  t.log_count_ratio = std::log(static_cast<double>(p.m));
  t.log_width_ratio = std::log(p.a_value());
  return t;
}

// ---------------------------------------------------------------------------
// Set descriptors
// ---------------------------------------------------------------------------

struct Box2D {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

struct PointSet1D {
  std::vector<double> points;  // sorted ascending
};

struct IntervalUnion1D {
  std::vector<std::pair<double, double>> intervals;  // disjoint, sorted
  double measure() const {
    double acc = 0.0;
    for (auto& [a, b] : intervals) acc += b - a;
    return acc;
  }
};

// The limit set of the C^(m,a) construction, affinely placed as
// offset + scale * C^(m,a).
struct CantorBlock {
  GeneralizedCantorParams params;
  double offset = 0.0;
  double scale = 1.0;
};

// Endpoint set A_L = {a_k} of a fractal string, rule-backed so evaluators can
// use certified tails instead of a point list.
struct StringEndpointSet {
  FractalString string;
};

struct Sphere {
  int dim = 2;       // ambient dimension N; the set is the (N-1)-sphere
  double radius = 1.0;
  std::vector<double> center;
};

struct PixelSet2D {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;  // row-major, 1 = set pixel
  Box2D extent;
  bool at(int x, int y) const { return mask[static_cast<std::size_t>(y) * width + x] != 0; }
  double pixel_size() const { return extent.width() / width; }
};

struct SetDescriptor;

struct UnionOfDescriptors {
  std::vector<SetDescriptor> members;  // declared-disjoint placements
};

struct SetDescriptor {
  std::variant<PointSet1D, IntervalUnion1D, CantorBlock, StringEndpointSet, Sphere, PixelSet2D,
               UnionOfDescriptors>
      value;
};

inline SetDescriptor make_set(PointSet1D v) { return SetDescriptor{std::move(v)}; }
inline SetDescriptor make_set(IntervalUnion1D v) { return SetDescriptor{std::move(v)}; }
inline SetDescriptor make_set(CantorBlock v) { return SetDescriptor{std::move(v)}; }
inline SetDescriptor make_set(StringEndpointSet v) { return SetDescriptor{std::move(v)}; }
inline SetDescriptor make_set(Sphere v) { return SetDescriptor{std::move(v)}; }
inline SetDescriptor make_set(PixelSet2D v) { return SetDescriptor{std::move(v)}; }
inline SetDescriptor make_set(UnionOfDescriptors v) { return SetDescriptor{std::move(v)}; }

// 1-D hull [lo, hi] of a descriptor, when the set lives on the line.
inline std::pair<double, double> hull_1d(const SetDescriptor& set);

namespace detail {
struct Hull1DVisitor {
  std::pair<double, double> operator()(const PointSet1D& p) const {
    if (p.points.empty()) throw domain_error("hull_1d: empty point set");
    return {p.points.front(), p.points.back()};
  }
  std::pair<double, double> operator()(const IntervalUnion1D& u) const {
    if (u.intervals.empty()) throw domain_error("hull_1d: empty interval union");
    return {u.intervals.front().first, u.intervals.back().second};
  }
  std::pair<double, double> operator()(const CantorBlock& c) const {
    return {c.offset, c.offset + c.scale};
  }
  std::pair<double, double> operator()(const StringEndpointSet& s) const {
    return {0.0, s.string.total_length()};
  }
  std::pair<double, double> operator()(const Sphere&) const {
    throw unsupported_error("hull_1d: sphere is not a 1-D set");
  }
  std::pair<double, double> operator()(const PixelSet2D&) const {
    throw unsupported_error("hull_1d: pixel set is not a 1-D set");
  }
  std::pair<double, double> operator()(const UnionOfDescriptors& u) const {
    if (u.members.empty()) throw domain_error("hull_1d: empty union");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (auto& mbr : u.members) {
      auto [a, b] = hull_1d(mbr);
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    return {lo, hi};
  }
};
}  // namespace detail

inline std::pair<double, double> hull_1d(const SetDescriptor& set) {
  return std::visit(detail::Hull1DVisitor{}, set.value);
}

// ---------------------------------------------------------------------------
// Relative fractal drums
// ---------------------------------------------------------------------------

struct BoxRegion {
  Box2D box;
};

// Omega = {0 < y < coeff * x^alpha, 0 < x < x_max}, alpha > 1; the set is a
// single point at the origin. Scaling by lambda maps (coeff, x_max) to
// (lambda^(1-alpha) coeff, lambda x_max).
struct CuspRegion {
  double alpha = 2.0;
  double coeff = 1.0;
  double x_max = 1.0;
};

// Omega' = {0 < y < scale * e^(-x_scale/x), 0 < x < x_max}.
struct ExpCuspRegion {
  double scale = 1.0;
  double x_scale = 1.0;
  double x_max = 1.0;
};

// The bounded complementary intervals of a 1-D set inside its hull; for a
// string endpoint set this is Omega_L = union of (a_{k+1}, a_k).
struct HalfOpenComplement {};

struct PixelRegion2D {
  Box2D box;
};

struct RelativeFractalDrum {
  SetDescriptor set;
  std::variant<BoxRegion, CuspRegion, ExpCuspRegion, HalfOpenComplement, PixelRegion2D> region;
  int ambient_dim = 1;
};

inline RelativeFractalDrum string_drum(FractalString s) {
  RelativeFractalDrum d;
  d.set = make_set(StringEndpointSet{std::move(s)});
  d.region = HalfOpenComplement{};
  d.ambient_dim = 1;
  return d;
}

inline RelativeFractalDrum cusp_drum(double alpha, double coeff = 1.0, double x_max = 1.0) {
  if (!(alpha > 1.0)) throw domain_error("cusp_drum: alpha > 1 required");
  RelativeFractalDrum d;
  d.set = make_set(PointSet1D{{0.0}});  // the set is {(0,0)}; descriptor records the anchor
  d.region = CuspRegion{alpha, coeff, x_max};
  d.ambient_dim = 2;
  return d;
}

inline RelativeFractalDrum exp_cusp_drum(double scale = 1.0, double x_scale = 1.0,
                                         double x_max = 1.0) {
  RelativeFractalDrum d;
  d.set = make_set(PointSet1D{{0.0}});
  d.region = ExpCuspRegion{scale, x_scale, x_max};
  d.ambient_dim = 2;
  return d;
}

// ---------------------------------------------------------------------------
// Tube samples
// ---------------------------------------------------------------------------

// Small-t model attached to samples generated from an exact formula; lets the
// tube-zeta integrator extend the grid below the sampled range, or splice the
// analytic tail outright when the scaled amplitude is exactly constant.
struct SmallTModel {
  std::function<double(double)> volume;  // exact |A_t| for t < valid_below
  double valid_below = 0.0;
  double codimension = 0.0;  // N - D, the leading power of the tube function
  double amplitude_hint = 1.0;
  // Set when |A_t| = amp * t^(N-D) exactly below valid_below; the tail
  // integral then has the closed value amp e^-(s-D)U / (s-D).
  std::optional<double> constant_amplitude;
};

struct TubeSample {
  double t = 0.0;
  double volume = 0.0;
  bool exact = true;
  double error_bound = 0.0;
};

struct TubeSamples {
  std::vector<TubeSample> samples;  // strictly increasing in t
  int ambient_dim = 1;
  std::optional<SmallTModel> model;

  void validate() const {
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (!(samples[i].t < samples[i + 1].t))
        throw domain_error("TubeSamples: t grid must be strictly increasing");
      if (samples[i].volume > samples[i + 1].volume + samples[i].error_bound +
                                  samples[i + 1].error_bound + 1e-14)
        throw domain_error("TubeSamples: tube volume must be nondecreasing in t");
    }
  }
};

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct PoleReport {
  cdouble location;
  int multiplicity = 1;
  std::optional<cdouble> analytic_residue;
  cdouble numeric_residue;
  double residue_discrepancy = 0.0;
};

enum class SetClass { degenerate, measurable, periodic, nonperiodic };

inline const char* to_string(SetClass c) {
  switch (c) {
    case SetClass::degenerate: return "degenerate";
    case SetClass::measurable: return "measurable";
    case SetClass::periodic: return "periodic";
    default: return "nonperiodic";
  }
}

struct DimensionReport {
  double upper_dim = 0.0;
  double lower_dim = 0.0;
  double lower_content = 0.0;
  double upper_content = 0.0;
  bool upper_content_infinite = false;
  bool lower_content_zero = false;
  double fit_dim = 0.0;  // point estimate used for content evaluation
  SetClass classification = SetClass::measurable;
  double window_spread = 0.0;
  double decades_covered = 0.0;
};

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kConstructionBudget = 1u << 22;

// Exact level-n pre-fractal of C^(m,a): m^level closed intervals of length
// a^level inside [0,1], in rational arithmetic.
inline std::vector<std::pair<Rational, Rational>> cantor_intervals_exact(
    const GeneralizedCantorParams& params, unsigned level) {
  params.validate();
  double count = std::pow(static_cast<double>(params.m), static_cast<double>(level));
  if (count > static_cast<double>(kConstructionBudget))
    throw capacity_error("cantor_endpoints: m^level exceeds the construction budget");
  const Rational a = params.a;
  const Rational step = a + (Rational(1) - Rational(params.m) * a) / Rational(params.m - 1);
  std::vector<Rational> starts{Rational(0)};
  Rational len(1);
  for (unsigned n = 0; n < level; ++n) {
    std::vector<Rational> next;
    next.reserve(starts.size() * params.m);
    for (const Rational& x : starts)
      for (int i = 0; i < params.m; ++i) next.push_back(x + Rational(i) * step * len);
    starts = std::move(next);
    len = len * a;
  }
  std::vector<std::pair<Rational, Rational>> out;
  out.reserve(starts.size());
  for (const Rational& x : starts) out.emplace_back(x, x + len);
  return out;
}

inline IntervalUnion1D cantor_endpoints(const GeneralizedCantorParams& params, unsigned level) {
  IntervalUnion1D u;
  for (auto& [a, b] : cantor_intervals_exact(params, level))
    u.intervals.emplace_back(a.to_double(), b.to_double());
  return u;
}

// a_k = sum_{j>=k} l_j for k = 1..count, in decreasing order.
inline std::vector<double> string_endpoints(const FractalString& s, std::uint64_t count) {
  if (count < 1) throw domain_error("string_endpoints: count >= 1");
  if (s.finite() && count > s.explicit_count())
    throw domain_error("string_endpoints: string has fewer terms than requested");
  std::vector<double> out;
  out.reserve(count);
  for (std::uint64_t k = 1; k <= count; ++k) out.push_back(s.tail_sum(k).first);
  return out;
}

}  // namespace fzeta
