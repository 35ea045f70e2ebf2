// Command-line front end: parses set/drum descriptors, dispatches the
// evaluators, and emits CSV/JSON. Exit codes: 0 success, 2 domain error,
// 3 divergence verdict, 4 unsupported variant.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fzeta/fzeta.hpp"
#include "fzeta/verify.hpp"

namespace {

using namespace fzeta;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

cdouble parse_complex(const std::string& text) {
  // forms: "0.8", "0.8+2i", "0.8-2i", "2i"
  std::string t = text;
  if (!t.empty() && t.back() == 'i') {
    t.pop_back();
    std::size_t split = t.find_last_of("+-");
    if (split == std::string::npos || split == 0)
      return {0.0, std::stod(t.empty() || t == "+" || t == "-" ? t + "1" : t)};
    std::string re = t.substr(0, split);
    std::string im = t.substr(split);
    if (im == "+" || im == "-") im += "1";
    return {std::stod(re), std::stod(im)};
  }
  return {std::stod(t), 0.0};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// Grammar: cantor:m,a | string:geometric,r | string:cantor | string:power,p |
// string:triangular | sphere:N,R | qp:D;m1,m2,... | carpet
SetDescriptor parse_set_grammar(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "cantor") {
    const auto parts = split(rest, ',');
    if (parts.size() < 2) throw domain_error("set grammar: cantor:m,a");
    CantorBlock blk;
    blk.params.m = std::stoi(parts[0]);
    blk.params.a = Rational::parse(parts[1]);
    blk.params.validate();
    return make_set(blk);
  }
  if (head == "string") {
    const auto parts = split(rest, ',');
    if (parts.empty()) throw domain_error("set grammar: string:<rule>[,param]");
    if (parts[0] == "geometric")
      return make_set(StringEndpointSet{FractalString::geometric(Rational::parse(parts.at(1)).to_double())});
    if (parts[0] == "cantor") return make_set(StringEndpointSet{FractalString::cantor(2, {1, 3})});
    if (parts[0] == "power")
      return make_set(StringEndpointSet{FractalString::power(Rational::parse(parts.at(1)).to_double())});
    if (parts[0] == "triangular") return make_set(StringEndpointSet{FractalString::triangular()});
    throw domain_error("set grammar: unknown string rule '" + parts[0] + "'");
  }
  if (head == "sphere") {
    const auto parts = split(rest, ',');
    if (parts.size() < 2) throw domain_error("set grammar: sphere:N,R");
    Sphere s;
    s.dim = std::stoi(parts[0]);
    s.radius = Rational::parse(parts[1]).to_double();
    s.center.assign(static_cast<std::size_t>(s.dim), 0.0);
    return make_set(s);
  }
  if (head == "qp") {
    const auto semi = rest.find(';');
    if (semi == std::string::npos) throw domain_error("set grammar: qp:D;m1,m2,...");
    const double D = Rational::parse(rest.substr(0, semi)).to_double();
    std::vector<std::int64_t> ms;
    for (auto& m : split(rest.substr(semi + 1), ',')) ms.push_back(std::stoll(m));
    return build_assembly(D, ms).set();
  }
  throw domain_error("set grammar: unknown set '" + text + "'");
}

RelativeFractalDrum parse_drum_grammar(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "cusp") {
    const auto parts = split(rest, ',');
    const double alpha = Rational::parse(parts.at(0)).to_double();
    const double coeff = parts.size() > 1 ? Rational::parse(parts[1]).to_double() : 1.0;
    const double xmax = parts.size() > 2 ? Rational::parse(parts[2]).to_double() : 1.0;
    return cusp_drum(alpha, coeff, xmax);
  }
  if (head == "expcusp") return exp_cusp_drum();
  if (head == "string") {
    auto set = parse_set_grammar(text);
    return string_drum(std::get<StringEndpointSet>(set.value).string);
  }
  throw domain_error("drum grammar: unknown drum '" + text + "'");
}

MeromorphicForm parse_form_grammar(const std::string& text, double delta) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "cantor") {
    const auto parts = split(rest, ',');
    GeneralizedCantorParams p;
    p.m = std::stoi(parts.at(0));
    p.a = Rational::parse(parts.at(1));
    return cantor_distance_zeta_form(p, delta);
  }
  if (head == "cantor-tube") {
    const auto parts = split(rest, ',');
    GeneralizedCantorParams p;
    p.m = std::stoi(parts.at(0));
    p.a = Rational::parse(parts.at(1));
    return cantor_tube_zeta_form(p, delta);
  }
  if (head == "sierpinski") return sierpinski_relative_zeta_form();
  if (head == "sphere" || head == "sphere-distance") {
    const auto parts = split(rest, ',');
    const int N = std::stoi(parts.at(0));
    const double R = Rational::parse(parts.at(1)).to_double();
    const double d = delta > 0.0 ? delta : 0.5 * R;
    return head == "sphere" ? sphere_tube_zeta_form(N, R, d) : sphere_distance_zeta_form(N, R, d);
  }
  if (head == "ball" || head == "ball-distance") {
    const auto parts = split(rest, ',');
    const int N = std::stoi(parts.at(0));
    const double r = Rational::parse(parts.at(1)).to_double();
    const double d = delta > 0.0 ? delta : 0.5;
    return head == "ball" ? local_ball_tube_zeta_form(N, r, d)
                          : local_ball_distance_zeta_form(N, r, d);
  }
  if (head == "string") {
    auto set = parse_set_grammar(text);
    return string_relative_zeta_form(std::get<StringEndpointSet>(set.value).string);
  }
  if (head == "qp") {
    auto semi = rest.find(';');
    const double D = Rational::parse(rest.substr(0, semi)).to_double();
    std::vector<std::int64_t> ms;
    for (auto& m : split(rest.substr(semi + 1), ',')) ms.push_back(std::stoll(m));
    return build_assembly(D, ms).form();
  }
  throw domain_error("form grammar: unknown form '" + text + "'");
}

EigenvalueModel parse_model_grammar(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "interval") return interval_model(Rational::parse(rest).to_double());
  if (head == "rectangle") {
    const auto parts = split(rest, ',');
    return rectangle_model(Rational::parse(parts.at(0)).to_double(),
                           Rational::parse(parts.at(1)).to_double());
  }
  if (head == "stringdrum") {
    const auto parts = split(rest, ',');
    if (parts.at(0) == "cantor") return string_drum_model(FractalString::cantor(2, {1, 3}));
    if (parts.at(0) == "geometric")
      return string_drum_model(FractalString::geometric(Rational::parse(parts.at(1)).to_double()));
    throw domain_error("model grammar: stringdrum:cantor|geometric,r");
  }
  if (head == "spray") {
    const auto parts = split(rest, ',');
    return spray_model(interval_model(Rational::parse(parts.at(0)).to_double()),
                       Rational::parse(parts.at(1)).to_double(), std::stoi(parts.at(2)));
  }
  throw domain_error("model grammar: unknown model '" + text + "'");
}

SetDescriptor load_set(const std::string& grammar, const std::string& json_arg) {
  if (!json_arg.empty()) {
    if (json_arg.front() == '@') {
      std::ifstream in(json_arg.substr(1));
      if (!in) throw domain_error("cannot open descriptor file " + json_arg.substr(1));
      return parse_set(json::parse(in));
    }
    return parse_set(json::parse(json_arg));
  }
  return parse_set_grammar(grammar);
}

struct Output {
  std::string path;
  std::ostringstream buffer;
  ~Output() = default;
  void flush() {
    if (path.empty()) {
      std::fputs(buffer.str().c_str(), stdout);
    } else {
      std::ofstream out(path, std::ios::binary);
      out << buffer.str();
    }
  }
};

void emit_zeta_row(Output& out, const ZetaEvaluation& z) {
  out.buffer << "s_re,s_im,value_re,value_im,est_error,method\n"
             << fmt(z.s.real()) << ',' << fmt(z.s.imag()) << ',' << fmt(z.value.real()) << ','
             << fmt(z.value.imag()) << ',' << fmt(z.est_error) << ',' << to_string(z.method)
             << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractal zeta functions: tube volumes, zeta evaluation, complex dimensions"};
  app.require_subcommand(1);

  std::string set_g, drum_g, form_g, model_g, json_arg, out_path, s_text, window_text, m_list;
  double delta = 0.0, tmax = 0.25, tmin = 1e-6, tol = 1e-10, qp_dim = 0.5, im_max = 15.0;
  double mu_max = 1e6;
  int per_decade = 32, grid = 8, per_period = 128, periods = 11, level = 7, threads = 1;
  bool emit_poles = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write CSV/JSON to a file instead of stdout");
    cmd->add_option("--tol", tol, "evaluation tolerance");
    cmd->add_option("--threads", threads, "accepted for compatibility; evaluation is per-process");
  };

  auto* tube = app.add_subcommand("tube", "tube volumes |A_t| or |A_t ∩ Omega| on a t-grid");
  tube->add_option("--set", set_g, "set grammar, e.g. cantor:2,1/3");
  tube->add_option("--drum", drum_g, "drum grammar, e.g. cusp:2");
  tube->add_option("--json", json_arg, "inline JSON descriptor or @file");
  tube->add_option("--tmax", tmax);
  tube->add_option("--tmin", tmin);
  tube->add_option("--per-decade", per_decade);
  tube->add_option("--level", level, "carpet raster level (3^level pixels per side)");
  add_common(tube);

  auto* zeta = app.add_subcommand("zeta", "distance zeta of a set or drum at one s");
  zeta->add_option("--set", set_g);
  zeta->add_option("--drum", drum_g);
  zeta->add_option("--json", json_arg);
  zeta->add_option("--s", s_text)->required();
  zeta->add_option("--delta", delta);
  zeta->add_option("--level", level, "carpet raster level (3^level pixels per side)");
  add_common(zeta);

  auto* form = app.add_subcommand("form", "closed-form evaluation and pole enumeration");
  auto* form_eval = form->add_subcommand("eval", "evaluate a closed form at s");
  form_eval->add_option("--form", form_g)->required();
  form_eval->add_option("--s", s_text)->required();
  form_eval->add_option("--delta", delta);
  add_common(form_eval);
  auto* form_poles = form->add_subcommand("poles", "scan a closed form for poles");
  form_poles->add_option("--form", form_g)->required();
  form_poles->add_option("--window", window_text, "re0,re1,im0,im1")->required();
  form_poles->add_option("--grid", grid);
  form_poles->add_option("--delta", delta);
  add_common(form_poles);

  auto* poles = app.add_subcommand("poles", "alias of `form poles`");
  poles->add_option("--form", form_g)->required();
  poles->add_option("--window", window_text)->required();
  poles->add_option("--grid", grid);
  poles->add_option("--delta", delta);
  add_common(poles);

  auto* dim = app.add_subcommand("dim", "dimension/content estimation from tube samples");
  dim->add_option("--set", set_g);
  dim->add_option("--drum", drum_g);
  dim->add_option("--json", json_arg);
  dim->add_option("--tmax", tmax);
  dim->add_option("--tmin", tmin);
  dim->add_option("--per-decade", per_decade);
  add_common(dim);

  auto* fit = app.add_subcommand("fit", "log-periodic oscillation fit");
  fit->add_option("--set", set_g)->required();
  fit->add_option("--per-period", per_period);
  fit->add_option("--periods", periods);
  add_common(fit);

  auto* qp = app.add_subcommand("qp", "quasiperiodic assemblies");
  auto* qp_build = qp->add_subcommand("build", "build an assembly and report its pole structure");
  qp_build->add_option("--D", qp_dim)->required();
  qp_build->add_option("--m", m_list, "comma-separated branch counts")->required();
  qp_build->add_option("--poles-im", im_max, "emit the pole list up to this |Im s|");
  qp_build->add_flag("--poles", emit_poles, "append the CSV pole list");
  add_common(qp_build);

  auto* spectral = app.add_subcommand("spectral", "spectral zeta, counting, Weyl checks");
  auto* sp_eigen = spectral->add_subcommand("eigen", "list eigenvalues up to mu-max");
  sp_eigen->add_option("--model", model_g)->required();
  sp_eigen->add_option("--mu-max", mu_max);
  add_common(sp_eigen);
  auto* sp_zeta = spectral->add_subcommand("zeta", "spectral zeta at s");
  sp_zeta->add_option("--model", model_g)->required();
  sp_zeta->add_option("--s", s_text)->required();
  sp_zeta->add_option("--mu-max", mu_max);
  add_common(sp_zeta);
  auto* sp_weyl = spectral->add_subcommand("weyl", "counting remainder and its exponent");
  sp_weyl->add_option("--model", model_g)->required();
  sp_weyl->add_option("--mu-max", mu_max);
  add_common(sp_weyl);
  auto* sp_res = spectral->add_subcommand("residue", "residue of the spectral zeta at s = N");
  sp_res->add_option("--model", model_g)->required();
  sp_res->add_option("--mu-max", mu_max);
  add_common(sp_res);

  auto* verify = app.add_subcommand("verify", "run the reproduction suite");
  std::string suite = "paper";
  verify->add_option("--suite", suite, "suite name (paper)");

  CLI11_PARSE(app, argc, argv);

  Output out;
  out.path = out_path;
  try {
    if (tube->parsed()) {
      out.buffer << "t,volume,exact,error_bound\n";
      TubeSamples ts;
      if (set_g == "carpet") {
        const auto field = cell_distance_transform(sierpinski_carpet_mask(level));
        ts = sample_tube_raster(field, geometric_grid(tmax, tmin, per_decade));
      } else if (!drum_g.empty()) {
        ts = sample_tube(parse_drum_grammar(drum_g), geometric_grid(tmax, tmin, per_decade));
      } else {
        ts = sample_tube(load_set(set_g, json_arg), geometric_grid(tmax, tmin, per_decade));
      }
      for (const auto& s : ts.samples)
        out.buffer << fmt(s.t) << ',' << fmt(s.volume) << ',' << (s.exact ? 1 : 0) << ','
                   << fmt(s.error_bound) << "\n";
    } else if (zeta->parsed()) {
      const cdouble s = parse_complex(s_text);
      ZetaEvaluation z;
      if (set_g == "carpet" || drum_g == "carpet") {
        const auto field = cell_distance_transform(sierpinski_carpet_mask(level));
        Raster2DOptions opt;
        opt.cell_self_similar = true;
        opt.boundary_subsample = 6;
        opt.tol = 0.05;
        z = distance_zeta_2d(field, delta > 0.0 ? delta : 10.0, s, opt);
      } else if (!drum_g.empty()) {
        z = relative_distance_zeta(parse_drum_grammar(drum_g), delta, s);
      } else {
        auto set = load_set(set_g, json_arg);
        double d = delta;
        if (d <= 0.0) {
          // Family defaults: half the formula-validity width for Cantor
          // sets, half the radius for spheres, a quarter of the first
          // length for strings.
          if (const auto* blk = std::get_if<CantorBlock>(&set.value))
            d = blk->params.default_delta() * blk->scale;
          else if (const auto* sp = std::get_if<Sphere>(&set.value))
            d = 0.5 * sp->radius;
          else if (const auto* se = std::get_if<StringEndpointSet>(&set.value))
            d = 0.25 * se->string.length(1);
          else
            d = 0.25;
        }
        if (const auto* sp = std::get_if<Sphere>(&set.value))
          z = sphere_distance_zeta(sp->dim, sp->radius, d, s);
        else
          z = distance_zeta_1d(set, d, s, {tol, 400000, std::nullopt});
      }
      emit_zeta_row(out, z);
    } else if (form_eval->parsed()) {
      const auto f = parse_form_grammar(form_g, delta);
      ZetaEvaluation z;
      z.s = parse_complex(s_text);
      z.value = f.evaluator(z.s);
      z.est_error = 1e-14 * std::abs(z.value);
      z.method = ZetaMethod::interval_exact;
      emit_zeta_row(out, z);
    } else if (form_poles->parsed() || poles->parsed()) {
      const auto f = parse_form_grammar(form_g, delta);
      const auto parts = split(window_text, ',');
      if (parts.size() != 4) throw domain_error("--window expects re0,re1,im0,im1");
      const Window w{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]),
                     std::stod(parts[3])};
      out.buffer << "pole_re,pole_im,res_re,res_im\n";
      for (const auto& pr : pole_scan(f, w, grid))
        out.buffer << fmt(pr.location.real()) << ',' << fmt(pr.location.imag()) << ','
                   << fmt(pr.numeric_residue.real()) << ',' << fmt(pr.numeric_residue.imag())
                   << "\n";
    } else if (dim->parsed()) {
      TubeSamples ts;
      if (!drum_g.empty())
        ts = sample_tube(parse_drum_grammar(drum_g), geometric_grid(tmax, tmin, per_decade));
      else
        ts = sample_tube(load_set(set_g, json_arg), geometric_grid(tmax, tmin, per_decade));
      const auto rep = estimate_dimensions(ts);
      out.buffer << "upper_dim,lower_dim,fit_dim,lower_content,upper_content,decades\n"
                 << fmt(rep.upper_dim) << ',' << fmt(rep.lower_dim) << ',' << fmt(rep.fit_dim)
                 << ',' << fmt(rep.lower_content) << ',' << fmt(rep.upper_content) << ','
                 << fmt(rep.decades_covered) << "\n";
      json cls{{"classification", to_string(rep.classification)},
               {"window_spread", rep.window_spread}};
      out.buffer << cls.dump() << "\n";
    } else if (fit->parsed()) {
      auto set = parse_set_grammar(set_g);
      const auto* blk = std::get_if<CantorBlock>(&set.value);
      if (!blk) throw unsupported_error("fit: oscillation fits expect a cantor set");
      const auto samples = sample_tube(
          set, cantor_aligned_grid(blk->params, blk->params.gap_half_width(), per_period,
                                   periods, blk->scale));
      const auto f = fit_log_periodic(samples, blk->params.dimension());
      out.buffer << "period_found,period,mean,amplitude,residual\n"
                 << (f.period_found ? 1 : 0) << ',' << fmt(f.period) << ',' << fmt(f.mean) << ','
                 << fmt(f.amplitude) << ',' << fmt(f.fit_residual) << "\n";
      out.buffer << "k,coeff_re,coeff_im\n";
      for (const auto& [k, c] : f.fourier)
        out.buffer << k << ',' << fmt(c.real()) << ',' << fmt(c.imag()) << "\n";
    } else if (qp_build->parsed()) {
      std::vector<std::int64_t> ms;
      for (auto& m : split(m_list, ',')) ms.push_back(std::stoll(m));
      const auto asmb = build_assembly(qp_dim, ms);
      json rec{{"common_dim", asmb.common_dim},
               {"delta", asmb.delta},
               {"principal_dims", asmb.principal_dims_description()},
               {"label", "transcendentally n-quasiperiodic (conditional on the rational-"
                         "independence hypothesis)"}};
      json comps = json::array();
      for (std::size_t i = 0; i < asmb.components.size(); ++i)
        comps.push_back({{"m", asmb.components[i].m},
                         {"period", asmb.periods[i]},
                         {"offset", asmb.offsets[i]}});
      rec["components"] = comps;
      out.buffer << rec.dump() << "\n";
      if (emit_poles) {
        out.buffer << "pole_re,pole_im,res_re,res_im\n";
        const auto f = asmb.form();
        for (const auto& p : f.poles_in_window(asmb.common_dim - 0.01, asmb.common_dim + 0.01,
                                               -im_max, im_max)) {
          const cdouble r = f.residue_at(p);
          out.buffer << fmt(p.real()) << ',' << fmt(p.imag()) << ',' << fmt(r.real()) << ','
                     << fmt(r.imag()) << "\n";
        }
      }
    } else if (sp_eigen->parsed()) {
      out.buffer << "mu,multiplicity\n";
      for (const auto& [mu, mult] : enumerate_eigenvalues(parse_model_grammar(model_g), mu_max))
        out.buffer << fmt(mu) << ',' << fmt(mult) << "\n";
    } else if (sp_zeta->parsed()) {
      emit_zeta_row(out, spectral_zeta(parse_model_grammar(model_g), parse_complex(s_text),
                                       mu_max));
    } else if (sp_weyl->parsed()) {
      const auto model = parse_model_grammar(model_g);
      std::vector<double> gridv;
      for (double mu = 100.0; mu <= mu_max; mu *= 1.01) gridv.push_back(mu);
      const auto rep = weyl_check(model, gridv);
      out.buffer << "fitted_slope,fitted_exponent,max_abs_remainder\n"
                 << fmt(rep.fitted_slope) << ',' << fmt(rep.fitted_exponent) << ','
                 << fmt(rep.max_abs_remainder) << "\n";
    } else if (sp_res->parsed()) {
      const auto rep = spectral_residue_check(parse_model_grammar(model_g), mu_max);
      out.buffer << "value,expected,residual\n"
                 << fmt(rep.value) << ',' << fmt(rep.expected) << ',' << fmt(rep.residual)
                 << "\n";
    } else if (verify->parsed()) {
      if (suite != "paper") throw domain_error("verify: unknown suite '" + suite + "'");
      const auto results = fzeta::verify::run_all(true);
      bool all = true;
      for (const auto& r : results) all = all && r.pass;
      std::printf("%s\n", all ? "ALL PASS" : "FAILURES PRESENT");
      return all ? 0 : 1;
    }
  } catch (const divergence_error& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return 3;
  } catch (const unsupported_error& e) {
    std::fprintf(stderr, "unsupported: %s\n", e.what());
    return 4;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 2;
  } catch (const capacity_error& e) {
    std::fprintf(stderr, "capacity: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  out.flush();
  return 0;
}
