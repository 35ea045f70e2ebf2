#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fzeta/analysis.hpp"
#include "fzeta/core.hpp"
#include "fzeta/forms.hpp"
#include "fzeta/quasiperiodic.hpp"
#include "fzeta/spectral.hpp"
#include "fzeta/tube.hpp"
#include "fzeta/zeta.hpp"

// Reproduction suite: one entry per headline identity the library claims to
// reproduce, each with its tolerance pinned here. `fzeta verify --suite paper`
// and the acceptance test binary both run these.

namespace fzeta::verify {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      notes_ << "FAILED{" << what << "} ";
    }
  }
  void note(const std::string& what) { notes_ << what << " "; }
  bool pass() const { return pass_; }
  std::string text() const { return notes_.str(); }

  static std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

 private:
  bool pass_ = true;
  std::ostringstream notes_;
};

// Deterministic pseudo-random stream for "random s" checks.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  double uniform(double lo, double hi) {
    state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
    const double u = static_cast<double>(state_ >> 11) * (1.0 / 9007199254740992.0);
    return lo + (hi - lo) * u;
  }

 private:
  std::uint64_t state_;
};

}  // namespace detail

// 1. The gap-series evaluation of the ternary Cantor distance zeta agrees
//    with its rational closed form across the critical strip.
inline CriterionResult cantor_closed_form_agreement() {
  detail::Check chk;
  GeneralizedCantorParams p;  // (2, 1/3)
  const double delta = 0.25;
  const auto set = make_set(CantorBlock{p});
  const auto form = cantor_distance_zeta_form(p, delta);
  double worst = 0.0;
  for (double re : {0.7, 0.9, 1.1, 1.3, 1.5}) {
    for (double im : {0.0, 10.0 / 3.0, 20.0 / 3.0, 10.0}) {
      const cdouble s{re, im};
      const auto z = distance_zeta_1d(set, delta, s);
      const cdouble ref = form.evaluator(s);
      worst = std::max(worst, std::abs(z.value - ref) / std::abs(ref));
    }
  }
  chk.require(worst <= 1e-6, "20-point agreement <= 1e-6, worst " + detail::Check::num(worst));
  chk.note("worst rel err " + detail::Check::num(worst));
  return {"cantor-closed-form", chk.pass(), chk.text(), 0.0};
}

// 2. Residues of the Cantor form at the principal pole and its first lattice
//    neighbors: contour integral, denominator-derivative rule, and the
//    Fourier coefficients of the fitted tube oscillation all coincide, and
//    the tube residue sits strictly between the content extremes.
inline CriterionResult cantor_residue_identities() {
  detail::Check chk;
  GeneralizedCantorParams p;
  const double D = p.dimension();
  const double T = p.period();
  const double osc = 2.0 * pi / T;
  const auto form = cantor_distance_zeta_form(p, 0.25);

  // Oscillation fit from exact tube samples (kink-aligned grid).
  const auto samples = sample_tube(make_set(CantorBlock{p}),
                                   cantor_aligned_grid(p, p.gap_half_width(), 128, 11));
  const auto fit = fit_log_periodic(samples, D);
  chk.require(fit.period_found && std::abs(fit.period - T) <= 1e-4,
              "period log(3) recovered, got " + detail::Check::num(fit.period));

  double worst = 0.0;
  for (int k : {-1, 0, 1}) {
    const cdouble s_k{D, osc * k};
    const cdouble contour = numeric_residue(form.evaluator, s_k, 0.3);
    const cdouble rule = form.residue_at(s_k);
    cdouble fourier = 0.0;
    for (auto& [kk, c] : fit.fourier)
      if (kk == k) fourier = (1.0 - s_k) * c;  // distance residue from the tube one
    worst = std::max({worst, std::abs(contour - rule), std::abs(contour - fourier)});
  }
  chk.require(worst <= 1e-4, "three-route residues agree <= 1e-4, worst " +
                                 detail::Check::num(worst));

  // Strict content sandwich with independently evaluated extremes.
  const auto rep = residue_content_check_cantor(p, 0.25);
  chk.require(std::abs(rep.lower_content - 2.4950) <= 1e-4,
              "lower content target 2.4950, got " + detail::Check::num(rep.lower_content));
  chk.require(std::abs(rep.upper_content - 2.5830) <= 1e-4,
              "upper content target 2.5830, got " + detail::Check::num(rep.upper_content));
  chk.require(rep.sandwich_strict, "strict sandwich with 10x margin");
  chk.note("tube residue " + detail::Check::num(rep.tube_residue) + " in (" +
           detail::Check::num(rep.lower_content) + ", " + detail::Check::num(rep.upper_content) +
           ")");
  return {"cantor-residues", chk.pass(), chk.text(), 0.0};
}

// 3. Circle: quadrature tube zeta against the explicit finite sum, the
//    contour residue 4 pi at s = 1, and the measurable-case identity.
inline CriterionResult circle_tube_zeta() {
  detail::Check chk;
  const double R = 1.0, delta = 0.5;
  const Sphere circle{2, R, {0.0, 0.0}};
  const auto tube_form = sphere_tube_zeta_form(2, R, delta);
  const auto samples = sample_tube(make_set(circle), geometric_grid(delta, 5e-4, 512));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const cdouble s{1.3 + 0.15 * i, (i % 2 ? 1.0 : -1.0) * (0.5 * i)};
    const auto z = tube_zeta_from_samples(samples, delta, s);
    const cdouble ref = tube_form.evaluator(s);
    worst = std::max(worst, std::abs(z.value - ref) / (1.0 + std::abs(ref)));
  }
  chk.require(worst <= 1e-8, "10-point tube zeta <= 1e-8, worst " + detail::Check::num(worst));

  // Residue of the quadrature route at s = 1: the abscissa sits at D = 1, so
  // approach from the right and extrapolate h zeta~(1+h) to h = 0.
  auto h_times_zeta = [&](double h) {
    return h * tube_zeta_from_samples(samples, delta, cdouble(1.0 + h)).value.real();
  };
  const auto res_numeric =
      extrapolate_to_zero(h_times_zeta, {0.32, 0.16, 0.08, 0.04, 0.02, 0.01});
  chk.require(std::abs(res_numeric.value - 4.0 * pi) <= 1e-8 * 4.0 * pi,
              "res at 1 equals 4 pi, err " +
                  detail::Check::num(std::abs(res_numeric.value - 4.0 * pi)));

  // Measurable case: the closed-form residue at D = 1 equals the content.
  const double content = 4.0 * pi * R;  // |A_t| = 4 pi R t
  const double res_rule = tube_form.residue_at(cdouble(1.0)).real();
  chk.require(std::abs(res_rule - content) <= 1e-12 * content, "residue equals Minkowski content");
  return {"circle", chk.pass(), chk.text(), 0.0};
}

// 4. Relative Sierpinski carpet: raster zeta at resolution 3^7 against the
//    rational closed form, and the pole scan of the form.
inline CriterionResult sierpinski_carpet() {
  detail::Check chk;
  const auto field = cell_distance_transform(sierpinski_carpet_mask(7));
  const auto form = sierpinski_relative_zeta_form();
  Raster2DOptions opt;
  opt.cell_self_similar = true;
  opt.boundary_subsample = 6;
  opt.tol = 0.05;
  double worst = 0.0;
  for (double sr : {1.95, 2.2, 2.5}) {
    const auto z = distance_zeta_2d(field, 10.0, cdouble(sr), opt);
    const double ref = form.evaluator(cdouble(sr)).real();
    worst = std::max(worst, std::abs(z.value.real() - ref) / std::abs(ref));
  }
  chk.require(worst <= 0.02, "raster zeta <= 2%, worst " + detail::Check::num(worst));

  const auto poles = pole_scan(form, Window{1.5, 2.0, -6.0, 6.0}, 6);
  chk.require(poles.size() == 3, "exactly D and its two lattice neighbors in |Im s| <= 6, got " +
                                     std::to_string(poles.size()));
  const double D = std::log(8.0) / std::log(3.0);
  const double osc = 2.0 * pi / std::log(3.0);
  double worst_res = 0.0;
  for (const auto& pr : poles) {
    const double k = pr.location.imag() / osc;
    chk.require(std::abs(pr.location.real() - D) <= 1e-6 && std::abs(k - std::round(k)) <= 1e-6,
                "pole on the principal lattice");
    worst_res = std::max(worst_res, pr.residue_discrepancy);
  }
  chk.require(worst_res <= 1e-8, "residues match the closed rule <= 1e-8, worst " +
                                     detail::Check::num(worst_res));
  return {"sierpinski-carpet", chk.pass(), chk.text(), 0.0};
}

// 5. Functional equation between the distance and tube routes, on the Cantor
//    set, the circle, and the local ball forms, at pseudo-random s.
inline CriterionResult functional_equation() {
  detail::Check chk;
  detail::Lcg rng(20260808);
  GeneralizedCantorParams p;
  const auto cantor = make_set(CantorBlock{p});
  double worst_excess = -1.0;
  for (int i = 0; i < 20; ++i) {
    const cdouble s{rng.uniform(0.8, 1.6), rng.uniform(-4.0, 4.0)};
    if (std::abs(s - 1.0) < 0.02) continue;
    const auto rep = functional_equation_check(cantor, 0.25, s);
    chk.require(rep.discrepancy <= rep.combined_error,
                "cantor discrepancy within budget at s=(" + detail::Check::num(s.real()) + "," +
                    detail::Check::num(s.imag()) + ")");
    worst_excess = std::max(worst_excess, rep.discrepancy - rep.combined_error);
  }
  const Sphere circle{2, 1.0, {0.0, 0.0}};
  for (int i = 0; i < 20; ++i) {
    const cdouble s{rng.uniform(1.2, 2.6), rng.uniform(-4.0, 4.0)};
    if (std::abs(s - 2.0) < 0.02) continue;
    const auto rep = functional_equation_check(make_set(circle), 0.4, s);
    chk.require(rep.discrepancy <= rep.combined_error, "circle discrepancy within budget");
  }
  // Ball-local forms: both sides closed, equality to rounding.
  const auto tube = local_ball_tube_zeta_form(2, 1.0, 0.5);
  const auto dist = local_ball_distance_zeta_form(2, 1.0, 0.5);
  const double vol = unit_ball_volume(2) * sqr(1.0 + 0.5);
  for (int i = 0; i < 20; ++i) {
    const cdouble s{rng.uniform(-1.0, 3.0), rng.uniform(-6.0, 6.0)};
    bool near_pole = false;
    for (int k = 0; k <= 2; ++k) near_pole = near_pole || std::abs(s - cdouble(k)) < 0.05;
    if (near_pole) continue;
    const cdouble lhs = dist.evaluator(s);
    const cdouble rhs = pow_pos(0.5, s - 2.0) * vol + (2.0 - s) * tube.evaluator(s);
    chk.require(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)), "ball forms consistent");
  }
  return {"functional-equation", chk.pass(), chk.text(), 0.0};
}

// 6. Cusp drums: negative dimension, content, residue; the exponential cusp
//    shows no finite dimension on the sampled grid.
inline CriterionResult cusp_drums() {
  detail::Check chk;
  const auto drum = cusp_drum(2.0);
  const auto samples = sample_tube(drum, geometric_grid(0.3, 1e-5, 16));
  const auto dims = estimate_dimensions(samples);
  chk.require(std::abs(dims.fit_dim - (-1.0)) <= 0.02,
              "dimension -1 +- 0.02, got " + detail::Check::num(dims.fit_dim));
  const double content = 1.0 / 3.0;
  chk.require(std::abs(dims.lower_content - content) <= 0.01 * content &&
                  std::abs(dims.upper_content - content) <= 0.01 * content,
              "content 1/3 within 1%");
  const auto rep = residue_content_check_cusp(2.0);
  chk.require(std::abs(rep.distance_residue - 1.0) <= 0.01,
              "residue at 1-alpha equals 1 within 1%, got " +
                  detail::Check::num(rep.distance_residue));
  const ExpCuspRegion sharp{1.0, 1.0, 1.0};
  for (double r : {-1.0, -5.0, -20.0}) {
    const double t = 1e-3;
    const double ratio = exp_cusp_tube_volume(sharp, t) / std::pow(t, 2.0 - r);
    chk.require(ratio < 1e-6, "exponential cusp ratio below 1e-6 at r = " +
                                  detail::Check::num(r));
  }
  return {"cusp-drums", chk.pass(), chk.text(), 0.0};
}

// 7. Scaling covariance of the relative distance zeta on two drum variants.
inline CriterionResult scaling_law() {
  detail::Check chk;
  detail::Lcg rng(77);
  for (double lam : {0.5, 2.0}) {
    for (int i = 0; i < 10; ++i) {
      const cdouble s{rng.uniform(-0.5, 1.0), rng.uniform(-2.0, 2.0)};
      const CuspRegion base{2.0, 1.0, 1.0};
      const CuspRegion scaled{2.0, std::pow(lam, 1.0 - base.alpha) * base.coeff,
                              lam * base.x_max};
      const auto z0 = cusp_relative_zeta(base, s);
      const auto z1 = cusp_relative_zeta(scaled, s);
      const cdouble pred = pow_pos(lam, s) * z0.value;
      const double budget =
          z1.est_error + std::abs(pow_pos(lam, s)) * z0.est_error + 1e-12 * std::abs(pred);
      chk.require(std::abs(z1.value - pred) <= budget, "cusp drum scales at lambda " +
                                                           detail::Check::num(lam));
    }
    for (int i = 0; i < 10; ++i) {
      const cdouble s{rng.uniform(0.3, 2.0), rng.uniform(-3.0, 3.0)};
      std::vector<double> plain_lengths, scaled_lengths;
      for (std::uint64_t j = 1; j <= 64; ++j) {
        plain_lengths.push_back(std::pow(0.5, static_cast<double>(j)));
        scaled_lengths.push_back(lam * plain_lengths.back());
      }
      const auto z0 = relative_distance_zeta(
          string_drum(FractalString::explicit_lengths(plain_lengths)), 0.25, s);
      const auto z1 = relative_distance_zeta(
          string_drum(FractalString::explicit_lengths(scaled_lengths)), 0.25, s);
      const cdouble pred = pow_pos(lam, s) * z0.value;
      const double budget = z1.est_error + std::abs(pow_pos(lam, s)) * z0.est_error +
                            1e-12 * (1.0 + std::abs(pred));
      chk.require(std::abs(z1.value - pred) <= budget,
                  "string drum scales at lambda " + detail::Check::num(lam));
    }
  }
  return {"scaling-law", chk.pass(), chk.text(), 0.0};
}

// 8. Quasiperiodic gate: exact rational-independence decisions with
//    certificates, closed-form vs numeric union zeta, and the two
//    incommensurable pole lattices.
inline CriterionResult quasiperiodic_gate() {
  detail::Check chk;
  chk.require(rationally_independent(exponent_vectors({2, 3})).independent, "(2,3) accepted");
  const auto c24 = rationally_independent(exponent_vectors({2, 4}));
  chk.require(!c24.independent && !c24.dependency.empty(), "(2,4) rejected with certificate");
  const auto c618 = rationally_independent(exponent_vectors({6, 12, 18}));
  chk.require(!c618.independent && !c618.dependency.empty(), "(6,12,18) rejected");
  bool threw = false;
  try {
    build_assembly(0.5, {2, 4});
  } catch (const domain_error&) {
    threw = true;
  }
  chk.require(threw, "assembly construction refuses dependent exponents");

  const auto asmb = build_assembly(0.5, {2, 3});
  double worst = 0.0;
  for (const cdouble s : {cdouble(0.7), cdouble(0.9), cdouble(0.6, 2.0)}) {
    const cdouble closed = assembly_zeta(asmb, s);
    const auto numeric = distance_zeta_1d(asmb.set(), asmb.delta, s);
    worst = std::max(worst, std::abs(closed - numeric.value) / std::abs(closed));
  }
  chk.require(worst <= 1e-5, "closed form matches the numeric route <= 1e-5, worst " +
                                 detail::Check::num(worst));

  const auto found = pole_scan(asmb.form(), Window{0.25, 0.75, -15.0, 15.0}, 8);
  const auto expected = asmb.form().poles_in_window(0.25, 0.75, -15.0, 15.0);
  chk.require(found.size() == expected.size(),
              "lattice count " + std::to_string(expected.size()) + ", scan found " +
                  std::to_string(found.size()));
  double worst_loc = 0.0;
  for (const auto& pr : found) {
    double best = 1e9;
    for (const auto& e : expected) best = std::min(best, std::abs(pr.location - e));
    worst_loc = std::max(worst_loc, best);
  }
  chk.require(worst_loc <= 1e-6, "poles sit on the two lattices, worst offset " +
                                     detail::Check::num(worst_loc));
  return {"quasiperiodic-gate", chk.pass(), chk.text(), 0.0};
}

// 9. Spectral factorization for string drums and the self-similar spray.
inline CriterionResult spectral_factorization() {
  detail::Check chk;
  const auto geo = FractalString::geometric(0.5);
  const auto cantor = FractalString::cantor(2, Rational{1, 3});

  auto double_sum = [](const FractalString& str, cdouble s, std::uint64_t J, std::uint64_t K) {
    cdouble acc = 0.0;
    double tail = 0.0;
    const double sigma = s.real();
    for (std::uint64_t j = 1; j <= J; ++j) {
      const double lj = str.length(j);
      for (std::uint64_t k = 1; k <= K; ++k)
        acc += std::exp(-s * std::log(static_cast<double>(k) / lj));
      tail += std::pow(lj, sigma) * std::pow(static_cast<double>(K), 1.0 - sigma) / (sigma - 1.0);
    }
    // Remaining strings: bounded by zeta_R(sigma) sum_{j>J} l_j^sigma.
    double ltail = 0.0;
    for (std::uint64_t j = J + 1; j <= 4 * J; ++j) ltail += std::pow(str.length(j), sigma);
    ltail *= 2.0;
    tail += 2.0 * ltail;
    return std::pair<cdouble, double>(acc, tail);
  };

  for (const auto* strp : {&geo, &cantor}) {
    for (double sr : {2.0, 3.0}) {
      const cdouble s(sr);
      const auto fact = string_spectral_zeta(*strp, s);
      const auto [brute, tail] = double_sum(*strp, s, 120, 20000);
      chk.require(std::abs(fact.value - brute) <= tail + fact.est_error,
                  "factorized value matches the double sum at s = " + detail::Check::num(sr));
    }
  }
  const double target18 = pi * pi / 18.0, target42 = pi * pi / 42.0;
  chk.require(std::abs(string_spectral_zeta(geo, cdouble(2.0)).value.real() - target18) <= 1e-9,
              "geometric string value pi^2/18");
  chk.require(
      std::abs(string_spectral_zeta(cantor, cdouble(2.0)).value.real() - target42) <= 1e-9,
      "Cantor string value pi^2/42");

  // Spray: closed factor against direct enumeration of the scaled copies.
  const auto base = interval_model(1.0);
  const auto formula = spray_spectral_zeta(base, 1.0 / 3.0, 2, cdouble(4.0));
  const auto enumerated = spectral_zeta(spray_model(interval_model(1.0), 1.0 / 3.0, 2),
                                        cdouble(4.0), 1e7);
  chk.require(std::abs(formula.value - enumerated.value) <=
                  formula.est_error + enumerated.est_error,
              "spray factor matches enumeration at s = 4");
  chk.note("spray value " + detail::Check::num(formula.value.real()));
  return {"spectral-factorization", chk.pass(), chk.text(), 0.0};
}

// 10. Weyl remainders: exact interval bound, the Cantor drum's fractal
//     exponent, and the rectangle residue.
inline CriterionResult weyl_checks() {
  detail::Check chk;
  const auto iv = interval_model(2.0);
  std::vector<double> grid;
  grid.reserve(1000);
  for (int i = 0; i < 1000; ++i) grid.push_back(10.0 * std::pow(1.013, i));
  const auto wr = weyl_check(iv, grid);
  chk.require(wr.max_abs_remainder <= 1.0, "interval |R| <= 1 exactly, max " +
                                               detail::Check::num(wr.max_abs_remainder));

  const auto drum = string_drum_model(FractalString::cantor(2, Rational{1, 3}));
  std::vector<double> grid2;
  for (double mu = 100.0; mu <= 1e6; mu *= 1.01) grid2.push_back(mu);
  const auto wr2 = weyl_check(drum, grid2);
  const double D = std::log(2.0) / std::log(3.0);
  chk.require(std::abs(wr2.fitted_exponent - D) <= 0.05,
              "drum exponent within 0.05 of log_3 2, got " +
                  detail::Check::num(wr2.fitted_exponent));

  const auto rect = spectral_residue_check(rectangle_model(1.0, 1.0), 2.0e6);
  chk.require(std::abs(rect.value - rect.expected) <= 0.02 * rect.expected,
              "rectangle residue 1/(2 pi) within 2%, got " + detail::Check::num(rect.value));
  return {"weyl-checks", chk.pass(), chk.text(), 0.0};
}

// 11. Abscissa of convergence: verdicts flip across the dimension for the
//     Cantor set and the cusp drum; the integrability probe flips at
//     gamma = N - D.
inline CriterionResult abscissa_properties() {
  detail::Check chk;
  GeneralizedCantorParams p;
  const double D = p.dimension();
  const auto set = make_set(CantorBlock{p});
  chk.require(convergence_verdict_1d(set, 0.25, D + 0.05) == Verdict::converges,
              "Cantor converges just above D");
  chk.require(convergence_verdict_1d(set, 0.25, D - 0.05) == Verdict::diverges,
              "Cantor diverges just below D");
  const CuspRegion cusp{2.0, 1.0, 1.0};
  chk.require(convergence_verdict_cusp(cusp, -1.0 + 0.05) == Verdict::converges,
              "cusp converges just above 1 - alpha");
  chk.require(convergence_verdict_cusp(cusp, -1.0 - 0.05) == Verdict::diverges,
              "cusp diverges just below 1 - alpha");
  chk.require(harvey_polking_probe(set, 0.25, 0.2) == Verdict::converges,
              "integrability holds at gamma = 0.2");
  chk.require(harvey_polking_probe(set, 0.25, 0.5) == Verdict::diverges,
              "integrability fails at gamma = 0.5");
  return {"abscissa-properties", chk.pass(), chk.text(), 0.0};
}

inline std::vector<std::pair<std::string, std::function<CriterionResult()>>> all_criteria() {
  return {{"cantor-closed-form", cantor_closed_form_agreement},
          {"cantor-residues", cantor_residue_identities},
          {"circle", circle_tube_zeta},
          {"sierpinski-carpet", sierpinski_carpet},
          {"functional-equation", functional_equation},
          {"cusp-drums", cusp_drums},
          {"scaling-law", scaling_law},
          {"quasiperiodic-gate", quasiperiodic_gate},
          {"spectral-factorization", spectral_factorization},
          {"weyl-checks", weyl_checks},
          {"abscissa-properties", abscissa_properties}};
}

inline std::vector<CriterionResult> run_all(bool print = false) {
  std::vector<CriterionResult> out;
  for (auto& [name, fn] : all_criteria()) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (print)
      std::printf("%-24s %s  (%.1f s)  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                  r.seconds, r.detail.c_str());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fzeta::verify
