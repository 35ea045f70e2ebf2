#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <variant>
#include <vector>

#include "fzeta/analysis.hpp"
#include "fzeta/core.hpp"
#include "fzeta/zeta.hpp"

namespace fzeta {

// ---------------------------------------------------------------------------
// Riemann zeta via the accelerated alternating (eta) series
// ---------------------------------------------------------------------------

// 64-term binomial acceleration of eta(s) = sum (-1)^(j-1) j^-s, then
// zeta = eta / (1 - 2^(1-s)). Valid for Re s > 0, s != 1.
inline cdouble riemann_zeta(cdouble s) {
  if (!(s.real() > 0.0)) throw domain_error("riemann_zeta: Re s > 0 required");
  if (std::abs(s - 1.0) < 1e-10) throw domain_error("riemann_zeta: pole at s = 1");
  constexpr int n = 64;
  static const std::vector<double> d = [] {
    std::vector<double> dk(n + 1);
    double u = 1.0;  // n * (n+i-1)! 4^i / ((n-i)! (2i)!) at i = 0
    double acc = u;
    dk[0] = acc;
    for (int i = 1; i <= n; ++i) {
      u *= 4.0 * (n + i - 1.0) * (n - i + 1.0) / ((2.0 * i) * (2.0 * i - 1.0));
      acc += u;
      dk[static_cast<std::size_t>(i)] = acc;
    }
    return dk;
  }();
  cdouble acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * (d[static_cast<std::size_t>(k)] - d[n]) *
           std::exp(-s * std::log(static_cast<double>(k + 1)));
  }
  const cdouble eta = -acc / d[n];
  const cdouble denom = 1.0 - std::exp((1.0 - s) * std::log(2.0));
  if (std::abs(denom) < 1e-8)
    throw domain_error("riemann_zeta: too close to a zero of 1 - 2^(1-s)");
  return eta / denom;
}

// ---------------------------------------------------------------------------
// Eigenvalue models
// ---------------------------------------------------------------------------

struct IntervalModel {
  double length = 1.0;  // mu_k = (k pi / length)^2
};

struct RectangleModel {
  double a = 1.0, b = 1.0;  // mu = pi^2 (m^2/a^2 + n^2/b^2)
};

struct StringDrumModel {
  FractalString string;  // disjoint intervals of lengths l_j
};

struct EigenvalueModel;

struct SprayModel {
  std::shared_ptr<const EigenvalueModel> base;
  double gamma = 1.0 / 3.0;  // copies scaled by gamma^j ...
  int b = 2;                 // ... with multiplicity b^j, j >= 1
};

struct EigenvalueModel {
  std::variant<IntervalModel, RectangleModel, StringDrumModel, SprayModel> value;
};

inline EigenvalueModel interval_model(double l) { return {IntervalModel{l}}; }
inline EigenvalueModel rectangle_model(double a, double b) { return {RectangleModel{a, b}}; }
inline EigenvalueModel string_drum_model(FractalString s) {
  return {StringDrumModel{std::move(s)}};
}
inline EigenvalueModel spray_model(EigenvalueModel base, double gamma, int b) {
  if (!(gamma > 0.0 && gamma < 1.0) || b < 2)
    throw domain_error("spray_model: need gamma in (0,1) and b >= 2");
  return {SprayModel{std::make_shared<EigenvalueModel>(std::move(base)), gamma, b}};
}

inline int ambient_dim(const EigenvalueModel& m) {
  if (std::holds_alternative<RectangleModel>(m.value)) return 2;
  if (const auto* sp = std::get_if<SprayModel>(&m.value)) return ambient_dim(*sp->base);
  return 1;
}

inline double model_volume(const EigenvalueModel& m) {
  if (const auto* iv = std::get_if<IntervalModel>(&m.value)) return iv->length;
  if (const auto* rc = std::get_if<RectangleModel>(&m.value)) return rc->a * rc->b;
  if (const auto* sd = std::get_if<StringDrumModel>(&m.value)) return sd->string.total_length();
  const auto& sp = std::get<SprayModel>(m.value);
  const int N = ambient_dim(*sp.base);
  const double q = sp.b * std::pow(sp.gamma, N);
  if (!(q < 1.0)) throw domain_error("model_volume: spray has infinite volume");
  return model_volume(*sp.base) * q / (1.0 - q);
}

// ---------------------------------------------------------------------------
// Exact counting functions N(mu) = #{k : mu_k <= mu}
// ---------------------------------------------------------------------------

inline double counting_function(const EigenvalueModel& m, double mu);

inline double counting_function_nonthrow(const EigenvalueModel& m, double mu) {
  return mu > 0.0 ? counting_function(m, mu) : 0.0;
}

namespace detail_spec {

// Eigenvalue expressions, written once so that counting and enumeration
// compare bit-identical doubles.
inline double interval_eigen(double k, double l) { return sqr(k * pi / l); }
inline double rectangle_eigen(double mm, double nn, double a, double b) {
  return pi * pi * (mm * mm / (a * a) + nn * nn / (b * b));
}

// Largest k >= 1 with eigen(k) <= mu under a monotone eigen expression. The
// few-ulp slack keeps boundary eigenvalues inclusive regardless of how the
// caller's mu was assembled.
inline double count_tolerance(double mu) { return 8e-16 * mu; }

template <typename Eigen>
inline double modes_below(double mu, double k_guess, const Eigen& eigen) {
  const double lim = mu + count_tolerance(mu);
  double k = std::max(std::floor(k_guess), 0.0);
  while (eigen(k + 1.0) <= lim) ++k;
  while (k >= 1.0 && eigen(k) > lim) --k;
  return std::max(k, 0.0);
}

}  // namespace detail_spec

inline double counting_function(const EigenvalueModel& m, double mu) {
  if (!(mu > 0.0)) throw domain_error("counting_function: mu > 0");
  if (const auto* iv = std::get_if<IntervalModel>(&m.value)) {
    const double l = iv->length;
    return detail_spec::modes_below(mu, l * std::sqrt(mu) / pi,
                                    [l](double k) { return detail_spec::interval_eigen(k, l); });
  }
  if (const auto* rc = std::get_if<RectangleModel>(&m.value)) {
    double acc = 0.0;
    const double a = rc->a, b = rc->b;
    for (double mm = 1.0;
         detail_spec::rectangle_eigen(mm, 1.0, a, b) <= mu + detail_spec::count_tolerance(mu);
         ++mm) {
      acc += detail_spec::modes_below(mu, b * std::sqrt(mu) / pi, [&](double nn) {
        return detail_spec::rectangle_eigen(mm, nn, a, b);
      });
    }
    return acc;
  }
  if (const auto* sd = std::get_if<StringDrumModel>(&m.value)) {
    // sum_j floor-count over (k pi / l_j)^2; only lengths >= pi/sqrt(mu)
    // contribute.
    const double x = std::sqrt(mu) / pi;
    const FractalString& str = sd->string;
    double acc = 0.0;
    if (str.rule() == FractalString::Rule::cantor_gaps) {
      for (std::uint64_t gen = 1;; ++gen) {
        const double w = str.cantor_gap_width(gen);
        if (w * x < 1.0) break;
        const double count = (str.branch_count() - 1) *
                             std::pow(static_cast<double>(str.branch_count()),
                                      static_cast<double>(gen - 1));
        acc += count * detail_spec::modes_below(mu, w * x, [w](double k) {
          return detail_spec::interval_eigen(k, w);
        });
      }
      return acc;
    }
    for (std::uint64_t j = 1;; ++j) {
      if (str.finite() && j > str.explicit_count()) break;
      const double lj = str.length(j);
      if (lj * x < 1.0) break;
      acc += detail_spec::modes_below(mu, lj * x, [lj](double k) {
        return detail_spec::interval_eigen(k, lj);
      });
    }
    return acc;
  }
  const auto& sp = std::get<SprayModel>(m.value);
  double acc = 0.0;
  double weight = 1.0;
  for (int j = 1;; ++j) {
    weight *= sp.b;
    const double scaled_mu = mu * std::pow(sp.gamma, 2.0 * j);
    const double nb = counting_function_nonthrow(*sp.base, scaled_mu);
    if (nb == 0.0) break;
    acc += weight * nb;
  }
  return acc;
}

// Certified bound on |N(mu) - (2 pi)^-N omega_N |Omega| mu^(N/2)|.
inline double counting_remainder_bound(const EigenvalueModel& m, double mu) {
  if (std::holds_alternative<IntervalModel>(m.value)) return 1.0;
  if (const auto* rc = std::get_if<RectangleModel>(&m.value))
    return (rc->a + rc->b) * std::sqrt(mu) / pi + 2.0;
  if (const auto* sd = std::get_if<StringDrumModel>(&m.value)) {
    const double x = std::sqrt(mu) / pi;
    const FractalString& str = sd->string;
    // One unit per active interval, plus the leading term of the inactive tail.
    std::uint64_t active = 0;
    if (str.rule() == FractalString::Rule::cantor_gaps) {
      double cnt = 0.0;
      for (std::uint64_t gen = 1; str.cantor_gap_width(gen) * x >= 1.0; ++gen)
        cnt += (str.branch_count() - 1) *
               std::pow(static_cast<double>(str.branch_count()), static_cast<double>(gen - 1));
      return cnt + x * str.total_length();
    }
    while (!(str.finite() && active >= str.explicit_count()) &&
           str.length(active + 1) * x >= 1.0)
      ++active;
    return static_cast<double>(active) + x * str.tail_sum(active + 1).first;
  }
  const auto& sp = std::get<SprayModel>(m.value);
  double acc = 0.0;
  double weight = 1.0;
  const int N = ambient_dim(*sp.base);
  const double lead = unit_ball_volume(N) * model_volume(*sp.base) / std::pow(2.0 * pi, N);
  for (int j = 1; j < 200; ++j) {
    weight *= sp.b;
    const double scaled_mu = mu * std::pow(sp.gamma, 2.0 * j);
    if (counting_function_nonthrow(*sp.base, scaled_mu) == 0.0) {
      // Remaining copies have empty spectrum; their Weyl terms bound the gap.
      acc += weight * lead * std::pow(scaled_mu, 0.5 * N) / (1.0 - sp.b * std::pow(sp.gamma, N));
      break;
    }
    acc += weight * counting_remainder_bound(*sp.base, scaled_mu);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Eigenvalue enumeration
// ---------------------------------------------------------------------------

// (mu, multiplicity) pairs sorted by mu, complete up to mu_max.
inline std::vector<std::pair<double, double>> enumerate_eigenvalues(const EigenvalueModel& m,
                                                                    double mu_max) {
  std::vector<std::pair<double, double>> out;
  if (const auto* iv = std::get_if<IntervalModel>(&m.value)) {
    for (double k = 1.0; detail_spec::interval_eigen(k, iv->length) <= mu_max; ++k)
      out.emplace_back(detail_spec::interval_eigen(k, iv->length), 1.0);
  } else if (const auto* rc = std::get_if<RectangleModel>(&m.value)) {
    for (double mm = 1.0; detail_spec::rectangle_eigen(mm, 1.0, rc->a, rc->b) <= mu_max; ++mm)
      for (double nn = 1.0;; ++nn) {
        const double mu = detail_spec::rectangle_eigen(mm, nn, rc->a, rc->b);
        if (mu > mu_max) break;
        out.emplace_back(mu, 1.0);
      }
  } else if (const auto* sd = std::get_if<StringDrumModel>(&m.value)) {
    const FractalString& str = sd->string;
    const double x = std::sqrt(mu_max) / pi;
    if (str.rule() == FractalString::Rule::cantor_gaps) {
      for (std::uint64_t gen = 1; str.cantor_gap_width(gen) * x >= 1.0; ++gen) {
        const double w = str.cantor_gap_width(gen);
        const double count = (str.branch_count() - 1) *
                             std::pow(static_cast<double>(str.branch_count()),
                                      static_cast<double>(gen - 1));
        for (double k = 1.0; detail_spec::interval_eigen(k, w) <= mu_max; ++k)
          out.emplace_back(detail_spec::interval_eigen(k, w), count);
      }
    } else {
      for (std::uint64_t j = 1;; ++j) {
        if (str.finite() && j > str.explicit_count()) break;
        const double lj = str.length(j);
        if (lj * x < 1.0) break;
        for (double k = 1.0; detail_spec::interval_eigen(k, lj) <= mu_max; ++k)
          out.emplace_back(detail_spec::interval_eigen(k, lj), 1.0);
      }
    }
  } else {
    const auto& sp = std::get<SprayModel>(m.value);
    double weight = 1.0;
    for (int j = 1; j < 400; ++j) {
      weight *= sp.b;
      const double scale = std::pow(sp.gamma, -2.0 * j);
      const auto base = enumerate_eigenvalues(*sp.base, mu_max / scale);
      if (base.empty()) break;
      for (auto& [mu, mult] : base) out.emplace_back(mu * scale, mult * weight);
    }
  }
  std::sort(out.begin(), out.end());
  // Merge exact ties so multiplicities are explicit.
  std::vector<std::pair<double, double>> merged;
  for (auto& p : out) {
    if (!merged.empty() && merged.back().first == p.first)
      merged.back().second += p.second;
    else
      merged.push_back(p);
  }
  return merged;
}

// ---------------------------------------------------------------------------
// Spectral zeta functions
// ---------------------------------------------------------------------------

// sum_k mu_k^(-s/2) with the Weyl-completed tail: eigenvalues are enumerated
// to mu_max, the remainder integrates the leading counting term and carries a
// certified bound from the counting remainder.
inline ZetaEvaluation spectral_zeta(const EigenvalueModel& m, cdouble s, double mu_max = 4.0e6) {
  const int N = ambient_dim(m);
  const double sigma = s.real();
  if (!(sigma > N)) throw divergence_error("spectral_zeta: Re s must exceed the ambient dimension");
  const auto eigen = enumerate_eigenvalues(m, mu_max);
  if (eigen.empty()) throw domain_error("spectral_zeta: no eigenvalues below mu_max");
  cdouble acc = 0.0;
  for (auto& [mu, mult] : eigen) acc += mult * std::exp(-0.5 * s * std::log(mu));
  const double mu_star = mu_max;
  const double W = unit_ball_volume(N) * model_volume(m) / std::pow(2.0 * pi, N);
  const cdouble tail = W * static_cast<double>(N) / (s - static_cast<double>(N)) *
                       std::exp(0.5 * (static_cast<double>(N) - s) * std::log(mu_star));
  // Integration by parts bound for int mu^(-s/2) dR with |R| <= bound(mu).
  const double Rb = counting_remainder_bound(m, mu_star);
  const double rem = std::pow(mu_star, -0.5 * sigma) * Rb +
                     0.5 * std::abs(s) * Rb * std::pow(mu_star, -0.5 * sigma) /
                         (0.5 * (sigma - 1.0));
  ZetaEvaluation out;
  out.s = s;
  out.method = ZetaMethod::series;
  out.value = acc + tail;
  out.est_error = rem + 1e-15 * std::abs(acc) * std::sqrt(static_cast<double>(eigen.size()));
  return out;
}

// Factorized spectral zeta of a fractal string: zeta_R(s) * zeta_L(s).
inline ZetaEvaluation string_spectral_zeta(const FractalString& str, cdouble s,
                                           const ZetaOptions& opt = {}) {
  if (std::abs(s - 1.0) < 1e-10) throw domain_error("string_spectral_zeta: pole at s = 1");
  if (!(s.real() > 1.0))
    throw divergence_error("string_spectral_zeta: Re s > 1 required");
  const cdouble zr = riemann_zeta(s);
  ZetaEvaluation g = geometric_zeta(str, s, opt);
  ZetaEvaluation out;
  out.s = s;
  out.method = ZetaMethod::series;
  out.value = zr * g.value;
  out.est_error = std::abs(zr) * g.est_error + 1e-14 * std::abs(out.value);
  return out;
}

// Self-similar spray: (b gamma^s / (1 - b gamma^s)) * spectral_zeta(base).
inline ZetaEvaluation spray_spectral_zeta(const EigenvalueModel& base, double gamma, int b,
                                          cdouble s, double mu_max = 4.0e6) {
  const double sigma = s.real();
  const double similarity_dim = std::log(static_cast<double>(b)) / std::log(1.0 / gamma);
  if (!(sigma > std::max(static_cast<double>(ambient_dim(base)), similarity_dim)))
    throw divergence_error("spray_spectral_zeta: Re s below the spray abscissa");
  const cdouble g = static_cast<double>(b) * pow_pos(gamma, s);
  ZetaEvaluation zb = spectral_zeta(base, s, mu_max);
  ZetaEvaluation out;
  out.s = s;
  out.method = ZetaMethod::series;
  out.value = g / (1.0 - g) * zb.value;
  out.est_error = std::abs(g / (1.0 - g)) * zb.est_error + 1e-15 * std::abs(out.value);
  return out;
}

// ---------------------------------------------------------------------------
// Weyl remainder checks
// ---------------------------------------------------------------------------

struct WeylReport {
  double fitted_slope = 0.0;     // d(log |R|_rms) / d(log mu); compares to d/2
  double fitted_exponent = 0.0;  // 2 * slope, the dimension-like exponent d
  double max_abs_remainder = 0.0;
  std::vector<std::pair<double, double>> envelope;  // (mu, bin rms |R|)
};

// R(mu) = N(mu) - (2 pi)^-N omega_N |Omega| mu^(N/2). The remainder
// oscillates and dips through zero, so the exponent is fitted on the binned
// root-mean-square of R rather than raw points: |R|_rms ~ mu^(d/2) gives
// slope d/2 against log mu.
inline WeylReport weyl_check(const EigenvalueModel& m, const std::vector<double>& mu_grid,
                             int bins_per_decade = 4) {
  const int N = ambient_dim(m);
  const double W = unit_ball_volume(N) * model_volume(m) / std::pow(2.0 * pi, N);
  WeylReport rep;
  std::vector<std::pair<double, double>> pts;  // (log10 mu, |R|)
  for (double mu : mu_grid) {
    const double R = counting_function(m, mu) - W * std::pow(mu, 0.5 * N);
    rep.max_abs_remainder = std::max(rep.max_abs_remainder, std::abs(R));
    pts.emplace_back(std::log10(mu), std::abs(R));
  }
  std::sort(pts.begin(), pts.end());
  const double lo = pts.front().first;
  std::vector<double> bx, by;
  std::size_t i = 0;
  int bin = 0;
  while (i < pts.size()) {
    const double hi = lo + (bin + 1.0) / bins_per_decade;
    double acc = 0.0, at = 0.0;
    std::size_t cnt = 0;
    while (i < pts.size() && pts[i].first < hi + 1e-12) {
      acc += sqr(pts[i].second);
      at += pts[i].first;
      ++cnt;
      ++i;
    }
    if (cnt >= 4 && acc > 0.0) {
      const double rms = std::sqrt(acc / static_cast<double>(cnt));
      bx.push_back(at / static_cast<double>(cnt));
      by.push_back(std::log10(rms));
      rep.envelope.emplace_back(std::pow(10.0, bx.back()), rms);
    }
    ++bin;
  }
  if (bx.size() >= 3) {
    const auto fit = detail::least_squares(bx, by, 0, bx.size());
    rep.fitted_slope = fit.slope;  // |R|_rms ~ mu^(d/2)
    rep.fitted_exponent = 2.0 * fit.slope;
  }
  return rep;
}

struct SpectralResidueReport {
  double value = 0.0;
  double expected = 0.0;  // N omega_N |Omega| / (2 pi)^N
  double residual = 0.0;
  bool slow_convergence = false;
};

// res(zeta*, N) by first-order Richardson elimination of h * zeta*(N + h) on
// the geometric ladder h = 1e-1, 1e-2, 1e-3.
inline SpectralResidueReport spectral_residue_check(const EigenvalueModel& m,
                                                    double mu_max = 4.0e6,
                                                    double warn_tol = 0.05) {
  const int N = ambient_dim(m);
  SpectralResidueReport rep;
  rep.expected = static_cast<double>(N) * unit_ball_volume(N) * model_volume(m) /
                 std::pow(2.0 * pi, N);
  const double hs[3] = {1e-1, 1e-2, 1e-3};
  double F[3];
  for (int i = 0; i < 3; ++i)
    F[i] = hs[i] * spectral_zeta(m, cdouble(static_cast<double>(N) + hs[i]), mu_max).value.real();
  const double G0 = (10.0 * F[1] - F[0]) / 9.0;
  const double G1 = (10.0 * F[2] - F[1]) / 9.0;
  rep.value = G1;
  rep.residual = std::abs(G1 - G0);
  rep.slow_convergence = rep.residual > warn_tol * std::abs(rep.expected);
  return rep;
}

}  // namespace fzeta
