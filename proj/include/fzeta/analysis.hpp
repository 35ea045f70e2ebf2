#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "fzeta/core.hpp"
#include "fzeta/forms.hpp"
#include "fzeta/zeta.hpp"

namespace fzeta {

// ---------------------------------------------------------------------------
// Dimension and content estimation from tube samples
// ---------------------------------------------------------------------------

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                             std::size_t lo, std::size_t hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace detail

// Upper/lower box dimension from sliding log-log window slopes; contents from
// the extremes of |A_t| / t^(N-D) on the smallest sampled decade.
inline DimensionReport estimate_dimensions(const TubeSamples& ts) {
  ts.validate();
  const int N = ts.ambient_dim;
  const std::size_t n = ts.samples.size();
  if (n < 8) throw domain_error("estimate_dimensions: too few samples");
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(ts.samples[i].t);
    y[i] = std::log(ts.samples[i].volume);
  }
  const double ln10 = std::log(10.0);
  const double decades = (x.back() - x.front()) / ln10;
  if (decades < 1.5) throw domain_error("estimate_dimensions: need at least 1.5 decades of t");

  DimensionReport rep;
  rep.decades_covered = decades;

  // Window slopes: one decade wide, stepped by 1/8 decade, confined to the
  // smallest two decades of t.
  const double win = ln10;
  const double step = ln10 / 8.0;
  const double x_hi = std::min(x.back(), x.front() + 2.0 * ln10);
  double min_slope = std::numeric_limits<double>::infinity();
  double max_slope = -min_slope;
  double smallest_window_slope = 0.0;
  bool have_window = false;
  for (double w0 = x.front(); w0 + win <= x_hi + 1e-12; w0 += step) {
    std::size_t lo = 0, hi = 0;
    while (lo < n && x[lo] < w0) ++lo;
    hi = lo;
    while (hi < n && x[hi] <= w0 + win) ++hi;
    if (hi - lo < 4) continue;
    const double s = detail::least_squares(x, y, lo, hi).slope;
    if (!have_window) {
      smallest_window_slope = s;
      have_window = true;
    }
    min_slope = std::min(min_slope, s);
    max_slope = std::max(max_slope, s);
  }
  rep.upper_dim = N - min_slope;
  rep.lower_dim = N - max_slope;
  rep.window_spread = rep.upper_dim - rep.lower_dim;

  // Point estimate: near-clean power laws read best off the smallest decade,
  // while oscillating tube functions need the full lever arm to average the
  // log-periodic ripple out of the slope.
  rep.fit_dim = (have_window && rep.window_spread < 1e-3)
                    ? N - smallest_window_slope
                    : N - detail::least_squares(x, y, 0, n).slope;

  // Contents on the smallest decade at the fitted dimension.
  double inf_c = std::numeric_limits<double>::infinity();
  double sup_c = 0.0;
  for (std::size_t i = 0; i < n && x[i] <= x.front() + ln10 + 1e-12; ++i) {
    const double c = ts.samples[i].volume * std::exp(-(N - rep.fit_dim) * x[i]);
    inf_c = std::min(inf_c, c);
    sup_c = std::max(sup_c, c);
  }
  rep.lower_content = inf_c;
  rep.upper_content = sup_c;
  rep.upper_content_infinite = sup_c >= 1e6;
  rep.lower_content_zero = inf_c <= 1e-6;
  rep.classification = (rep.upper_content_infinite || rep.lower_content_zero ||
                        rep.window_spread > 0.1)
                           ? SetClass::degenerate
                           : SetClass::measurable;
  return rep;
}

// ---------------------------------------------------------------------------
// Log-periodic oscillation fit
// ---------------------------------------------------------------------------

struct OscillationFit {
  double D = 0.0;
  bool period_found = false;
  double period = 0.0;
  double mean = 0.0;       // (1/T) int_0^T G
  double amplitude = 0.0;  // max G - min G over the samples
  double fit_residual = 0.0;
  std::vector<std::pair<int, cdouble>> fourier;  // (k, (1/T) G0_hat(k/T))
  std::vector<double> candidate_periods;         // diagnostics when no single period
  std::vector<std::pair<double, double>> g_samples;  // one period of (tau, G)
};

struct FitOptions {
  double scan_lo = 0.2;
  double scan_hi = 5.0;
  double scan_step = 1e-4;
  double match_tol = 1e-6;   // normalized mismatch accepted as an exact period
  double loose_tol = 0.25;   // candidate threshold for diagnostics
  int fourier_modes = 8;
  int resample = 2048;
};

namespace detail {

// Normalized mean-square mismatch between G and its T'-shift, interpolating
// the shifted value on the uniform grid. trim drops the worst fraction of
// pointwise errors: the tube function of a self-similar set has kinks whose
// interpolation error would otherwise mask an exactly matching period.
inline double shift_mismatch(const std::vector<double>& tau, const std::vector<double>& g,
                             double var, double T, double trim = 0.0) {
  const double h = tau[1] - tau[0];
  std::vector<double> errs;
  errs.reserve(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double target = tau[i] + T;
    if (target > tau.back() + 1e-12) break;
    const double pos = (target - tau.front()) / h;
    const std::size_t j = static_cast<std::size_t>(pos);
    if (j + 1 >= g.size()) break;
    const double frac = pos - static_cast<double>(j);
    const double gi = (1.0 - frac) * g[j] + frac * g[j + 1];
    errs.push_back(sqr(g[i] - gi));
  }
  if (errs.size() < 8) return std::numeric_limits<double>::infinity();
  std::size_t keep = errs.size();
  if (trim > 0.0) {
    keep = errs.size() - static_cast<std::size_t>(trim * static_cast<double>(errs.size()));
    std::nth_element(errs.begin(), errs.begin() + static_cast<std::ptrdiff_t>(keep), errs.end());
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < keep; ++i) acc += errs[i];
  return acc / (static_cast<double>(keep) * std::max(var, 1e-300));
}

inline double golden_minimize(const std::function<double(double)>& f, double a, double b,
                              double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Forms h(tau) = |A_t| t^(D-N) on the geometric grid, detects the
// multiplicative period by an autocorrelation sweep, and extracts one
// period's Fourier coefficients with absolute phase.
inline OscillationFit fit_log_periodic(const TubeSamples& ts, double D,
                                       const FitOptions& opt = {}) {
  const int N = ts.ambient_dim;
  const std::size_t n = ts.samples.size();
  if (n < 32) throw domain_error("fit_log_periodic: too few samples");
  std::vector<double> tau(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = ts.samples[n - 1 - i];  // ascending tau = descending t
    tau[i] = std::log(1.0 / s.t);
    g[i] = s.volume * std::exp((N - D) * tau[i]);  // |A_t| / t^(N-D)
  }
  const double h = tau[1] - tau[0];
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (std::abs((tau[i + 1] - tau[i]) - h) > 1e-8 * std::max(1.0, h))
      throw domain_error("fit_log_periodic: samples must lie on a geometric grid");

  OscillationFit fit;
  fit.D = D;
  double mean = 0.0, mn = g[0], mx = g[0];
  for (double v : g) {
    mean += v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  mean /= static_cast<double>(n);
  fit.amplitude = mx - mn;
  double var = 0.0;
  for (double v : g) var += sqr(v - mean);
  var /= static_cast<double>(n);

  if (fit.amplitude <= 1e-10 * std::max(1.0, std::abs(mean))) {
    fit.mean = mean;
    fit.fourier.emplace_back(0, cdouble(mean));
    return fit;  // constant fit, period flag unset
  }

  auto coarse = [&](double T) { return detail::shift_mismatch(tau, g, var, T); };
  auto robust = [&](double T) { return detail::shift_mismatch(tau, g, var, T, 0.02); };

  // Coarse sweep, then polish each local minimum on the robust metric; accept
  // the smallest period whose polished mismatch clears the match tolerance.
  std::vector<std::pair<double, double>> minima;  // (T, robust mismatch)
  double prev2 = coarse(opt.scan_lo), prev1 = coarse(opt.scan_lo + opt.scan_step);
  const double scan_hi = std::min(opt.scan_hi, (tau.back() - tau.front()) * 0.5);
  for (double T = opt.scan_lo + 2.0 * opt.scan_step; T <= scan_hi; T += opt.scan_step) {
    const double cur = coarse(T);
    if (prev1 < prev2 && prev1 <= cur && prev1 < opt.loose_tol) {
      const double Tm =
          detail::golden_minimize(robust, T - 2.0 * opt.scan_step, T, 1e-10);
      minima.emplace_back(Tm, robust(Tm));
    }
    prev2 = prev1;
    prev1 = cur;
  }
  std::optional<double> period;
  for (auto& [T, r] : minima) {
    if (r < opt.match_tol) {
      period = T;
      fit.fit_residual = std::sqrt(r);
      break;  // smallest matching period first
    }
  }
  if (!period) {
    std::sort(minima.begin(), minima.end(),
              [](auto& a, auto& b) { return a.second < b.second; });
    for (std::size_t i = 0; i < minima.size() && i < 3; ++i)
      fit.candidate_periods.push_back(minima[i].first);
    fit.mean = mean;
    fit.fourier.emplace_back(0, cdouble(mean));
    return fit;
  }

  fit.period_found = true;
  fit.period = *period;
  const double T = *period;

  // Resample the deepest full period (largest tau) and integrate the Fourier
  // coefficients with the absolute tau phase.
  const double tau_end = tau.back();
  const double tau_start = tau_end - T;
  if (tau_start < tau.front())
    throw domain_error("fit_log_periodic: samples cover less than one period");
  const int M = opt.resample;
  std::vector<double> gp(M);
  for (int j = 0; j < M; ++j) {
    const double t = tau_start + T * j / M;
    const double pos = (t - tau.front()) / h;
    const auto idx = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(idx);
    gp[j] = idx + 1 < n ? (1.0 - frac) * g[idx] + frac * g[idx + 1] : g[idx];
  }
  for (int k = -opt.fourier_modes; k <= opt.fourier_modes; ++k) {
    cdouble acc = 0.0;
    for (int j = 0; j < M; ++j) {
      const double t = tau_start + T * j / M;
      acc += gp[j] * std::exp(cdouble(0.0, -2.0 * pi * k * t / T));
    }
    fit.fourier.emplace_back(k, acc / static_cast<double>(M));
  }
  for (auto& [k, c] : fit.fourier)
    if (k == 0) fit.mean = c.real();
  fit.g_samples.reserve(M);
  for (int j = 0; j < M; ++j) fit.g_samples.emplace_back(tau_start + T * j / M, gp[j]);
  return fit;
}

// ---------------------------------------------------------------------------
// Contour residues
// ---------------------------------------------------------------------------

// (1/2 pi i) contour integral of f on |s - pole| = radius by the midpoint
// rule, doubling nodes until stable; exponentially convergent off poles.
inline cdouble numeric_residue(const std::function<cdouble(cdouble)>& f, cdouble pole,
                               double radius, double tol = 1e-10) {
  auto ring = [&](int M) {
    cdouble acc = 0.0;
    for (int j = 0; j < M; ++j) {
      const double th = 2.0 * pi * (j + 0.5) / M;
      const cdouble e = std::polar(1.0, th);
      acc += f(pole + radius * e) * e;
    }
    return acc * (radius / static_cast<double>(M));
  };
  cdouble prev = ring(16);
  for (int M = 32; M <= 16384; M *= 2) {
    const cdouble cur = ring(M);
    if (std::abs(cur - prev) < tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  throw domain_error("numeric_residue: contour did not stabilize; a second pole may be near");
}

// First moment alongside the residue: for an isolated simple pole,
// (1/2 pi i) contour of s f(s) equals residue * pole location.
inline std::pair<cdouble, cdouble> contour_moments(const std::function<cdouble(cdouble)>& f,
                                                   cdouble center, double radius, int M = 256) {
  cdouble s0 = 0.0, s1 = 0.0;
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * pi * (j + 0.5) / M;
    const cdouble e = std::polar(1.0, th);
    const cdouble z = center + radius * e;
    const cdouble fz = f(z);
    s0 += fz * e;
    s1 += z * fz * e;
  }
  const double w = radius / static_cast<double>(M);
  return {s0 * w, s1 * w};
}

// ---------------------------------------------------------------------------
// Pole scan by the argument principle
// ---------------------------------------------------------------------------

struct Window {
  double re0, re1, im0, im1;
};

struct PoleScanOptions {
  double locate_tol = 1e-6;
  double seed_cell = 0.5;   // subdivide blindly until cells are this small
  double moment_cell = 0.02;  // switch from subdivision to contour moments
  double jitter = 1e-4;
  int max_depth = 48;
  double residue_tol = 1e-10;
};

namespace detail {

struct BoundaryPole {};

// Total argument increment of w = 1/f along the segment [a, b].
inline double walk_phase(const std::function<cdouble(cdouble)>& f, cdouble a, cdouble b,
                         cdouble wa, cdouble wb, int depth) {
  const cdouble ratio = wb / wa;
  const double dphi = std::arg(ratio);
  if (std::abs(dphi) <= 0.5 * pi && std::isfinite(dphi)) return dphi;
  if (depth > 48 || std::abs(b - a) < 1e-13) throw BoundaryPole{};
  const cdouble m = 0.5 * (a + b);
  const cdouble fm = f(m);
  if (!std::isfinite(std::abs(fm)) || std::abs(fm) == 0.0) throw BoundaryPole{};
  const cdouble wm = 1.0 / fm;
  return walk_phase(f, a, m, wa, wm, depth + 1) + walk_phase(f, m, b, wm, wb, depth + 1);
}

inline int winding_of_reciprocal(const std::function<cdouble(cdouble)>& f, const Window& w) {
  const cdouble corners[5] = {{w.re0, w.im0}, {w.re1, w.im0}, {w.re1, w.im1},
                              {w.re0, w.im1}, {w.re0, w.im0}};
  double total = 0.0;
  cdouble prev_w;
  {
    const cdouble f0 = f(corners[0]);
    if (!std::isfinite(std::abs(f0)) || std::abs(f0) == 0.0) throw BoundaryPole{};
    prev_w = 1.0 / f0;
  }
  cdouble wa = prev_w;
  for (int e = 0; e < 4; ++e) {
    // March each edge in fixed sub-steps, refining adaptively inside.
    const cdouble a = corners[e], b = corners[e + 1];
    const int steps = 8;
    for (int i = 1; i <= steps; ++i) {
      const cdouble z = a + (b - a) * (static_cast<double>(i) / steps);
      const cdouble fz = f(z);
      if (!std::isfinite(std::abs(fz)) || std::abs(fz) == 0.0) throw BoundaryPole{};
      const cdouble wz = 1.0 / fz;
      total += walk_phase(f, a + (b - a) * (static_cast<double>(i - 1) / steps), z, wa, wz, 0);
      wa = wz;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

}  // namespace detail

// Locates poles of f inside the window: quadtree on the winding number of
// 1/f, then contour-moment polishing. Cells are first split to seed_cell so a
// pole/zero pair cannot silently cancel across a coarse cell.
inline std::vector<PoleReport> pole_scan(
    const std::function<cdouble(cdouble)>& f, const Window& window, int grid,
    const PoleScanOptions& opt = {},
    const std::function<cdouble(cdouble)>& analytic_residue = nullptr) {
  struct Cell {
    Window w;
    int depth;
    bool jittered;
  };
  std::vector<Cell> stack;
  const double dre = (window.re1 - window.re0) / grid;
  const double dim_ = (window.im1 - window.im0) / grid;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      stack.push_back({{window.re0 + i * dre, window.re0 + (i + 1) * dre,
                        window.im0 + j * dim_, window.im0 + (j + 1) * dim_},
                       0,
                       false});

  std::vector<PoleReport> found;
  while (!stack.empty()) {
    Cell cell = stack.back();
    stack.pop_back();
    const double w_re = cell.w.re1 - cell.w.re0;
    const double w_im = cell.w.im1 - cell.w.im0;
    const double size = std::max(w_re, w_im);

    int winding = 0;
    try {
      winding = detail::winding_of_reciprocal(f, cell.w);
    } catch (const detail::BoundaryPole&) {
      if (cell.jittered)
        throw domain_error("pole_scan: winding integrand ill-conditioned after jitter");
      const double j = opt.jitter * size;
      stack.push_back({{cell.w.re0 - j, cell.w.re1 + j, cell.w.im0 - j, cell.w.im1 + j},
                       cell.depth,
                       true});
      continue;
    }

    const bool must_split = size > opt.seed_cell;
    if (winding <= 0 && !must_split) continue;  // zeros of f or nothing
    if (cell.depth > opt.max_depth) throw domain_error("pole_scan: subdivision depth exhausted");

    if (must_split || (winding > 0 && size > opt.moment_cell)) {
      const double mre = 0.5 * (cell.w.re0 + cell.w.re1);
      const double mim = 0.5 * (cell.w.im0 + cell.w.im1);
      stack.push_back({{cell.w.re0, mre, cell.w.im0, mim}, cell.depth + 1, false});
      stack.push_back({{mre, cell.w.re1, cell.w.im0, mim}, cell.depth + 1, false});
      stack.push_back({{cell.w.re0, mre, mim, cell.w.im1}, cell.depth + 1, false});
      stack.push_back({{mre, cell.w.re1, mim, cell.w.im1}, cell.depth + 1, false});
      continue;
    }

    // Isolated pole cell: polish by contour moments.
    cdouble center(0.5 * (cell.w.re0 + cell.w.re1), 0.5 * (cell.w.im0 + cell.w.im1));
    double radius = 0.75 * std::hypot(w_re, w_im);
    cdouble res = 0.0;
    if (winding == 1) {
      for (int it = 0; it < 60; ++it) {
        auto [s0, s1] = contour_moments(f, center, radius);
        if (std::abs(s0) < 1e-14) break;
        const cdouble p = s1 / s0;
        const double shift = std::abs(p - center);
        center = p;
        res = s0;
        if (shift < 1e-11 && radius <= 4.0 * opt.locate_tol) break;
        radius = std::max(std::min(radius * 0.5, 8.0 * shift + 0.25 * radius),
                          2.0 * opt.locate_tol);
      }
      res = numeric_residue(f, center, radius, opt.residue_tol);
    } else {
      // Multiple pole: localize by subdivision only, residue from the ring.
      Window wloc = cell.w;
      while (std::max(wloc.re1 - wloc.re0, wloc.im1 - wloc.im0) > opt.locate_tol) {
        const double mre = 0.5 * (wloc.re0 + wloc.re1);
        const double mim = 0.5 * (wloc.im0 + wloc.im1);
        bool placed = false;
        const Window quads[4] = {{wloc.re0, mre, wloc.im0, mim},
                                 {mre, wloc.re1, wloc.im0, mim},
                                 {wloc.re0, mre, mim, wloc.im1},
                                 {mre, wloc.re1, mim, wloc.im1}};
        for (const auto& q : quads) {
          try {
            if (detail::winding_of_reciprocal(f, q) == winding) {
              wloc = q;
              placed = true;
              break;
            }
          } catch (const detail::BoundaryPole&) {
            continue;
          }
        }
        if (!placed) break;
      }
      center = cdouble(0.5 * (wloc.re0 + wloc.re1), 0.5 * (wloc.im0 + wloc.im1));
      res = numeric_residue(f, center, 2.0 * std::max(wloc.re1 - wloc.re0, wloc.im1 - wloc.im0),
                            opt.residue_tol);
    }

    PoleReport rep;
    rep.location = center;
    rep.multiplicity = winding;
    rep.numeric_residue = res;
    if (analytic_residue) {
      rep.analytic_residue = analytic_residue(center);
      rep.residue_discrepancy = std::abs(*rep.analytic_residue - res);
    }
    found.push_back(rep);
  }

  // Deduplicate (jittered cells may report twice) and keep window interior.
  std::vector<PoleReport> out;
  for (auto& r : found) {
    if (r.location.real() < window.re0 - 1e-9 || r.location.real() > window.re1 + 1e-9 ||
        r.location.imag() < window.im0 - 1e-9 || r.location.imag() > window.im1 + 1e-9)
      continue;
    bool dup = false;
    for (auto& o : out)
      if (std::abs(o.location - r.location) < 10.0 * opt.locate_tol) dup = true;
    if (!dup) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const PoleReport& a, const PoleReport& b) {
    return a.location.imag() != b.location.imag() ? a.location.imag() < b.location.imag()
                                                  : a.location.real() < b.location.real();
  });
  return out;
}

inline std::vector<PoleReport> pole_scan(const MeromorphicForm& form, const Window& window,
                                         int grid, const PoleScanOptions& opt = {}) {
  return pole_scan(form.evaluator, window, grid, opt, form.residue_at);
}

// ---------------------------------------------------------------------------
// Richardson residue along the real axis
// ---------------------------------------------------------------------------

struct RichardsonResidue {
  double value = 0.0;
  double residual = 0.0;  // spread of successive eliminations
};

// res = lim_{h->0} h f(D+h) assuming h f(D+h) = res + c h + O(h^2); pairs of
// the geometric h-ladder eliminate the linear term.
inline RichardsonResidue richardson_residue(const std::function<double(double)>& f_at,
                                            const std::vector<double>& hs = {1e-1, 1e-2, 1e-3}) {
  std::vector<double> F;
  for (double h : hs) F.push_back(h * f_at(h));
  std::vector<double> G;
  for (std::size_t i = 0; i + 1 < F.size(); ++i) {
    const double r = hs[i] / hs[i + 1];
    G.push_back((r * F[i + 1] - F[i]) / (r - 1.0));
  }
  RichardsonResidue out;
  out.value = G.back();
  out.residual = std::abs(G.back() - G.front());
  return out;
}

// Full polynomial (Neville) extrapolation of an analytic F(h) to h = 0; the
// residual is the last correction magnitude.
inline RichardsonResidue extrapolate_to_zero(const std::function<double(double)>& F,
                                             const std::vector<double>& hs) {
  const std::size_t n = hs.size();
  std::vector<double> tab(n);
  for (std::size_t i = 0; i < n; ++i) tab[i] = F(hs[i]);
  double last_correction = 0.0;
  for (std::size_t level = 1; level < n; ++level) {
    const double prev = tab[0];
    for (std::size_t i = 0; i + level < n; ++i) {
      const double num = hs[i] * tab[i + 1] - hs[i + level] * tab[i];
      tab[i] = num / (hs[i] - hs[i + level]);
    }
    last_correction = std::abs(tab[0] - prev);
  }
  return {tab[0], last_correction};
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

struct Classification {
  SetClass tag = SetClass::measurable;
  double period = 0.0;
  double oscillatory_period = 0.0;  // 2 pi / period
  double confidence_residual = 0.0;
};

inline Classification classify(const DimensionReport& dims, const OscillationFit& fit,
                               double amp_tol = 1e-8, double residual_tol = 1e-4) {
  Classification c;
  if (dims.upper_content_infinite || dims.lower_content_zero || dims.window_spread > 0.1) {
    c.tag = SetClass::degenerate;
    return c;
  }
  if (fit.amplitude <= amp_tol * std::max(1.0, std::abs(fit.mean))) {
    c.tag = SetClass::measurable;
    return c;
  }
  if (fit.period_found && fit.fit_residual <= residual_tol) {
    c.tag = SetClass::periodic;
    c.period = fit.period;
    c.oscillatory_period = 2.0 * pi / fit.period;
    c.confidence_residual = fit.fit_residual;
    return c;
  }
  c.tag = SetClass::nonperiodic;
  c.confidence_residual = fit.fit_residual;
  return c;
}

// ---------------------------------------------------------------------------
// Residue-content identities
// ---------------------------------------------------------------------------

struct ResidueContentReport {
  double dim = 0.0;
  double tube_residue = 0.0;
  double distance_residue = 0.0;
  double lower_content = 0.0;
  double upper_content = 0.0;
  bool measurable = false;
  bool identity_ok = false;       // measurable: res(zeta~, D) = M
  bool sandwich_strict = false;   // nonmeasurable: M_* < res(zeta~, D) < M^*
  double margin = 0.0;
  double numerical_error = 0.0;
};

inline ResidueContentReport residue_content_check_circle(double R, double delta) {
  MeromorphicForm tube = sphere_tube_zeta_form(2, R, delta);
  ResidueContentReport rep;
  rep.dim = 1.0;
  rep.tube_residue = numeric_residue(tube.evaluator, cdouble(1.0), 0.4).real();
  rep.distance_residue = (2.0 - 1.0) * rep.tube_residue;
  const double M = 4.0 * pi * R;  // |A_t| = 4 pi R t, content at D = 1
  rep.lower_content = rep.upper_content = M;
  rep.measurable = true;
  rep.numerical_error = 1e-10 * M;
  rep.identity_ok = std::abs(rep.tube_residue - M) <= 1e-8 * M;
  return rep;
}

inline ResidueContentReport residue_content_check_cantor(const GeneralizedCantorParams& p,
                                                          double delta = 0.0) {
  const double D = p.dimension();
  const double c = p.gap_half_width();
  ResidueContentReport rep;
  rep.dim = D;
  // Content extremes straight from the extremal values of the oscillation G.
  rep.lower_content = (1.0 / D) * std::pow(2.0 * D / (1.0 - D), 1.0 - D);
  rep.upper_content = std::pow(c, D - 1.0) * p.m * (1.0 - p.a_value()) / (p.m - 1);
  MeromorphicForm dist = cantor_distance_zeta_form(p, delta);
  rep.distance_residue = numeric_residue(dist.evaluator, cdouble(D), 0.25 * std::min(D, 1.0 - D)).real();
  rep.tube_residue = rep.distance_residue / (1.0 - D);
  rep.measurable = false;
  rep.numerical_error = 1e-9 * std::abs(rep.tube_residue) + 1e-12;
  const double lo_margin = rep.tube_residue - rep.lower_content;
  const double hi_margin = rep.upper_content - rep.tube_residue;
  rep.margin = std::min(lo_margin, hi_margin);
  rep.sandwich_strict = rep.margin > 10.0 * rep.numerical_error;
  return rep;
}

inline ResidueContentReport residue_content_check_cusp(double alpha) {
  const double D = 1.0 - alpha;
  ResidueContentReport rep;
  rep.dim = D;
  const CuspRegion region{alpha, 1.0, 1.0};
  auto zeta_at = [&](double h) { return cusp_relative_zeta(region, cdouble(D + h)).value.real(); };
  const auto res = richardson_residue(zeta_at);
  rep.distance_residue = res.value;
  rep.tube_residue = res.value / (2.0 - D);
  rep.lower_content = rep.upper_content = 1.0 / (1.0 + alpha);
  rep.measurable = true;
  rep.numerical_error = res.residual + 1e-10;
  rep.identity_ok =
      std::abs(rep.distance_residue - (2.0 - D) * rep.lower_content) <= 0.01 * std::abs(rep.distance_residue);
  return rep;
}

}  // namespace fzeta
