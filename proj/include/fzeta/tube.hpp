#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "fzeta/core.hpp"

namespace fzeta {

// ---------------------------------------------------------------------------
// Closed-form tube volumes
// ---------------------------------------------------------------------------

namespace detail {
// 1-periodic sawtooth g(x) = 1 - x on (0,1].
inline double sawtooth(double x) {
  double f = x - std::floor(x);
  return f == 0.0 ? 0.0 : 1.0 - f;
}
}  // namespace detail

// Oscillation factor of the C^(m,a) tube formula: |C_t| = t^(1-D) G(log(1/t))
// on (0, c), c = (1-ma)/(2(m-1)). G is log(1/a)-periodic; the phase is fixed
// so that the sawtooth vanishes at t = c.
inline double cantor_tube_oscillation(const GeneralizedCantorParams& p, double tau) {
  const double D = p.dimension();
  const double T = p.period();
  const double c = p.gap_half_width();
  const double g = detail::sawtooth((tau - std::log(1.0 / c)) / T);
  const double ma = p.m * p.a_value();
  return std::pow(c, D - 1.0) * std::pow(ma, g) + 2.0 * std::pow(c, D) * std::pow(static_cast<double>(p.m), g);
}

inline double cantor_tube_volume(const GeneralizedCantorParams& p, double t) {
  p.validate();
  const double c = p.gap_half_width();
  if (!(t > 0.0 && t < c))
    throw domain_error("cantor_tube_volume: formula valid only for 0 < t < (1-ma)/(2(m-1))");
  const double D = p.dimension();
  return std::pow(t, 1.0 - D) * cantor_tube_oscillation(p, std::log(1.0 / t));
}

// Exact |C_t| for every t > 0, from the gap decomposition: generations whose
// holes are wider than 2t contribute 2t per hole, the rest contribute their
// full width. Collapses to 2t m^(n0-1) + (ma)^(n0-1).
inline double cantor_tube_volume_gaps(const GeneralizedCantorParams& p, double t) {
  p.validate();
  if (!(t > 0.0)) throw domain_error("cantor_tube_volume_gaps: t > 0");
  const double a = p.a_value();
  const double two_c = 2.0 * p.gap_half_width();
  // First generation n0 with width a^(n0-1) * 2c < 2t.
  double n0 = 1.0;
  if (two_c >= 2.0 * t) n0 = std::floor(std::log(2.0 * t / two_c) / std::log(a)) + 2.0;
  const double ma = p.m * a;
  return 2.0 * t * std::pow(static_cast<double>(p.m), n0 - 1.0) + std::pow(ma, n0 - 1.0);
}

// Sum_j min(l_j, 2t): the inner tube |A_t ∩ Omega_L| of the string drum.
inline double string_tube_volume(const FractalString& s, double t) {
  if (!(t > 0.0)) throw domain_error("string_tube_volume: t > 0");
  const double two_t = 2.0 * t;
  using Rule = FractalString::Rule;
  // Count of lengths >= 2t (ties saturate), then the exact tail.
  std::uint64_t j_sat = 0;
  switch (s.rule()) {
    case Rule::explicit_list: {
      double acc = 0.0;
      for (std::uint64_t j = 1; j <= s.explicit_count(); ++j) acc += std::min(s.length(j), two_t);
      return acc;
    }
    case Rule::geometric: {
      const double r = s.ratio();
      if (two_t > r) return s.total_length();
      j_sat = static_cast<std::uint64_t>(std::floor(std::log(two_t) / std::log(r)));
      break;
    }
    case Rule::cantor_gaps: {
      const int m = s.branch_count();
      if (s.cantor_gap_width(1) < two_t) return s.total_length();
      // widths a^(n-1)(1-ma)/(m-1) >= 2t up to generation n*.
      std::uint64_t n_star = 1;
      while (s.cantor_gap_width(n_star + 1) >= two_t) ++n_star;
      double cnt = std::pow(static_cast<double>(m), static_cast<double>(n_star)) - 1.0;
      if (cnt > 9e18) throw capacity_error("string_tube_volume: t too small for exact count");
      j_sat = static_cast<std::uint64_t>(cnt + 0.5);
      break;
    }
    case Rule::power: {
      std::uint64_t j = 0;
      while (s.length(j + 1) >= two_t) ++j;
      j_sat = j;
      break;
    }
    case Rule::triangular: {
      std::uint64_t j = 0;
      while (s.length(j + 1) >= two_t) ++j;
      j_sat = j;
      break;
    }
  }
  const double sat = static_cast<double>(j_sat) * two_t;
  return sat + s.tail_sum(j_sat + 1).first;
}

// omega_N ((R+t)^N - (R-t)^N): two-sided collar of the (N-1)-sphere. The
// even binomial terms cancel exactly, so summing the odd ones keeps the value
// accurate down to arbitrarily small t.
inline double sphere_tube_volume(int N, double R, double t) {
  if (N < 1) throw domain_error("sphere_tube_volume: N >= 1");
  if (!(t > 0.0 && t < R)) throw domain_error("sphere_tube_volume: need 0 < t < R");
  const double wN = unit_ball_volume(N);
  double acc = 0.0;
  for (int k = 1; k <= N; k += 2)
    acc += 2.0 * binomial(N, k) * std::pow(R, N - k) * std::pow(t, k);
  return wN * acc;
}

// Collar volume valid for all t (fills the ball once t >= R).
inline double sphere_tube_volume_all(int N, double R, double t) {
  if (t < R) return sphere_tube_volume(N, R, t);
  const double wN = unit_ball_volume(N);
  return wN * std::pow(R + t, N);
}

// ---------------------------------------------------------------------------
// Cusp drums (exact piecewise evaluation)
// ---------------------------------------------------------------------------

namespace detail {

inline double circle_segment_antiderivative(double x, double t) {
  // int sqrt(t^2 - x^2) dx
  const double r = std::max(t * t - x * x, 0.0);
  return 0.5 * (x * std::sqrt(r) + t * t * std::asin(std::clamp(x / t, -1.0, 1.0)));
}

// Crossover of profile(x) (increasing from 0) with sqrt(t^2 - x^2) on (0, hi].
inline double crossover(const std::function<double(double)>& profile, double t, double hi) {
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = profile(mid) - std::sqrt(std::max(t * t - mid * mid, 0.0));
    (f < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-17 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 48);
}

}  // namespace detail

// |A_t ∩ Omega| for A = {origin}, Omega = {0 < y < coeff x^alpha, 0 < x < x_max}:
// integral over x of min(coeff x^alpha, sqrt(t^2 - x^2)).
inline double cusp_tube_volume(const CuspRegion& r, double t) {
  if (!(t > 0.0)) throw domain_error("cusp_tube_volume: t > 0");
  const double x_up = std::min(r.x_max, t);
  if (x_up <= 0.0) return 0.0;
  auto profile = [&](double x) { return r.coeff * std::pow(x, r.alpha); };
  const double disk_at_up = std::sqrt(std::max(t * t - x_up * x_up, 0.0));
  auto cusp_part = [&](double x) { return r.coeff * std::pow(x, r.alpha + 1.0) / (r.alpha + 1.0); };
  if (profile(x_up) <= disk_at_up) return cusp_part(x_up);
  const double xc = detail::crossover(profile, t, x_up);
  return cusp_part(xc) + detail::circle_segment_antiderivative(x_up, t) -
         detail::circle_segment_antiderivative(xc, t);
}

inline double cusp_region_volume(const CuspRegion& r) {
  return r.coeff * std::pow(r.x_max, r.alpha + 1.0) / (r.alpha + 1.0);
}

inline double exp_cusp_tube_volume(const ExpCuspRegion& r, double t) {
  if (!(t > 0.0)) throw domain_error("exp_cusp_tube_volume: t > 0");
  const double x_up = std::min(r.x_max, t);
  if (x_up <= 0.0) return 0.0;
  auto profile = [&](double x) { return x <= 0.0 ? 0.0 : r.scale * std::exp(-r.x_scale / x); };
  const double disk_at_up = std::sqrt(std::max(t * t - x_up * x_up, 0.0));
  if (profile(x_up) <= disk_at_up) return detail::integrate(profile, 0.0, x_up);
  const double xc = detail::crossover(profile, t, x_up);
  return detail::integrate(profile, 0.0, xc) + detail::circle_segment_antiderivative(x_up, t) -
         detail::circle_segment_antiderivative(xc, t);
}

// ---------------------------------------------------------------------------
// Rasters and the exact Euclidean distance transform
// ---------------------------------------------------------------------------

struct DistanceField2D {
  int width = 0;
  int height = 0;
  std::vector<double> dist;  // physical distance to the nearest set pixel center
  double pixel_size = 0.0;
  Box2D extent;
  std::vector<std::uint8_t> mask;  // original set pixels
  bool cell_exact = false;  // distances measured to closed set cells, not centers
  double at(int x, int y) const { return dist[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

// Exact 1-D squared distance transform (lower envelope of parabolas).
inline void dt1d(const std::vector<double>& f, std::vector<double>& d, int n) {
  static constexpr double kInf = 1e30;
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * static_cast<double>(q - v[k]) + f[v[k]];
  }
}

}  // namespace detail

inline int raster_resolution_cap() {
  if (const char* env = std::getenv("FZETA_RASTER_CAP")) {
    const int cap = std::atoi(env);
    if (cap > 0) return cap;
  }
  return 8192;
}

// Two-pass exact EDT on the pixel lattice: each output value is the true
// Euclidean distance from the pixel center to the nearest set pixel center.
inline DistanceField2D distance_transform(const PixelSet2D& px) {
  static constexpr double kInf = 1e30;
  const int w = px.width, h = px.height;
  if (w > raster_resolution_cap() || h > raster_resolution_cap())
    throw capacity_error("distance_transform: resolution above the configured cap");
  DistanceField2D out;
  out.width = w;
  out.height = h;
  out.extent = px.extent;
  out.pixel_size = px.pixel_size();
  out.mask = px.mask;
  out.dist.assign(static_cast<std::size_t>(w) * h, 0.0);

  std::vector<double> col(h), cold(h);
  std::vector<double> row(w), rowd(w);
  std::vector<double> stage(static_cast<std::size_t>(w) * h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) col[y] = px.at(x, y) ? 0.0 : kInf;
    detail::dt1d(col, cold, h);
    for (int y = 0; y < h; ++y) stage[static_cast<std::size_t>(y) * w + x] = cold[y];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) row[x] = stage[static_cast<std::size_t>(y) * w + x];
    detail::dt1d(row, rowd, w);
    for (int x = 0; x < w; ++x)
      out.dist[static_cast<std::size_t>(y) * w + x] = std::sqrt(rowd[x]) * out.pixel_size;
  }
  return out;
}

// Exact Euclidean distance to the union of CLOSED set cells (each set pixel
// taken as its full square). Row pass: 1-D distance to the cell intervals of
// each row; column pass: the directional costs (|j-q| - 1/2)^2 are plain
// parabolas, so the standard lower-envelope transform evaluated at the two
// half-integer offsets j -/+ 1/2 covers both directions exactly.
inline DistanceField2D cell_distance_transform(const PixelSet2D& px) {
  static constexpr double kInf = 1e30;
  const int w = px.width, h = px.height;
  if (w > raster_resolution_cap() || h > raster_resolution_cap())
    throw capacity_error("cell_distance_transform: resolution above the configured cap");
  DistanceField2D out;
  out.width = w;
  out.height = h;
  out.extent = px.extent;
  out.pixel_size = px.pixel_size();
  out.mask = px.mask;
  out.cell_exact = true;
  out.dist.assign(static_cast<std::size_t>(w) * h, 0.0);

  // Row pass: squared 1-D distance (in pixel units) from each center to the
  // nearest set-cell interval of the row.
  std::vector<double> rowsq(static_cast<std::size_t>(w) * h, kInf);
  for (int y = 0; y < h; ++y) {
    double last = -kInf;
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (px.at(x, y)) {
        last = x;
        rowsq[i] = 0.0;
      } else if (last > -kInf) {
        rowsq[i] = sqr(x - last - 0.5);
      }
    }
    double next = kInf;
    for (int x = w - 1; x >= 0; --x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (px.at(x, y))
        next = x;
      else if (next < kInf)
        rowsq[i] = std::min(rowsq[i], sqr(next - x - 0.5));
    }
  }

  // Column pass: lower envelope of parabolas (q, rowsq(x, q)), queried at the
  // half-integer offsets so the half-cell reach of each row is exact.
  std::vector<double> fq(h);
  std::vector<int> sites(h);
  std::vector<int> v(h);
  std::vector<double> z(h + 1);
  for (int x = 0; x < w; ++x) {
    int ns = 0;
    for (int y = 0; y < h; ++y) {
      const double val = rowsq[static_cast<std::size_t>(y) * w + x];
      if (val < kInf) {
        sites[ns] = y;
        fq[ns] = val;
        ++ns;
      }
    }
    if (ns == 0) {
      for (int y = 0; y < h; ++y)
        out.dist[static_cast<std::size_t>(y) * w + x] = std::sqrt(kInf) * out.pixel_size;
      continue;
    }
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int i = 1; i < ns; ++i) {
      const double qi = sites[i];
      double s;
      while (true) {
        const double qv = sites[v[k]];
        s = ((fq[i] + qi * qi) - (fq[v[k]] + qv * qv)) / (2.0 * (qi - qv));
        if (s > z[k]) break;
        --k;
      }
      ++k;
      v[k] = i;
      z[k] = s;
      z[k + 1] = kInf;
    }
    int kk = 0;  // queries are monotone in y, so the envelope cursor persists
    auto envelope_at = [&](double yq) {
      while (z[kk + 1] < yq) ++kk;
      return sqr(yq - sites[v[kk]]) + fq[v[kk]];
    };
    for (int y = 0; y < h; ++y) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (px.at(x, y)) {
        out.dist[i] = 0.0;
        continue;
      }
      double best = rowsq[i];  // same-row interval distance
      best = std::min(best, envelope_at(y - 0.5));
      best = std::min(best, envelope_at(y + 0.5));
      out.dist[i] = std::sqrt(best) * out.pixel_size;
    }
  }
  return out;
}

// Level-k Sierpinski carpet cells on a 3^k grid: pixel (i,j) survives iff no
// base-3 digit pair equals (1,1).
inline PixelSet2D sierpinski_carpet_mask(int level) {
  if (level < 1 || level > 8) throw capacity_error("sierpinski_carpet_mask: level 1..8");
  int n = 1;
  for (int i = 0; i < level; ++i) n *= 3;
  PixelSet2D px;
  px.width = n;
  px.height = n;
  px.extent = Box2D{0.0, 0.0, 1.0, 1.0};
  px.mask.assign(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int a = i, b = j;
      bool in = true;
      for (int d = 0; d < level; ++d) {
        if (a % 3 == 1 && b % 3 == 1) {
          in = false;
          break;
        }
        a /= 3;
        b /= 3;
      }
      if (in) px.mask[static_cast<std::size_t>(j) * n + i] = 1;
    }
  }
  return px;
}

inline PixelSet2D rasterize_sphere(const Sphere& s, int resolution, const Box2D& extent) {
  if (s.dim != 2) throw unsupported_error("rasterize_sphere: only 2-D rasters are supported");
  if (resolution < 16) throw domain_error("rasterize_sphere: resolution >= 16");
  PixelSet2D px;
  px.width = resolution;
  px.height = resolution;
  px.extent = extent;
  px.mask.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  const double hx = extent.width() / resolution;
  const double hy = extent.height() / resolution;
  const double cx = s.center.size() > 0 ? s.center[0] : 0.0;
  const double cy = s.center.size() > 1 ? s.center[1] : 0.0;
  const double half_diag = 0.5 * std::hypot(hx, hy);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      const double x = extent.x0 + (i + 0.5) * hx;
      const double y = extent.y0 + (j + 0.5) * hy;
      if (std::abs(std::hypot(x - cx, y - cy) - s.radius) <= half_diag)
        px.mask[static_cast<std::size_t>(j) * resolution + i] = 1;
    }
  }
  return px;
}

inline DistanceField2D raster_distance_field(const SetDescriptor& set, int resolution,
                                             const Box2D& extent) {
  if (resolution < 16) throw domain_error("raster_distance_field: resolution >= 16");
  if (const auto* px = std::get_if<PixelSet2D>(&set.value)) return distance_transform(*px);
  if (const auto* sp = std::get_if<Sphere>(&set.value))
    return distance_transform(rasterize_sphere(*sp, resolution, extent));
  throw unsupported_error("raster_distance_field: descriptor is not rasterizable in 2-D");
}

// Pixel-counting tube volume over the field's extent, with a boundary-layer
// error bound (pixels whose distance sits within one pixel diagonal of t).
struct RasterTubeVolume {
  double volume = 0.0;
  double error_bound = 0.0;
};

inline RasterTubeVolume raster_tube_volume(const DistanceField2D& f, double t) {
  const double cell = f.pixel_size * f.pixel_size;
  const double diag = f.pixel_size * std::sqrt(2.0);
  std::size_t inside = 0, boundary = 0;
  for (double d : f.dist) {
    if (d <= t) ++inside;
    if (std::abs(d - t) <= diag) ++boundary;
  }
  return {static_cast<double>(inside) * cell, static_cast<double>(boundary) * cell};
}

// ---------------------------------------------------------------------------
// Absolute and relative tube volumes over descriptors
// ---------------------------------------------------------------------------

namespace detail {

inline double gaps_tube_measure(const std::vector<double>& sorted_pts, double t) {
  double acc = 2.0 * t;
  for (std::size_t i = 0; i + 1 < sorted_pts.size(); ++i)
    acc += std::min(sorted_pts[i + 1] - sorted_pts[i], 2.0 * t);
  return acc;
}

struct TubeVolumeVisitor {
  double t;
  double operator()(const PointSet1D& p) const {
    if (p.points.empty()) throw domain_error("tube_volume: empty set");
    return gaps_tube_measure(p.points, t);
  }
  double operator()(const IntervalUnion1D& u) const {
    double acc = 2.0 * t + u.measure();
    for (std::size_t i = 0; i + 1 < u.intervals.size(); ++i)
      acc += std::min(u.intervals[i + 1].first - u.intervals[i].second, 2.0 * t);
    return acc;
  }
  double operator()(const CantorBlock& c) const {
    return c.scale * cantor_tube_volume_gaps(c.params, t / c.scale);
  }
  double operator()(const StringEndpointSet& s) const {
    return 2.0 * t + string_tube_volume(s.string, t);
  }
  double operator()(const Sphere& s) const { return sphere_tube_volume_all(s.dim, s.radius, t); }
  double operator()(const PixelSet2D&) const {
    throw unsupported_error("tube_volume: use raster_tube_volume for pixel sets");
  }
  double operator()(const UnionOfDescriptors& u) const {
    if (u.members.empty()) throw domain_error("tube_volume: empty union");
    std::vector<std::pair<double, double>> hulls;
    double acc = 0.0;
    for (auto& m : u.members) {
      acc += tube_volume_of(m, t);
      hulls.push_back(hull_1d(m));
    }
    std::sort(hulls.begin(), hulls.end());
    for (std::size_t i = 0; i + 1 < hulls.size(); ++i) {
      const double gap = hulls[i + 1].first - hulls[i].second;
      if (gap < 0.0) throw domain_error("tube_volume: union members must be disjoint");
      acc -= std::max(0.0, 2.0 * t - gap);
      if (2.0 * t > gap + std::min(hulls[i].second - hulls[i].first,
                                   hulls[i + 1].second - hulls[i + 1].first))
        throw unsupported_error("tube_volume: collar spans past a neighboring block");
    }
    return acc;
  }
  static double tube_volume_of(const SetDescriptor& s, double t);
};

inline double TubeVolumeVisitor::tube_volume_of(const SetDescriptor& s, double t) {
  return std::visit(TubeVolumeVisitor{t}, s.value);
}

}  // namespace detail

// |A_t| for 1-D descriptors and spheres, exact.
inline double tube_volume(const SetDescriptor& set, double t) {
  if (!(t > 0.0)) throw domain_error("tube_volume: t > 0");
  return detail::TubeVolumeVisitor::tube_volume_of(set, t);
}

// |A_t ∩ Omega| for the supported drum variants.
inline double relative_tube_volume(const RelativeFractalDrum& drum, double t) {
  if (!(t > 0.0)) throw domain_error("relative_tube_volume: t > 0");
  if (const auto* cusp = std::get_if<CuspRegion>(&drum.region)) return cusp_tube_volume(*cusp, t);
  if (const auto* ec = std::get_if<ExpCuspRegion>(&drum.region))
    return exp_cusp_tube_volume(*ec, t);
  if (std::get_if<HalfOpenComplement>(&drum.region)) {
    if (const auto* se = std::get_if<StringEndpointSet>(&drum.set.value))
      return string_tube_volume(se->string, t);
    if (const auto* ps = std::get_if<PointSet1D>(&drum.set.value)) {
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < ps->points.size(); ++i)
        acc += std::min(ps->points[i + 1] - ps->points[i], 2.0 * t);
      return acc;
    }
    throw unsupported_error("relative_tube_volume: complement region needs a 1-D point set");
  }
  if (const auto* pr = std::get_if<PixelRegion2D>(&drum.region)) {
    const auto* px = std::get_if<PixelSet2D>(&drum.set.value);
    if (!px) throw unsupported_error("relative_tube_volume: pixel region needs a pixel set");
    const auto field = cell_distance_transform(*px);
    const double cell = field.pixel_size * field.pixel_size;
    double acc = 0.0;
    for (int y = 0; y < field.height; ++y)
      for (int x = 0; x < field.width; ++x) {
        const double cx = field.extent.x0 + (x + 0.5) * field.pixel_size;
        const double cy = field.extent.y0 + (y + 0.5) * field.pixel_size;
        if (cx < pr->box.x0 || cx > pr->box.x1 || cy < pr->box.y0 || cy > pr->box.y1) continue;
        if (field.at(x, y) <= t) acc += cell;
      }
    return acc;
  }
  throw unsupported_error("relative_tube_volume: no evaluator for this drum variant");
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

inline std::vector<double> geometric_grid(double t_max, double t_min, int per_decade) {
  if (!(t_max > t_min && t_min > 0.0)) throw domain_error("geometric_grid: need t_max > t_min > 0");
  if (per_decade < 1) throw domain_error("geometric_grid: per_decade >= 1");
  std::vector<double> g;
  const double step = std::pow(10.0, -1.0 / per_decade);
  for (double t = t_max; t >= t_min * (1.0 - 1e-12); t *= step) g.push_back(t);
  return g;
}

// Sampling grid for C^(m,a) tube integrals: the log-spacing divides the
// period T and the phase passes through t = c a^n, where |A_t| has kinks from
// gap saturation. With per_period even, every kink lands on a Simpson panel
// boundary and the composite rule keeps its full order.
inline std::vector<double> cantor_aligned_grid(const GeneralizedCantorParams& p, double delta,
                                               int per_period, int periods, double scale = 1.0) {
  p.validate();
  if (per_period < 2 || per_period % 2 != 0)
    throw domain_error("cantor_aligned_grid: per_period must be a positive even count");
  const double c = scale * p.gap_half_width();
  if (!(delta >= c)) throw domain_error("cantor_aligned_grid: delta must reach the kink range");
  std::vector<double> grid;
  const double u_delta = std::log(1.0 / delta);
  const double u_c = std::log(1.0 / c);
  if (u_c - u_delta > 1e-12) {
    const int panels = 32;
    for (int i = 0; i < panels; ++i)
      grid.push_back(std::exp(-(u_delta + (u_c - u_delta) * i / panels)));
  }
  const double h = p.period() / per_period;
  const int steps = per_period * periods;
  for (int i = 0; i <= steps; ++i) grid.push_back(std::exp(-(u_c + h * i)));
  return grid;
}

inline TubeSamples sample_tube_raster(const DistanceField2D& field,
                                      const std::vector<double>& grid);

inline TubeSamples sample_tube(const SetDescriptor& set, const std::vector<double>& grid) {
  // Pixel sets have no exact evaluator; fall back to raster counting with
  // per-sample error bounds.
  if (const auto* px = std::get_if<PixelSet2D>(&set.value))
    return sample_tube_raster(cell_distance_transform(*px), grid);
  TubeSamples out;
  out.ambient_dim = std::holds_alternative<Sphere>(set.value)
                        ? std::get<Sphere>(set.value).dim
                        : 1;
  std::vector<double> ts = grid;
  std::sort(ts.begin(), ts.end());
  for (double t : ts) out.samples.push_back({t, tube_volume(set, t), true, 0.0});
  if (const auto* c = std::get_if<CantorBlock>(&set.value)) {
    const CantorBlock blk = *c;
    out.model = SmallTModel{
        [blk](double t) { return blk.scale * cantor_tube_volume(blk.params, t / blk.scale); },
        blk.scale * blk.params.gap_half_width(), 1.0 - blk.params.dimension(),
        std::pow(blk.params.gap_half_width(), blk.params.dimension() - 1.0), std::nullopt};
  } else if (const auto* s = std::get_if<Sphere>(&set.value)) {
    const Sphere sp = *s;
    const double amp =
        2.0 * sp.dim * unit_ball_volume(sp.dim) * std::pow(sp.radius, sp.dim - 1);
    out.model = SmallTModel{[sp](double t) { return sphere_tube_volume(sp.dim, sp.radius, t); },
                            sp.radius, 1.0, amp, std::nullopt};
    // For N <= 2 the odd binomial expansion has a single term, so the scaled
    // amplitude is exactly constant and the tail can be spliced closed-form.
    if (sp.dim <= 2) out.model->constant_amplitude = amp;
  }
  out.validate();
  return out;
}

inline TubeSamples sample_tube(const RelativeFractalDrum& drum, const std::vector<double>& grid) {
  TubeSamples out;
  out.ambient_dim = drum.ambient_dim;
  std::vector<double> ts = grid;
  std::sort(ts.begin(), ts.end());
  for (double t : ts) out.samples.push_back({t, relative_tube_volume(drum, t), true, 0.0});
  if (const auto* cusp = std::get_if<CuspRegion>(&drum.region)) {
    const CuspRegion r = *cusp;
    out.model = SmallTModel{[r](double t) { return cusp_tube_volume(r, t); },
                            std::min(1.0, r.x_max), 1.0 + r.alpha, r.coeff / (1.0 + r.alpha),
                            std::nullopt};
  }
  out.validate();
  return out;
}

inline TubeSamples sample_tube_raster(const DistanceField2D& field,
                                      const std::vector<double>& grid) {
  TubeSamples out;
  out.ambient_dim = 2;
  std::vector<double> ts = grid;
  std::sort(ts.begin(), ts.end());
  for (double t : ts) {
    const auto rv = raster_tube_volume(field, t);
    out.samples.push_back({t, rv.volume, false, rv.error_bound});
  }
  return out;
}

}  // namespace fzeta
