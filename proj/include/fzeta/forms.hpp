#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "fzeta/core.hpp"
#include "fzeta/tube.hpp"

namespace fzeta {

// Arithmetic progression of poles base_re + i * spacing_im * Z.
struct PoleLattice {
  double base_re = 0.0;
  double spacing_im = 0.0;
};

// A closed-form meromorphic continuation: an entire-plane evaluator plus an
// explicit pole set and residue rule.
struct MeromorphicForm {
  std::string name;
  std::function<cdouble(cdouble)> evaluator;
  std::vector<cdouble> isolated_poles;
  std::vector<PoleLattice> lattices;
  std::function<cdouble(cdouble)> residue_at;             // residue at an exact pole location
  std::function<int(cdouble)> multiplicity_at = nullptr;  // defaults to simple

  cdouble operator()(cdouble s) const { return evaluator(s); }

  int multiplicity(cdouble pole) const { return multiplicity_at ? multiplicity_at(pole) : 1; }

  std::vector<cdouble> poles_in_window(double re0, double re1, double im0, double im1) const {
    std::vector<cdouble> out;
    auto push_unique = [&out](cdouble p) {
      for (const auto& q : out)
        if (std::abs(q - p) < 1e-12) return;  // lattices may share base points
      out.push_back(p);
    };
    for (const auto& p : isolated_poles)
      if (p.real() >= re0 && p.real() <= re1 && p.imag() >= im0 && p.imag() <= im1)
        push_unique(p);
    for (const auto& lat : lattices) {
      if (lat.base_re < re0 || lat.base_re > re1) continue;
      const long kmin = static_cast<long>(std::ceil(im0 / lat.spacing_im - 1e-12));
      const long kmax = static_cast<long>(std::floor(im1 / lat.spacing_im + 1e-12));
      for (long k = kmin; k <= kmax; ++k)
        push_unique({lat.base_re, lat.spacing_im * static_cast<double>(k)});
    }
    std::sort(out.begin(), out.end(), [](cdouble a, cdouble b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
  }
};

// ---------------------------------------------------------------------------
// Generalized Cantor set C^(m,a)
// ---------------------------------------------------------------------------

// zeta_A(s) = c^(s-1) (1-ma) / (s (1-m a^s)) + 2 delta^s / s, valid once
// delta >= c = (1-ma)/(2(m-1)). Pole set: D + (2 pi / T) i Z with
// D = log_{1/a} m and T = log(1/a). The two 1/s terms carry opposite
// residues at s = 0, so the origin is a removable singularity of the sum.
inline MeromorphicForm cantor_distance_zeta_form(const GeneralizedCantorParams& params,
                                                 double delta = 0.0) {
  params.validate();
  const double c = params.gap_half_width();
  if (delta <= 0.0) delta = c;
  if (delta < c * (1.0 - 1e-12))
    throw domain_error("cantor_distance_zeta_form: delta below the validity threshold c");
  const double m = params.m;
  const double a = params.a_value();
  const double D = params.dimension();
  const double T = params.period();
  const double one_minus_ma = 1.0 - m * a;
  const double dl = delta;

  MeromorphicForm f;
  f.name = "cantor_distance";
  f.evaluator = [c, m, a, one_minus_ma, dl](cdouble s) {
    return pow_pos(c, s - 1.0) * one_minus_ma / (s * (1.0 - m * pow_pos(a, s))) +
           2.0 * pow_pos(dl, s) / s;
  };
  f.lattices = {{D, 2.0 * pi / T}};
  f.residue_at = [c, one_minus_ma, T](cdouble s_k) {
    if (std::abs(s_k) < 1e-9) return cdouble(0.0);  // removable
    // numerator / d/ds(1 - m a^s) at a lattice point, where m a^{s_k} = 1.
    return pow_pos(c, s_k - 1.0) * one_minus_ma / (s_k * T);
  };
  return f;
}

// Tube companion via the functional equation: (zeta_A(s) - delta^(s-1)|A_delta|)/(1-s),
// with |A_delta| = 1 + 2 delta for delta >= c. Same pole lattice; residues
// divide by (1 - s_k); the candidate pole at s = 1 cancels.
inline MeromorphicForm cantor_tube_zeta_form(const GeneralizedCantorParams& params,
                                             double delta = 0.0) {
  params.validate();
  const double c = params.gap_half_width();
  if (delta <= 0.0) delta = c;
  if (delta < c * (1.0 - 1e-12))
    throw domain_error("cantor_tube_zeta_form: delta below the validity threshold c");
  MeromorphicForm dist = cantor_distance_zeta_form(params, delta);
  const double vol = 1.0 + 2.0 * delta;
  const double dl = delta;
  MeromorphicForm f;
  f.name = "cantor_tube";
  f.evaluator = [dist, vol, dl](cdouble s) {
    return (dist.evaluator(s) - pow_pos(dl, s - 1.0) * vol) / (1.0 - s);
  };
  f.lattices = dist.lattices;
  f.residue_at = [dist](cdouble s_k) { return dist.residue_at(s_k) / (1.0 - s_k); };
  return f;
}

// ---------------------------------------------------------------------------
// (N-1)-sphere of radius R
// ---------------------------------------------------------------------------

inline MeromorphicForm sphere_tube_zeta_form(int N, double R, double delta) {
  if (N < 1) throw domain_error("sphere_tube_zeta_form: N >= 1");
  if (!(delta > 0.0 && delta < R)) throw domain_error("sphere_tube_zeta_form: need 0 < delta < R");
  const double wN = unit_ball_volume(N);
  MeromorphicForm f;
  f.name = "sphere_tube";
  f.evaluator = [N, R, delta, wN](cdouble s) {
    cdouble acc = 0.0;
    for (int k = 0; k <= N; ++k) {
      const double pre = (1.0 - (k % 2 == 0 ? 1.0 : -1.0)) * std::pow(R, N - k) * binomial(N, k);
      if (pre == 0.0) continue;
      acc += pre * pow_pos(delta, s - static_cast<double>(N - k)) /
             (s - static_cast<double>(N - k));
    }
    return wN * acc;
  };
  for (int j = 0; N - (2 * j + 1) >= 0; ++j) f.isolated_poles.push_back(cdouble(N - (2 * j + 1)));
  f.residue_at = [N, R, wN](cdouble pole) {
    const int m = static_cast<int>(std::lround(pole.real()));
    return cdouble(2.0 * wN * binomial(N, m) * std::pow(R, m));
  };
  return f;
}

inline MeromorphicForm sphere_distance_zeta_form(int N, double R, double delta) {
  MeromorphicForm tube = sphere_tube_zeta_form(N, R, delta);
  const double vol = sphere_tube_volume(N, R, delta);
  MeromorphicForm f;
  f.name = "sphere_distance";
  f.evaluator = [tube, vol, delta, N](cdouble s) {
    return pow_pos(delta, s - static_cast<double>(N)) * vol +
           (static_cast<double>(N) - s) * tube.evaluator(s);
  };
  f.isolated_poles = tube.isolated_poles;
  f.residue_at = [tube, N](cdouble pole) {
    return (static_cast<double>(N) - pole) * tube.residue_at(pole);
  };
  return f;
}

// ---------------------------------------------------------------------------
// Relative Sierpinski carpet (unit square region)
// ---------------------------------------------------------------------------

// zeta_A(s, Omega) = 8 / (2^s s (s-1) (3^s - 8)); poles at log_3 8 + p i Z
// (p = 2 pi / log 3) and at {0, 1}.
inline MeromorphicForm sierpinski_relative_zeta_form() {
  MeromorphicForm f;
  f.name = "sierpinski_relative";
  const double log3 = std::log(3.0);
  const double D = std::log(8.0) / log3;
  f.evaluator = [](cdouble s) {
    return 8.0 / (pow_pos(2.0, s) * s * (s - 1.0) * (pow_pos(3.0, s) - 8.0));
  };
  f.lattices = {{D, 2.0 * pi / log3}};
  f.isolated_poles = {cdouble(0.0), cdouble(1.0)};
  f.residue_at = [log3](cdouble s_k) {
    if (std::abs(s_k) < 1e-9) return cdouble(8.0 / 7.0);
    if (std::abs(s_k - 1.0) < 1e-9) return cdouble(-0.8);
    return pow_pos(2.0, -s_k) / (log3 * s_k * (s_k - 1.0));
  };
  return f;
}

// ---------------------------------------------------------------------------
// String drums with closed-form geometric zeta
// ---------------------------------------------------------------------------

// zeta of the drum (A_L, Omega_L): 2^(1-s) zeta_L(s) / s, for string rules
// whose geometric zeta has a rational-exponential closed form.
inline MeromorphicForm string_relative_zeta_form(const FractalString& str) {
  MeromorphicForm f;
  using Rule = FractalString::Rule;
  if (str.rule() == Rule::geometric) {
    const double r = str.ratio();
    const double lr = std::log(1.0 / r);
    f.name = "geometric_string_relative";
    f.evaluator = [r](cdouble s) {
      const cdouble rs = pow_pos(r, s);
      return pow_pos(2.0, 1.0 - s) * rs / ((1.0 - rs) * s);
    };
    f.lattices = {{0.0, 2.0 * pi / lr}};
    f.multiplicity_at = [](cdouble p) { return std::abs(p) < 1e-9 ? 2 : 1; };
    f.residue_at = [r, lr](cdouble s_k) {
      if (std::abs(s_k) < 1e-9) {
        // Double pole at 0; the 1/s coefficient of the Laurent expansion.
        return cdouble(-1.0 + 2.0 * std::log(2.0) / std::log(r));
      }
      // Simple lattice pole: res(zeta_L, s_k) = 1/log(1/r) since r^{s_k} = 1.
      return pow_pos(2.0, 1.0 - s_k) / (lr * s_k);
    };
    return f;
  }
  if (str.rule() == Rule::cantor_gaps) {
    const double m = str.branch_count();
    const double a = str.ratio();
    const double cw = (1.0 - m * a) / (m - 1.0);
    const double T = std::log(1.0 / a);
    const double D = std::log(m) / T;
    f.name = "cantor_string_relative";
    f.evaluator = [m, a, cw](cdouble s) {
      return pow_pos(2.0, 1.0 - s) * (m - 1.0) * pow_pos(cw, s) /
             ((1.0 - m * pow_pos(a, s)) * s);
    };
    f.lattices = {{D, 2.0 * pi / T}};
    f.isolated_poles = {cdouble(0.0)};
    f.residue_at = [m, cw, T](cdouble s_k) {
      if (std::abs(s_k) < 1e-9) {
        // zeta_L(0) = (m-1)/(1-m) = -1, so the drum residue is 2 * (-1).
        return cdouble(-2.0);
      }
      return pow_pos(2.0, 1.0 - s_k) * (m - 1.0) * pow_pos(cw, s_k) / (T * s_k);
    };
    return f;
  }
  throw unsupported_error("string_relative_zeta_form: no closed form for this string rule");
}

// ---------------------------------------------------------------------------
// Local tube zeta of R^N at a point (ball profile)
// ---------------------------------------------------------------------------

inline MeromorphicForm local_ball_tube_zeta_form(int N, double r, double delta) {
  if (N < 1 || !(r > 0.0) || !(delta > 0.0))
    throw domain_error("local_ball_tube_zeta_form: N >= 1, r > 0, delta > 0");
  const double wN = unit_ball_volume(N);
  MeromorphicForm f;
  f.name = "local_ball_tube";
  f.evaluator = [N, r, delta, wN](cdouble s) {
    cdouble acc = 0.0;
    for (int k = 0; k <= N; ++k)
      acc += static_cast<double>(binomial(N, k)) * std::pow(r, k) *
             pow_pos(delta, s - static_cast<double>(k)) / (s - static_cast<double>(k));
    return wN * acc;
  };
  for (int k = 0; k <= N; ++k) f.isolated_poles.push_back(cdouble(k));
  f.residue_at = [N, r, wN](cdouble pole) {
    const int k = static_cast<int>(std::lround(pole.real()));
    return cdouble(wN * binomial(N, k) * std::pow(r, k));
  };
  return f;
}

inline MeromorphicForm local_ball_distance_zeta_form(int N, double r, double delta) {
  MeromorphicForm tube = local_ball_tube_zeta_form(N, r, delta);
  const double wN = unit_ball_volume(N);
  const double vol = wN * std::pow(r + delta, N);
  MeromorphicForm f;
  f.name = "local_ball_distance";
  f.evaluator = [tube, vol, delta, N](cdouble s) {
    return pow_pos(delta, s - static_cast<double>(N)) * vol +
           (static_cast<double>(N) - s) * tube.evaluator(s);
  };
  for (int k = 0; k <= N - 1; ++k) f.isolated_poles.push_back(cdouble(k));  // k = N cancels
  f.residue_at = [tube, N](cdouble pole) {
    return (static_cast<double>(N) - pole) * tube.residue_at(pole);
  };
  return f;
}

}  // namespace fzeta
