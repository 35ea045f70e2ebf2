#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace fzeta {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Errors map to CLI exit codes: domain 2, divergence 3, unsupported 4.
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct divergence_error : std::runtime_error {
  explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct unsupported_error : std::runtime_error {
  explicit unsupported_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// a^s = exp(s log a) for a > 0; every base appearing in the closed forms is a
// positive real, so the principal branch is the only branch.
inline cdouble pow_pos(double a, cdouble s) {
  if (!(a > 0.0)) throw domain_error("pow_pos: base must be positive");
  return std::exp(s * std::log(a));
}

inline double sqr(double x) { return x * x; }

// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
  if (n < 0) throw domain_error("unit_ball_volume: negative dimension");
  return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  if (k > n - k) k = n - k;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Verdict used by abscissa probes and the Harvey-Polking test.
enum class Verdict { converges, diverges, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converges: return "converges";
    case Verdict::diverges: return "diverges";
    default: return "inconclusive";
  }
}

}  // namespace fzeta
