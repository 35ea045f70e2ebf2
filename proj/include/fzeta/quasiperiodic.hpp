#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fzeta/core.hpp"
#include "fzeta/forms.hpp"

namespace fzeta {

// ---------------------------------------------------------------------------
// Exponent vectors over a common prime basis
// ---------------------------------------------------------------------------

struct ExponentVector {
  std::vector<std::int64_t> primes;     // shared sorted basis
  std::vector<std::int64_t> exponents;  // one exponent per basis prime

  std::int64_t reconstruct() const {
    std::int64_t v = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
      for (std::int64_t e = 0; e < exponents[i]; ++e) v = Rational::checked_mul(v, primes[i]);
    return v;
  }
};

namespace detail {

inline std::vector<std::pair<std::int64_t, std::int64_t>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    std::int64_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace detail

inline std::vector<ExponentVector> exponent_vectors(const std::vector<std::int64_t>& m_list) {
  std::vector<std::int64_t> basis;
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> factored;
  for (std::int64_t m : m_list) {
    if (m < 2) throw domain_error("exponent_vectors: every m must be >= 2");
    factored.push_back(detail::factorize(m));
    for (auto& [p, e] : factored.back())
      if (std::find(basis.begin(), basis.end(), p) == basis.end()) basis.push_back(p);
  }
  std::sort(basis.begin(), basis.end());
  std::vector<ExponentVector> out;
  for (auto& f : factored) {
    ExponentVector v;
    v.primes = basis;
    v.exponents.assign(basis.size(), 0);
    for (auto& [p, e] : f) {
      const auto idx = static_cast<std::size_t>(
          std::find(basis.begin(), basis.end(), p) - basis.begin());
      v.exponents[idx] = e;
    }
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact rational independence
// ---------------------------------------------------------------------------

struct IndependenceCertificate {
  bool independent = false;
  int rank = 0;
  // When dependent: integer coefficients q with sum_i q_i e_i = 0, q != 0.
  std::vector<std::int64_t> dependency;
  std::string text() const {
    std::ostringstream os;
    if (independent) {
      os << "independent (rank " << rank << ")";
      return os.str();
    }
    os << "dependent:";
    for (std::size_t i = 0; i < dependency.size(); ++i) {
      if (dependency[i] == 0) continue;
      os << " " << (dependency[i] > 0 ? "+" : "") << dependency[i] << "*e" << (i + 1);
    }
    os << " = 0";
    return os.str();
  }
};

// Exact row reduction over Q with Rational entries, tracking row operations so
// a vanishing row yields an explicit dependency vector.
inline IndependenceCertificate rationally_independent(const std::vector<ExponentVector>& vecs) {
  if (vecs.empty()) throw domain_error("rationally_independent: empty list");
  const std::size_t n = vecs.size();
  const std::size_t k = vecs[0].primes.size();
  for (auto& v : vecs)
    if (v.primes != vecs[0].primes)
      throw domain_error("rationally_independent: vectors must share a prime basis");

  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(k));
  std::vector<std::vector<Rational>> ops(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    ops[i][i] = Rational(1);
    for (std::size_t j = 0; j < k; ++j) a[i][j] = Rational(vecs[i].exponents[j]);
  }

  std::size_t rank = 0;
  for (std::size_t col = 0; col < k && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) continue;
    std::swap(a[pivot], a[rank]);
    std::swap(ops[pivot], ops[rank]);
    for (std::size_t i = rank + 1; i < n; ++i) {
      if (a[i][col].is_zero()) continue;
      const Rational factor = a[i][col] / a[rank][col];
      for (std::size_t j = 0; j < k; ++j) a[i][j] = a[i][j] - factor * a[rank][j];
      for (std::size_t j = 0; j < n; ++j) ops[i][j] = ops[i][j] - factor * ops[rank][j];
    }
    ++rank;
  }

  IndependenceCertificate cert;
  cert.rank = static_cast<int>(rank);
  cert.independent = rank == n;
  if (!cert.independent) {
    // First zero row of the echelon form; its op row combines the inputs to 0.
    for (std::size_t i = rank; i < n; ++i) {
      bool zero = true;
      for (std::size_t j = 0; j < k; ++j) zero = zero && a[i][j].is_zero();
      if (!zero) continue;
      std::int64_t lcm = 1;
      for (std::size_t j = 0; j < n; ++j)
        lcm = Rational::checked_mul(lcm / std::gcd(lcm, ops[i][j].den), ops[i][j].den);
      cert.dependency.assign(n, 0);
      for (std::size_t j = 0; j < n; ++j)
        cert.dependency[j] = ops[i][j].num * (lcm / ops[i][j].den);
      break;
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Assemblies
// ---------------------------------------------------------------------------

// Disjoint union of dimension-locked Cantor blocks on unit intervals with
// unit gaps; with the common collar delta = 1/2 the union's distance zeta is
// exactly the sum of the per-block closed forms.
struct QuasiperiodicAssembly {
  std::vector<GeneralizedCantorParams> components;
  std::vector<double> offsets;
  double common_dim = 0.0;
  std::vector<double> periods;  // T_i = log(m_i) / D
  double delta = 0.5;

  SetDescriptor set() const {
    UnionOfDescriptors u;
    for (std::size_t i = 0; i < components.size(); ++i)
      u.members.push_back(make_set(CantorBlock{components[i], offsets[i], 1.0}));
    return make_set(std::move(u));
  }

  MeromorphicForm form() const {
    std::vector<MeromorphicForm> parts;
    for (const auto& comp : components) parts.push_back(cantor_distance_zeta_form(comp, delta));
    MeromorphicForm f;
    f.name = "quasiperiodic_assembly";
    f.evaluator = [parts](cdouble s) {
      cdouble acc = 0.0;
      for (const auto& p : parts) acc += p.evaluator(s);
      return acc;
    };
    for (const auto& p : parts) f.lattices.push_back(p.lattices.front());
    const double D = common_dim;
    f.residue_at = [parts, D](cdouble pole) {
      // On the shared base point every component lattice contributes; off the
      // real axis only lattices actually containing the pole do.
      cdouble acc = 0.0;
      for (const auto& p : parts) {
        const double spacing = p.lattices.front().spacing_im;
        const double ratio = pole.imag() / spacing;
        if (std::abs(ratio - std::round(ratio)) < 1e-9 &&
            std::abs(pole.real() - p.lattices.front().base_re) < 1e-9)
          acc += p.residue_at(pole);
      }
      (void)D;
      return acc;
    };
    return f;
  }

  std::string principal_dims_description() const {
    std::ostringstream os;
    os << "D + (";
    for (std::size_t i = 0; i < periods.size(); ++i)
      os << (i ? " U " : "") << "(2*pi/" << periods[i] << ")Z";
    os << ")i, D = " << common_dim;
    return os.str();
  }
};

inline QuasiperiodicAssembly build_assembly(double D, const std::vector<std::int64_t>& m_list) {
  if (m_list.size() < 2) throw domain_error("build_assembly: need n >= 2 components");
  if (!(D > 0.0 && D < 1.0)) throw domain_error("build_assembly: D must lie in (0,1)");
  const auto vecs = exponent_vectors(m_list);
  const auto cert = rationally_independent(vecs);
  if (!cert.independent)
    throw domain_error("build_assembly: exponent vectors are rationally dependent; " +
                       cert.text());
  QuasiperiodicAssembly asmb;
  asmb.common_dim = D;
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    auto p = GeneralizedCantorParams::from_dimension(static_cast<int>(m_list[i]), D);
    p.validate();
    asmb.components.push_back(p);
    asmb.offsets.push_back(2.0 * static_cast<double>(i));
    asmb.periods.push_back(std::log(static_cast<double>(m_list[i])) / D);
  }
  return asmb;
}

inline cdouble assembly_zeta(const QuasiperiodicAssembly& asmb, cdouble s) {
  return asmb.form().evaluator(s);
}

}  // namespace fzeta
