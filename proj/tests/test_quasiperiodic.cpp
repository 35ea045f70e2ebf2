#include <doctest.h>

#include <algorithm>
#include <random>

#include "fzeta/analysis.hpp"
#include "fzeta/quasiperiodic.hpp"
#include "fzeta/zeta.hpp"

using namespace fzeta;

TEST_CASE("exponent vectors over a shared prime basis") {
  SUBCASE("distinct primes") {
    const auto v = exponent_vectors({2, 3});
    REQUIRE(v.size() == 2);
    CHECK(v[0].primes == std::vector<std::int64_t>{2, 3});
    CHECK(v[0].exponents == std::vector<std::int64_t>{1, 0});
    CHECK(v[1].exponents == std::vector<std::int64_t>{0, 1});
  }
  SUBCASE("composite inputs") {
    const auto v = exponent_vectors({6, 12});
    CHECK(v[0].exponents == std::vector<std::int64_t>{1, 1});
    CHECK(v[1].exponents == std::vector<std::int64_t>{2, 1});
    CHECK(v[0].reconstruct() == 6);
    CHECK(v[1].reconstruct() == 12);
  }
  SUBCASE("prime powers") {
    const auto v = exponent_vectors({2, 4});
    CHECK(v[0].exponents == std::vector<std::int64_t>{1});
    CHECK(v[1].exponents == std::vector<std::int64_t>{2});
  }
}

TEST_CASE("rational independence decisions") {
  SUBCASE("identity rows") {
    CHECK(rationally_independent(exponent_vectors({2, 3})).independent);
  }
  SUBCASE("proportional rows with a certificate") {
    const auto c = rationally_independent(exponent_vectors({2, 4}));
    CHECK(!c.independent);
    REQUIRE(c.dependency.size() == 2);
    // 2 e1 - e2 = 0 up to sign and scale.
    CHECK(c.dependency[0] * 1 == -2 * c.dependency[1] / 1);
    std::int64_t residual0 = c.dependency[0] * 1 + c.dependency[1] * 2;
    CHECK(residual0 == 0);
  }
  SUBCASE("rank-deficient triple") {
    const auto c = rationally_independent(exponent_vectors({6, 12, 18}));
    CHECK(!c.independent);
    CHECK(c.rank == 2);
    // The certificate really combines the vectors to zero.
    const auto v = exponent_vectors({6, 12, 18});
    for (std::size_t col = 0; col < v[0].exponents.size(); ++col) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < v.size(); ++i)
        acc += c.dependency[i] * v[i].exponents[col];
      CHECK(acc == 0);
    }
  }
  SUBCASE("decision is permutation invariant") {
    std::vector<std::int64_t> ms{2, 3, 5};
    std::mt19937 rng(41);
    for (int i = 0; i < 5; ++i) {
      std::shuffle(ms.begin(), ms.end(), rng);
      CHECK(rationally_independent(exponent_vectors(ms)).independent);
    }
    std::vector<std::int64_t> dep{6, 12, 18};
    for (int i = 0; i < 5; ++i) {
      std::shuffle(dep.begin(), dep.end(), rng);
      CHECK(!rationally_independent(exponent_vectors(dep)).independent);
    }
  }
}

TEST_CASE("assembly construction") {
  SUBCASE("accepted parameters") {
    const auto a = build_assembly(0.5, {2, 3});
    REQUIRE(a.components.size() == 2);
    CHECK(a.components[0].a_value() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(a.components[1].a_value() == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(a.periods[0] == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(a.periods[1] == doctest::Approx(std::log(9.0)).epsilon(1e-15));
    CHECK(a.components[0].dimension() == a.components[1].dimension());
  }
  SUBCASE("dependent exponents are rejected with the certificate attached") {
    try {
      build_assembly(0.5, {2, 4});
      FAIL("expected a rejection");
    } catch (const domain_error& e) {
      CHECK(std::string(e.what()).find("dependent") != std::string::npos);
    }
  }
  SUBCASE("three incommensurable periods") {
    const auto a = build_assembly(0.4, {2, 3, 5});
    CHECK(a.components.size() == 3);
  }
}

TEST_CASE("assembly zeta agrees with the numeric union route") {
  const auto a = build_assembly(0.5, {2, 3});
  for (const cdouble s : {cdouble(0.7), cdouble(0.55, 5.0), cdouble(0.9, -2.0)}) {
    const cdouble closed = assembly_zeta(a, s);
    const auto numeric = distance_zeta_1d(a.set(), a.delta, s);
    CHECK(std::abs(closed - numeric.value) <= 1e-5 * std::abs(closed));
  }
}

TEST_CASE("assembly zeta symmetry and scaling") {
  const auto a = build_assembly(0.5, {2, 3});
  SUBCASE("conjugate symmetry") {
    for (const cdouble s : {cdouble(0.8, 3.0), cdouble(0.6, 7.7)}) {
      CHECK(std::abs(assembly_zeta(a, std::conj(s)) - std::conj(assembly_zeta(a, s))) <=
            1e-10 * std::abs(assembly_zeta(a, s)));
    }
  }
  SUBCASE("scaling the whole union") {
    // lambda-scaled union evaluated through the numeric route.
    const double lam = 0.5;
    UnionOfDescriptors scaled;
    for (std::size_t i = 0; i < a.components.size(); ++i)
      scaled.members.push_back(
          make_set(CantorBlock{a.components[i], lam * a.offsets[i], lam}));
    for (const cdouble s : {cdouble(0.75), cdouble(0.65, 2.0)}) {
      const auto z0 = distance_zeta_1d(a.set(), a.delta, s);
      const auto z1 = distance_zeta_1d(make_set(scaled), lam * a.delta, s);
      const cdouble pred = pow_pos(lam, s) * z0.value;
      CHECK(std::abs(z1.value - pred) <= 1e-10 * (1.0 + std::abs(pred)));
    }
  }
}

TEST_CASE("assembly pole residues add on the shared base point") {
  const auto a = build_assembly(0.5, {2, 3});
  const auto form = a.form();
  cdouble sum = 0.0;
  for (const auto& comp : a.components)
    sum += cantor_distance_zeta_form(comp, a.delta).residue_at(cdouble(0.5));
  CHECK(std::abs(form.residue_at(cdouble(0.5)) - sum) <= 1e-14 * std::abs(sum));
  const cdouble contour = numeric_residue(form.evaluator, cdouble(0.5), 0.2);
  CHECK(std::abs(contour - sum) <= 1e-9 * std::abs(sum));
}
