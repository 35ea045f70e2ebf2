#include <doctest.h>

#include <random>

#include "fzeta/analysis.hpp"
#include "fzeta/forms.hpp"

using namespace fzeta;

TEST_CASE("cantor form: dimension, residues, lattice") {
  GeneralizedCantorParams p;  // (2, 1/3)
  const double D = p.dimension();
  CHECK(D == doctest::Approx(0.6309297535714574).epsilon(1e-14));
  const auto form = cantor_distance_zeta_form(p, 0.25);
  CHECK(std::abs(form.residue_at(cdouble(D)).real() - 0.9316) <= 1e-4);
  REQUIRE(form.lattices.size() == 1);
  CHECK(form.lattices[0].spacing_im == doctest::Approx(2.0 * pi / std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(cantor_distance_zeta_form(p, 0.1), domain_error);  // below c = 1/6
}

TEST_CASE("cantor form: the origin is a removable point of the sum") {
  // The two collar-type terms carry residues -2 and +2 at s = 0, so the
  // continued function stays bounded near the origin.
  GeneralizedCantorParams p;
  const auto form = cantor_distance_zeta_form(p, 0.25);
  const auto res0 = numeric_residue(form.evaluator, cdouble(0.0), 0.2);
  CHECK(std::abs(res0) <= 1e-9);
  CHECK(std::abs(form.evaluator(cdouble(1e-4)) - form.evaluator(cdouble(-1e-4))) <= 1e-2);
}

TEST_CASE("sphere forms") {
  SUBCASE("circle: single pole at 1 with residue 4 pi") {
    const auto f = sphere_tube_zeta_form(2, 1.0, 0.5);
    REQUIRE(f.isolated_poles.size() == 1);
    CHECK(f.isolated_poles[0] == cdouble(1.0));
    CHECK(f.residue_at(cdouble(1.0)).real() == doctest::Approx(4.0 * pi).epsilon(1e-14));
    const auto d = sphere_distance_zeta_form(2, 1.0, 0.5);
    CHECK(d.residue_at(cdouble(1.0)).real() == doctest::Approx(4.0 * pi).epsilon(1e-14));
  }
  SUBCASE("N = 3: poles {2, 0}") {
    const auto f = sphere_tube_zeta_form(3, 1.0, 0.5);
    REQUIRE(f.isolated_poles.size() == 2);
    CHECK(f.isolated_poles[0].real() == 2.0);
    CHECK(f.isolated_poles[1].real() == 0.0);
    CHECK(f.residue_at(cdouble(2.0)).real() == doctest::Approx(8.0 * pi).epsilon(1e-14));
  }
  SUBCASE("N = 1: pole {0} with residue 4") {
    const auto f = sphere_tube_zeta_form(1, 1.0, 0.5);
    REQUIRE(f.isolated_poles.size() == 1);
    CHECK(f.isolated_poles[0].real() == 0.0);
    CHECK(f.residue_at(cdouble(0.0)).real() == doctest::Approx(4.0).epsilon(1e-14));
  }
}

TEST_CASE("relative carpet form") {
  const auto f = sierpinski_relative_zeta_form();
  const double D = std::log(8.0) / std::log(3.0);
  CHECK(D == doctest::Approx(1.8928).epsilon(1e-4));
  CHECK(std::abs(f.residue_at(cdouble(D)).real() - 0.1451) <= 1e-4);
  SUBCASE("lattice residues decay like k^-2") {
    const double osc = 2.0 * pi / std::log(3.0);
    const double base = std::abs(f.residue_at(cdouble(D, osc * 10.0))) * 100.0;
    for (int k : {20, 40}) {
      const double scaled = std::abs(f.residue_at(cdouble(D, osc * k))) * k * k;
      CHECK(std::abs(scaled - base) <= 0.05 * base);
    }
  }
  SUBCASE("integer-dimension residues") {
    CHECK(f.residue_at(cdouble(0.0)).real() == doctest::Approx(8.0 / 7.0).epsilon(1e-14));
    CHECK(f.residue_at(cdouble(1.0)).real() == doctest::Approx(-0.8).epsilon(1e-14));
  }
}

TEST_CASE("string drum forms") {
  SUBCASE("cantor string pole lattice") {
    const auto f = string_relative_zeta_form(FractalString::cantor(2, {1, 3}));
    REQUIRE(f.lattices.size() == 1);
    CHECK(f.lattices[0].base_re == doctest::Approx(std::log(2.0) / std::log(3.0)));
    CHECK(f.lattices[0].spacing_im == doctest::Approx(2.0 * pi / std::log(3.0)));
    CHECK(f.isolated_poles.size() == 1);  // the origin
  }
  SUBCASE("geometric string value at s = 2") {
    const auto f = string_relative_zeta_form(FractalString::geometric(0.5));
    CHECK(f.evaluator(cdouble(2.0)).real() == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  }
  SUBCASE("double pole at the origin for geometric strings") {
    const auto f = string_relative_zeta_form(FractalString::geometric(0.5));
    CHECK(f.multiplicity(cdouble(0.0)) == 2);
    const double r1 = std::abs(f.evaluator(cdouble(0.01)));
    const double r2 = std::abs(f.evaluator(cdouble(0.02)));
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
  }
  SUBCASE("no closed form for power strings") {
    CHECK_THROWS_AS(string_relative_zeta_form(FractalString::power(2.0)), unsupported_error);
  }
}

TEST_CASE("local ball forms") {
  SUBCASE("N = 1: poles {0, 1}, residue 2 at 1") {
    const auto f = local_ball_tube_zeta_form(1, 1.0, 0.5);
    REQUIRE(f.isolated_poles.size() == 2);
    CHECK(f.residue_at(cdouble(1.0)).real() == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("N = 2: tube poles {0,1,2}, distance poles {0,1}") {
    CHECK(local_ball_tube_zeta_form(2, 1.0, 0.5).isolated_poles.size() == 3);
    CHECK(local_ball_distance_zeta_form(2, 1.0, 0.5).isolated_poles.size() == 2);
  }
}

TEST_CASE("every analytic residue matches its contour residue") {
  GeneralizedCantorParams p;
  const auto cantor = cantor_distance_zeta_form(p, 0.25);
  const double osc = 2.0 * pi / std::log(3.0);
  for (int k = 0; k * osc <= 40.0; ++k) {
    const cdouble s_k{p.dimension(), osc * k};
    const cdouble num = numeric_residue(cantor.evaluator, s_k, 0.3);
    CHECK(std::abs(num - cantor.residue_at(s_k)) <= 1e-8 * (1.0 + std::abs(num)));
  }
  const auto sier = sierpinski_relative_zeta_form();
  for (const cdouble pole :
       {cdouble(0.0), cdouble(1.0), cdouble(std::log(8.0) / std::log(3.0), osc)}) {
    const cdouble num = numeric_residue(sier.evaluator, pole, 0.3);
    CHECK(std::abs(num - sier.residue_at(pole)) <= 1e-8 * (1.0 + std::abs(num)));
  }
}

TEST_CASE("forms are conjugate-symmetric") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> re(-0.5, 2.5), im(0.2, 12.0);
  const auto forms = {cantor_distance_zeta_form(GeneralizedCantorParams{}, 0.25),
                      sierpinski_relative_zeta_form(), sphere_tube_zeta_form(2, 1.0, 0.5),
                      local_ball_tube_zeta_form(2, 1.0, 0.5),
                      string_relative_zeta_form(FractalString::cantor(2, {1, 3}))};
  for (const auto& f : forms) {
    for (int i = 0; i < 6; ++i) {
      const cdouble s{re(rng), im(rng)};
      CHECK(std::abs(f.evaluator(std::conj(s)) - std::conj(f.evaluator(s))) <=
            1e-12 * (1.0 + std::abs(f.evaluator(s))));
    }
  }
}

TEST_CASE("functional-equation consistency of sphere and ball forms") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> re(-1.5, 3.0), im(-8.0, 8.0);
  const auto tube = sphere_tube_zeta_form(2, 1.0, 0.4);
  const auto dist = sphere_distance_zeta_form(2, 1.0, 0.4);
  const double vol = sphere_tube_volume(2, 1.0, 0.4);
  int done = 0;
  while (done < 20) {
    const cdouble s{re(rng), im(rng)};
    if (std::abs(s - 1.0) < 0.05) continue;
    const cdouble lhs = dist.evaluator(s);
    const cdouble rhs = pow_pos(0.4, s - 2.0) * vol + (2.0 - s) * tube.evaluator(s);
    CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(lhs)));
    ++done;
  }
}

TEST_CASE("string zeta closed forms match the series at complex s") {
  const auto cantor = FractalString::cantor(2, {1, 3});
  auto closed = [](cdouble s) {
    return pow_pos(3.0, -s) / (1.0 - 2.0 * pow_pos(3.0, -s));
  };
  for (const cdouble s : {cdouble(1.2, 3.0), cdouble(0.8, -5.0), cdouble(2.0, 11.0)}) {
    const auto z = geometric_zeta(cantor, s);
    CHECK(std::abs(z.value - closed(s)) <= z.est_error + 1e-12 * std::abs(closed(s)));
  }
}
