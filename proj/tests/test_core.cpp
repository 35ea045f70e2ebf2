#include <doctest.h>

#include "fzeta/core.hpp"
#include "fzeta/json_io.hpp"
#include "fzeta/tube.hpp"

using namespace fzeta;

TEST_CASE("rational arithmetic and parsing") {
  CHECK(Rational::parse("1/3") == Rational(1, 3));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(1, 3).pow_u(3) == Rational(1, 27));
  CHECK_THROWS_AS(Rational(1, 0), domain_error);
}

TEST_CASE("cantor endpoints: first refinements") {
  GeneralizedCantorParams p;  // (2, 1/3)
  const auto level0 = cantor_endpoints(p, 0);
  REQUIRE(level0.intervals.size() == 1);
  CHECK(level0.intervals[0] == std::pair<double, double>{0.0, 1.0});

  const auto level1 = cantor_intervals_exact(p, 1);
  REQUIRE(level1.size() == 2);
  CHECK(level1[0].first == Rational(0));
  CHECK(level1[0].second == Rational(1, 3));
  CHECK(level1[1].first == Rational(2, 3));
  CHECK(level1[1].second == Rational(1));
}

TEST_CASE("cantor endpoints: (3, 1/5) level 2") {
  GeneralizedCantorParams p;
  p.m = 3;
  p.a = Rational(1, 5);
  const auto iv = cantor_intervals_exact(p, 2);
  REQUIRE(iv.size() == 9);
  for (const auto& [a, b] : iv) CHECK(b - a == Rational(1, 25));
  // Gap between level-1 blocks: (1 - 3/5)/2 = 1/5.
  CHECK(iv[3].first - iv[2].second == Rational(1, 5));
  // Exact total length (m a)^n.
  Rational total(0);
  for (const auto& [a, b] : iv) total = total + (b - a);
  CHECK(total == Rational(3, 5).pow_u(2));
}

TEST_CASE("cantor endpoints: construction budget") {
  GeneralizedCantorParams p;
  CHECK_THROWS_AS(cantor_endpoints(p, 40), capacity_error);
}

TEST_CASE("string endpoints") {
  SUBCASE("geometric halves") {
    const auto a = string_endpoints(FractalString::geometric(0.5), 3);
    REQUIRE(a.size() == 3);
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(a[2] == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("cantor string") {
    const auto a = string_endpoints(FractalString::cantor(2, {1, 3}), 2);
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(a[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  }
  SUBCASE("telescoping lengths 1/(j(j+1))") {
    const auto a = string_endpoints(FractalString::triangular(), 2);
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("strictly decreasing and positive") {
    for (const auto& str : {FractalString::geometric(0.7), FractalString::cantor(3, {1, 5}),
                            FractalString::power(2.0), FractalString::triangular()}) {
      const auto a = string_endpoints(str, 24);
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        CHECK(a[i] > a[i + 1]);
        CHECK(a[i + 1] > 0.0);
      }
    }
  }
}

TEST_CASE("string lengths are nonincreasing with convergent totals") {
  for (const auto& str : {FractalString::geometric(0.5), FractalString::cantor(2, {1, 3}),
                          FractalString::power(1.5), FractalString::triangular()}) {
    double prev = str.length(1);
    for (std::uint64_t j = 2; j <= 64; ++j) {
      CHECK(str.length(j) <= prev + 1e-15);
      prev = str.length(j);
    }
    const auto [tail, err] = str.tail_sum(1);
    CHECK(tail == doctest::Approx(str.total_length()).epsilon(1e-10));
    CHECK(err >= 0.0);
    // Certified partial tails: brute over a finite window equals the
    // difference of the two rule tails.
    double brute = 0.0;
    for (std::uint64_t j = 200000; j >= 64; --j) brute += str.length(j);
    const auto [deep, deep_err] = str.tail_sum(64);
    const auto [beyond, beyond_err] = str.tail_sum(200001);
    CHECK(std::abs((deep - beyond) - brute) <= deep_err + beyond_err + 1e-9);
  }
}

TEST_CASE("dimension-locked parameters") {
  const auto p = GeneralizedCantorParams::from_dimension(3, 0.4);
  CHECK(p.dimension() == 0.4);
  CHECK(p.a_value() == doctest::Approx(std::pow(3.0, -2.5)).epsilon(1e-15));
  CHECK(p.m * p.a_value() < 1.0);
}

TEST_CASE("tube sample monotonicity holds across descriptors") {
  GeneralizedCantorParams p;
  const auto sets = {make_set(CantorBlock{p}), make_set(Sphere{2, 1.0, {0.0, 0.0}}),
                     make_set(StringEndpointSet{FractalString::geometric(0.5)}),
                     make_set(PointSet1D{{0.0, 0.13, 0.5, 0.9}})};
  for (const auto& set : sets) {
    const auto ts = sample_tube(set, geometric_grid(0.4, 1e-4, 12));
    for (std::size_t i = 0; i + 1 < ts.samples.size(); ++i)
      CHECK(ts.samples[i].volume <= ts.samples[i + 1].volume + 1e-14);
  }
}

TEST_CASE("descriptor JSON round trips") {
  SUBCASE("cantor block keeps rational a") {
    const json j = {{"type", "cantor_block"}, {"m", 2}, {"a", "1/3"}};
    const auto set = parse_set(j);
    const auto& blk = std::get<CantorBlock>(set.value);
    CHECK(blk.params.a == Rational(1, 3));
    const auto back = dump_set(set);
    CHECK(back.at("a").get<std::string>() == "1/3");
  }
  SUBCASE("point set and union") {
    const json j = {{"type", "union"},
                    {"members",
                     {{{"type", "point_set"}, {"points", {"0", "0.5"}}},
                      {{"type", "point_set"}, {"points", {"2", "3"}}}}}};
    const auto set = parse_set(j);
    CHECK(std::get<UnionOfDescriptors>(set.value).members.size() == 2);
  }
  SUBCASE("drum") {
    const json j = {{"set", {{"type", "point_set"}, {"points", {"0"}}}},
                    {"region", {{"type", "cusp"}, {"alpha", "2"}}},
                    {"ambient_dim", 2}};
    const auto drum = parse_drum(j);
    CHECK(std::get<CuspRegion>(drum.region).alpha == 2.0);
    const auto back = dump_drum(drum);
    CHECK(back.at("region").at("type") == "cusp");
  }
  SUBCASE("unknown keys are rejected") {
    const json j = {{"type", "cantor_block"}, {"m", 2}, {"a", "1/3"}, {"extra", 1}};
    CHECK_THROWS_AS(parse_set(j), domain_error);
  }
  SUBCASE("numbers must be decimal strings") {
    const json j = {{"type", "cantor_block"}, {"m", 2}, {"a", 0.333}};
    CHECK_THROWS_AS(parse_set(j), domain_error);
  }
  SUBCASE("pixel set rows") {
    const json j = {{"type", "pixel_set"},
                    {"width", 3},
                    {"height", 2},
                    {"extent", {"0", "0", "1", "1"}},
                    {"rows", {"010", "101"}}};
    const auto set = parse_set(j);
    const auto& px = std::get<PixelSet2D>(set.value);
    CHECK(px.at(1, 0));
    CHECK(!px.at(1, 1));
    CHECK(dump_set(set).at("rows")[1] == "101");
  }
}
