#include <doctest.h>

#include <random>

#include "fzeta/tube.hpp"
#include "oracles.hpp"

using namespace fzeta;

TEST_CASE("cantor tube formula against the interval-merging oracle") {
  GeneralizedCantorParams p;  // (2, 1/3)
  const double c = p.gap_half_width();

  SUBCASE("shallow levels, literal merge") {
    // For t >= a^L the level-L pre-fractal has the same t-neighborhood
    // measure as the limit set (the sub-level gaps are already saturated).
    for (int level : {8, 10}) {
      std::vector<std::pair<double, double>> iv;
      for (auto& [a, b] : cantor_intervals_exact(p, static_cast<unsigned>(level)))
        iv.emplace_back(a.to_double(), b.to_double());
      for (double t : {0.01, 0.02, 0.05, 0.12}) {
        const double oracle = oracles::merged_tube_measure(iv, t);
        CHECK(cantor_tube_volume(p, t) == doctest::Approx(oracle).epsilon(1e-12));
      }
    }
  }

  SUBCASE("deep t against the gap-family oracle") {
    for (int k = 1; k <= 40; ++k) {
      const double t = c * std::pow(0.7, k);
      const double oracle = oracles::cantor_tube_measure_families(2, 1.0 / 3.0, t);
      CHECK(cantor_tube_volume(p, t) == doctest::Approx(oracle).epsilon(1e-10));
      CHECK(cantor_tube_volume_gaps(p, t) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }

  SUBCASE("(3, 1/5) against the oracle") {
    GeneralizedCantorParams q;
    q.m = 3;
    q.a = Rational(1, 5);
    const double cq = q.gap_half_width();
    for (int k = 1; k <= 30; ++k) {
      const double t = cq * std::pow(0.64, k);
      const double oracle = oracles::cantor_tube_measure_families(3, 0.2, t);
      CHECK(cantor_tube_volume(q, t) == doctest::Approx(oracle).epsilon(1e-10));
    }
  }

  SUBCASE("validity window") {
    CHECK_THROWS_AS(cantor_tube_volume(p, c), domain_error);
    CHECK_THROWS_AS(cantor_tube_volume(p, -0.1), domain_error);
  }
}

TEST_CASE("cantor tube log-periodicity") {
  GeneralizedCantorParams p;
  const double D = p.dimension();
  const double a = p.a_value();
  for (int k = 0; k < 24; ++k) {
    const double t = p.gap_half_width() * std::pow(0.83, k + 1);
    const double lhs = cantor_tube_volume(p, a * t) * std::pow(a * t, D - 1.0);
    const double rhs = cantor_tube_volume(p, t) * std::pow(t, D - 1.0);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("cantor oscillation extremes match the content formulas") {
  for (auto [m, aq] : {std::pair<int, Rational>{2, {1, 3}}, {3, {1, 5}}, {2, {1, 4}}}) {
    GeneralizedCantorParams p;
    p.m = m;
    p.a = aq;
    const double D = p.dimension();
    const double c = p.gap_half_width();
    double lo = 1e300, hi = 0.0;
    const int n = 200000;
    for (int i = 0; i <= n; ++i) {
      const double t = c * std::exp(-p.period() * i / n);
      const double g = cantor_tube_volume(p, t * (1.0 - 1e-15)) * std::pow(t, D - 1.0);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    const double lower = (1.0 / D) * std::pow(2.0 * D / (1.0 - D), 1.0 - D);
    const double upper = std::pow(c, D - 1.0) * p.m * (1.0 - p.a_value()) / (p.m - 1);
    CHECK(lo == doctest::Approx(lower).epsilon(1e-6));
    CHECK(hi == doctest::Approx(upper).epsilon(1e-6));
  }
}

TEST_CASE("string tube volumes") {
  SUBCASE("geometric string at t = 1/8") {
    // Lengths >= 1/4 saturate at 2t each; the rest contribute fully.
    const auto s = FractalString::geometric(0.5);
    CHECK(string_tube_volume(s, 0.125) == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("saturation at t >= l1/2") {
    for (const auto& s : {FractalString::geometric(0.5), FractalString::cantor(2, {1, 3})}) {
      CHECK(string_tube_volume(s, 0.5 * s.length(1)) ==
            doctest::Approx(s.total_length()).epsilon(1e-12));
      CHECK(string_tube_volume(s, s.length(1)) ==
            doctest::Approx(s.total_length()).epsilon(1e-12));
    }
  }
  SUBCASE("cantor string against the brute sum") {
    const auto s = FractalString::cantor(2, {1, 3});
    for (int n = 2; n <= 14; ++n) {
      const double t = 0.5 * std::pow(3.0, -n);
      double brute = 0.0;
      for (std::uint64_t j = 1; j <= 3000000; ++j) {
        const double lj = s.length(j);
        brute += std::min(lj, 2.0 * t);
        if (lj < 2.0 * t) {  // lengths are nonincreasing: the rest count fully
          brute += s.tail_sum(j + 1).first;
          break;
        }
      }
      CHECK(string_tube_volume(s, t) == doctest::Approx(brute).epsilon(1e-12));
    }
  }
}

TEST_CASE("sphere tube volumes") {
  CHECK(sphere_tube_volume(2, 1.0, 0.07) == doctest::Approx(4.0 * pi * 0.07).epsilon(1e-14));
  CHECK(sphere_tube_volume(1, 1.0, 0.3) == doctest::Approx(4.0 * 0.3).epsilon(1e-14));
  const double w3 = unit_ball_volume(3);
  CHECK(sphere_tube_volume(3, 2.0, 0.1) ==
        doctest::Approx(w3 * (std::pow(2.1, 3) - std::pow(1.9, 3))).epsilon(1e-14));
  CHECK_THROWS_AS(sphere_tube_volume(2, 1.0, 1.0), domain_error);
}

TEST_CASE("distance transform: exactness") {
  SUBCASE("single center pixel on 3x3") {
    PixelSet2D px;
    px.width = px.height = 3;
    px.extent = {0, 0, 1, 1};
    px.mask.assign(9, 0);
    px.mask[4] = 1;
    const auto f = distance_transform(px);
    CHECK(f.at(0, 0) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));
    CHECK(f.at(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(f.at(1, 1) == 0.0);
  }
  SUBCASE("full raster is identically zero") {
    PixelSet2D px;
    px.width = px.height = 16;
    px.extent = {0, 0, 1, 1};
    px.mask.assign(256, 1);
    for (double d : distance_transform(px).dist) CHECK(d == 0.0);
  }
  SUBCASE("matches brute force on random masks") {
    std::mt19937 rng(7);
    PixelSet2D px;
    px.width = px.height = 24;
    px.extent = {0, 0, 1, 1};
    px.mask.assign(576, 0);
    for (auto& b : px.mask) b = rng() % 11 == 0;
    px.mask[100] = 1;
    const auto f = distance_transform(px);
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x) {
        double best = 1e300;
        for (int cy = 0; cy < 24; ++cy)
          for (int cx = 0; cx < 24; ++cx)
            if (px.at(cx, cy)) best = std::min(best, sqr(double(x - cx)) + sqr(double(y - cy)));
        CHECK(f.at(x, y) == doctest::Approx(std::sqrt(best) / 24.0).epsilon(1e-12));
      }
  }
  SUBCASE("Lipschitz in the pixel metric") {
    const auto f = distance_transform(sierpinski_carpet_mask(4));
    std::mt19937 rng(11);
    for (int k = 0; k < 500; ++k) {
      const int x0 = rng() % f.width, y0 = rng() % f.height;
      const int x1 = rng() % f.width, y1 = rng() % f.height;
      const double step = f.pixel_size * std::hypot(double(x1 - x0), double(y1 - y0));
      CHECK(std::abs(f.at(x0, y0) - f.at(x1, y1)) <= step + 1e-12);
    }
  }
}

TEST_CASE("cell distance transform matches brute force") {
  std::mt19937 rng(23);
  PixelSet2D px;
  px.width = 17;
  px.height = 29;
  px.extent = {0, 0, 1, 29.0 / 17.0};
  px.mask.assign(static_cast<std::size_t>(17) * 29, 0);
  for (auto& b : px.mask) b = rng() % 7 == 0;
  px.mask[5] = 1;
  const auto f = cell_distance_transform(px);
  const double h = px.pixel_size();
  for (int y = 0; y < 29; ++y)
    for (int x = 0; x < 17; ++x) {
      double best = 1e300;
      for (int cy = 0; cy < 29; ++cy)
        for (int cx = 0; cx < 17; ++cx) {
          if (!px.at(cx, cy)) continue;
          const double dx = std::max(std::abs(double(x - cx)) - 0.5, 0.0);
          const double dy = std::max(std::abs(double(y - cy)) - 0.5, 0.0);
          best = std::min(best, dx * dx + dy * dy);
        }
      CHECK(f.at(x, y) == doctest::Approx(std::sqrt(best) * h).epsilon(1e-12));
    }
}

TEST_CASE("carpet raster distances against the nearest-cell computation") {
  const auto mask = sierpinski_carpet_mask(5);
  const auto f = distance_transform(mask);
  const double diag = f.pixel_size * std::sqrt(2.0);
  std::mt19937 rng(3);
  for (int k = 0; k < 200; ++k) {
    const int x = rng() % f.width, y = rng() % f.height;
    // Analytic nearest-cell distance from this center to the level-5 squares.
    double best = 1e300;
    for (int cy = 0; cy < f.height; ++cy)
      for (int cx = 0; cx < f.width; ++cx)
        if (mask.at(cx, cy)) {
          const double dx = std::max(std::abs(double(x - cx)) - 0.5, 0.0);
          const double dy = std::max(std::abs(double(y - cy)) - 0.5, 0.0);
          best = std::min(best, std::hypot(dx, dy) * f.pixel_size);
        }
    CHECK(std::abs(f.at(x, y) - best) <= diag + 1e-12);
  }
}

TEST_CASE("cusp tube volumes") {
  const CuspRegion r{2.0, 1.0, 1.0};
  SUBCASE("small-t power law") {
    for (double t : {1e-3, 5e-4, 1e-4}) {
      const double ratio = cusp_tube_volume(r, t) / std::pow(t, 3.0);
      CHECK(std::abs(ratio - 1.0 / 3.0) <= 1e-4);
    }
  }
  SUBCASE("saturation") {
    CHECK(cusp_tube_volume(r, 3.0) == doctest::Approx(cusp_region_volume(r)).epsilon(1e-12));
  }
  SUBCASE("monotone in t") {
    double prev = 0.0;
    for (double t = 1e-4; t < 2.0; t *= 1.37) {
      const double v = cusp_tube_volume(r, t);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("union tube volume subtracts bridge overlap") {
  UnionOfDescriptors u;
  u.members.push_back(make_set(PointSet1D{{0.0, 1.0}}));
  u.members.push_back(make_set(PointSet1D{{1.5, 2.5}}));
  const auto set = make_set(u);
  // t = 0.3: bridge gap 0.5 < 2t = 0.6, overlap 0.1.
  const double direct = oracles::merged_tube_measure_points({0.0, 1.0, 1.5, 2.5}, 0.3);
  CHECK(tube_volume(set, 0.3) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(tube_volume(set, 0.1) == doctest::Approx(
      oracles::merged_tube_measure_points({0.0, 1.0, 1.5, 2.5}, 0.1)).epsilon(1e-14));
}

TEST_CASE("sample_tube attaches usable models") {
  GeneralizedCantorParams p;
  const auto ts = sample_tube(make_set(CantorBlock{p}), geometric_grid(0.1, 1e-3, 16));
  REQUIRE(ts.model.has_value());
  CHECK(ts.model->codimension == doctest::Approx(1.0 - p.dimension()));
  CHECK(ts.model->volume(1e-5) == doctest::Approx(cantor_tube_volume(p, 1e-5)).epsilon(1e-14));
}

TEST_CASE("pixel sets sample through the raster route") {
  const auto samples = sample_tube(make_set(sierpinski_carpet_mask(4)),
                                   geometric_grid(0.3, 0.02, 8));
  for (const auto& s : samples.samples) {
    CHECK(!s.exact);
    CHECK(s.error_bound >= 0.0);
    CHECK(s.volume <= 1.0 + 1e-12);
  }
}
