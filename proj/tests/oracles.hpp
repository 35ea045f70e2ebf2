#pragma once

// Test-only oracles, kept independent of the evaluation paths they check.

#include <algorithm>
#include <utility>
#include <vector>

#include "fzeta/core.hpp"

namespace oracles {

// Measure of the t-neighborhood of a finite interval union by literal
// expand-and-merge.
inline double merged_tube_measure(std::vector<std::pair<double, double>> intervals, double t) {
  for (auto& [a, b] : intervals) {
    a -= t;
    b += t;
  }
  std::sort(intervals.begin(), intervals.end());
  double acc = 0.0;
  double cur_a = intervals.front().first, cur_b = intervals.front().second;
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].first <= cur_b) {
      cur_b = std::max(cur_b, intervals[i].second);
    } else {
      acc += cur_b - cur_a;
      cur_a = intervals[i].first;
      cur_b = intervals[i].second;
    }
  }
  return acc + (cur_b - cur_a);
}

// Same measure for a point set.
inline double merged_tube_measure_points(const std::vector<double>& pts, double t) {
  std::vector<std::pair<double, double>> iv;
  iv.reserve(pts.size());
  for (double x : pts) iv.emplace_back(x, x);
  return merged_tube_measure(std::move(iv), t);
}

// Exact tube measure of C^(m,a) from its gap families: generations with holes
// wider than 2t contribute 2t per hole, the rest contribute their widths.
// Independent of both the closed tube formula and the library's evaluator
// (works from first principles on the run-length gap list).
inline double cantor_tube_measure_families(int m, double a, double t) {
  const double hole0 = (1.0 - m * a) / (m - 1);
  double acc = 2.0 * t;
  double count = 1.0;  // holes in generation n: (m-1) m^(n-1)
  double width = hole0;
  for (int n = 1; n < 4000; ++n) {
    const double holes = (m - 1) * count;
    if (width < 2.0 * t) {
      // All remaining gap mass is covered: total gap length below this
      // generation is width * holes / (1 - m a).
      acc += holes * width / (1.0 - m * a);
      return acc;
    }
    acc += holes * 2.0 * t;
    count *= m;
    width *= a;
  }
  return acc;
}

// Brute-force distance zeta of a finite sorted point set: collars plus gap
// antiderivatives, evaluated term by term at real s.
inline double point_set_zeta_real(const std::vector<double>& pts, double delta, double s) {
  double acc = 2.0 * std::pow(delta, s) / s;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double w = pts[i + 1] - pts[i];
    if (w > 2.0 * delta)
      acc += 2.0 * std::pow(delta, s) / s;
    else
      acc += 2.0 * std::pow(0.5 * w, s) / s;
  }
  return acc;
}

}  // namespace oracles
