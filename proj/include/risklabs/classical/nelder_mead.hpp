#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

namespace risklabs {

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x{};
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
};

/// Derivative-free minimization with the standard Nelder-Mead moves
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5). Stops when the
/// spread of function values across the simplex drops below `tolerance`.
/// Non-finite objective values are treated as +inf.
template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, const std::array<double, N>& start, double initial_step,
                             double tolerance = 1e-8, std::size_t max_iterations = 2000) {
  using Point = std::array<double, N>;
  auto eval = [&](const Point& p) {
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::array<Point, N + 1> pts{};
  std::array<double, N + 1> vals{};
  pts[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    pts[i + 1] = start;
    pts[i + 1][i] += initial_step;
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = eval(pts[i]);

  SimplexResult<N> res;
  std::array<std::size_t, N + 1> order{};
  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order[0], worst = order[N], second = order[N - 1];
    if (std::isfinite(vals[worst]) && vals[worst] - vals[best] < tolerance) {
      res.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t k = 0; k < N; ++k) {
      for (std::size_t d = 0; d < N; ++d) centroid[d] += pts[order[k]][d] / static_cast<double>(N);
    }
    auto along = [&](double t) {
      Point p;
      for (std::size_t d = 0; d < N; ++d) p[d] = centroid[d] + t * (pts[worst][d] - centroid[d]);
      return p;
    };

    const Point reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < vals[best]) {
      const Point expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Point contracted = along(outside ? -0.5 : 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= N; ++k) {
      auto& p = pts[order[k]];
      for (std::size_t d = 0; d < N; ++d) p[d] = pts[best][d] + 0.5 * (p[d] - pts[best][d]);
      vals[order[k]] = eval(p);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  res.x = pts[best];
  res.value = vals[best];
  return res;
}

}  // namespace risklabs
