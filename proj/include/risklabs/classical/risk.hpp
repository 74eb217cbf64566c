#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "risklabs/core/errors.hpp"

namespace risklabs {

/// RiskMetrics recursion sigma^2_t = lambda sigma^2_{t-1} + (1 - lambda) r^2_{t-1},
/// sigma^2_1 = r_1^2. Returns the one-step-ahead value sigma^2_{n+1}, which uses
/// every return in the input.
inline double ewma_vol(std::span<const double> returns, double lambda = 0.94) {
  if (returns.empty()) throw InputError("ewma_vol needs at least one return");
  if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("ewma_vol: 0 < lambda < 1 violated");
  double var = returns[0] * returns[0];
  for (std::size_t t = 1; t <= returns.size(); ++t) {
    var = lambda * var + (1.0 - lambda) * returns[t - 1] * returns[t - 1];
  }
  return var;
}

/// Rank of the lower empirical alpha-quantile among n values: ceil(alpha * n).
inline std::size_t lower_quantile_rank(std::size_t n, double alpha) {
  // The small offset keeps alpha * n that is integral in exact arithmetic from rounding up.
  const double k = std::ceil(alpha * static_cast<double>(n) - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, k));
}

/// Historical-simulation VaR: the ceil(alpha * N)-th smallest return, no interpolation.
inline double historical_var(std::span<const double> window, double alpha = 0.05) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("historical_var: 0 < alpha < 1 violated");
  const auto need = static_cast<std::size_t>(std::ceil(1.0 / alpha - 1e-9));
  if (window.size() < need) {
    throw InputError("historical_var needs at least " + std::to_string(need) + " returns, got " +
                     std::to_string(window.size()));
  }
  std::vector<double> sorted(window.begin(), window.end());
  const std::size_t k = lower_quantile_rank(sorted.size(), alpha);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

/// Inverse standard normal CDF.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("normal_quantile: 0 < p < 1 violated");
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

}  // namespace risklabs
