#pragma once

#include <cmath>
#include <span>
#include <string>

#include "risklabs/core/errors.hpp"
#include "risklabs/ingest/returns.hpp"

namespace risklabs {

/// chi-square(1) 95% critical value used for the Kupiec decision.
inline constexpr double kKupiecCritical = 3.84;

/// Days with realized < predicted VaR; ties are not violations.
inline std::size_t count_exceedances(std::span<const double> var_preds, std::span<const double> realized) {
  if (var_preds.size() != realized.size()) {
    throw InputError("exceedance count: " + std::to_string(var_preds.size()) + " predictions vs " +
                     std::to_string(realized.size()) + " realizations");
  }
  std::size_t x = 0;
  for (std::size_t i = 0; i < var_preds.size(); ++i) x += realized[i] < var_preds[i] ? 1 : 0;
  return x;
}

inline double var_exceedance_rate(std::span<const double> var_preds, std::span<const double> realized) {
  const std::size_t x = count_exceedances(var_preds, realized);
  if (var_preds.empty()) throw InputError("exceedance rate of an empty series");
  return static_cast<double>(x) / static_cast<double>(var_preds.size());
}

namespace detail {
/// n ln p with 0 ln 0 = 0.
inline double xlogy(double n, double p) { return n == 0.0 ? 0.0 : n * std::log(p); }
}  // namespace detail

/// Kupiec proportion-of-failures likelihood ratio for x exceedances in n days.
inline double kupiec_pof(std::size_t exceedances, std::size_t n, double alpha) {
  if (n == 0 || exceedances > n) throw InputError("kupiec_pof needs 0 <= x <= N and N > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("kupiec_pof: 0 < alpha < 1 violated");
  const double x = static_cast<double>(exceedances);
  const double N = static_cast<double>(n);
  const double phat = x / N;
  const double null_ll = detail::xlogy(N - x, 1.0 - alpha) + detail::xlogy(x, alpha);
  const double alt_ll = detail::xlogy(N - x, 1.0 - phat) + detail::xlogy(x, phat);
  return std::max(0.0, -2.0 * null_ll + 2.0 * alt_ll);
}

inline bool kupiec_reject(double lr) { return lr > kKupiecCritical; }

/// Sample std of day-over-day changes of the VaR series.
inline double responsiveness(std::span<const double> var_preds) {
  if (var_preds.size() < 2) throw InputError("responsiveness needs at least 2 predictions");
  if (var_preds.size() == 2) return 0.0;  // a single change has no spread
  std::vector<double> d(var_preds.size() - 1);
  for (std::size_t i = 0; i + 1 < var_preds.size(); ++i) d[i] = var_preds[i + 1] - var_preds[i];
  return sample_std(d);
}

}  // namespace risklabs
