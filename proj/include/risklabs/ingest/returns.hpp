#pragma once

#include <cmath>
#include <span>

#include "risklabs/core/errors.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/core/validate.hpp"

namespace risklabs {

/// Standard deviations below this are treated as this value before the log.
inline constexpr double kVolFloor = 1e-8;

/// r_t = ln(P_t / P_{t-1}). The first price date is dropped.
inline ReturnSeries compute_returns(const PriceSeries& prices) {
  if (prices.size() < 2) throw InputError("compute_returns needs at least 2 prices");
  require_valid(prices, "prices '" + prices.ticker + "'");
  ReturnSeries out{prices.ticker, {}, {}};
  out.dates.reserve(prices.size() - 1);
  out.returns.reserve(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i) {
    out.dates.push_back(prices.dates[i]);
    out.returns.push_back(std::log(prices.closes[i] / prices.closes[i - 1]));
  }
  return out;
}

/// Unbiased sample standard deviation (n - 1 denominator).
inline double sample_std(std::span<const double> x) {
  if (x.size() < 2) throw InputError("sample_std needs at least 2 values");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

/// ln of the sample standard deviation of a return window, floored at ln(1e-8).
inline double realized_log_vol(std::span<const double> returns) {
  if (returns.size() < 2) throw InputError("realized_log_vol needs at least 2 returns");
  const double sd = sample_std(returns);
  return std::log(sd < kVolFloor ? kVolFloor : sd);
}

}  // namespace risklabs
