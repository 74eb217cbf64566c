#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "risklabs/classical/nelder_mead.hpp"
#include "risklabs/core/errors.hpp"
#include "risklabs/core/validate.hpp"

namespace risklabs {

/// sigma^2_t = omega + alpha * r^2_{t-1} + beta * sigma^2_{t-1}
struct GarchParams {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  double persistence() const { return alpha + beta; }
  double long_run_variance() const { return omega / (1.0 - alpha - beta); }
  friend bool operator==(const GarchParams&, const GarchParams&) = default;
};

inline Violations validate(const GarchParams& p) {
  Violations out;
  if (!std::isfinite(p.omega) || !std::isfinite(p.alpha) || !std::isfinite(p.beta)) {
    out.push_back({"params", "all finite"});
    return out;
  }
  if (!(p.omega > 0.0)) out.push_back({"omega", "omega > 0"});
  if (p.alpha < 0.0) out.push_back({"alpha", "alpha >= 0"});
  if (p.beta < 0.0) out.push_back({"beta", "beta >= 0"});
  if (!(p.alpha + p.beta < 1.0)) out.push_back({"alpha+beta", "alpha + beta < 1"});
  return out;
}

struct GarchState {
  double last_return = 0.0;
  double last_variance = 0.0;  // sigma^2 of the day last_return was drawn
};

namespace detail {

inline double sample_variance(std::span<const double> r) {
  double mean = 0.0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  double ss = 0.0;
  for (double v : r) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(r.size() - 1);
}

}  // namespace detail

/// Conditional variances sigma^2_1..sigma^2_n, seeded with the sample variance.
inline std::vector<double> garch_variances(const GarchParams& p, std::span<const double> returns) {
  require_valid(p, "garch params");
  if (returns.size() < 2) throw InputError("garch_variances needs at least 2 returns");
  std::vector<double> var(returns.size());
  var[0] = detail::sample_variance(returns);
  for (std::size_t t = 1; t < returns.size(); ++t) {
    var[t] = p.omega + p.alpha * returns[t - 1] * returns[t - 1] + p.beta * var[t - 1];
  }
  return var;
}

/// Gaussian conditional log-likelihood.
inline double garch_loglik(const GarchParams& p, std::span<const double> returns) {
  if (returns.size() < 10) throw InputError("garch_loglik needs at least 10 returns");
  const std::vector<double> var = garch_variances(p, returns);
  constexpr double kLog2Pi = 1.8378770664093454836;
  double ll = 0.0;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    if (!(var[t] > 0.0) || !std::isfinite(var[t])) {
      throw NumericError("non-positive conditional variance at t=" + std::to_string(t));
    }
    ll += kLog2Pi + std::log(var[t]) + returns[t] * returns[t] / var[t];
  }
  return -0.5 * ll;
}

/// State after the last observation, ready for garch_forecast.
inline GarchState garch_filter(const GarchParams& p, std::span<const double> returns) {
  const std::vector<double> var = garch_variances(p, returns);
  return {returns.back(), var.back()};
}

namespace detail {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// alpha + beta stays below this, far enough from 1 to survive rounding.
inline constexpr double kPersistenceCap = 1.0 - 1e-6;

/// Unconstrained (x, y, z) -> params with omega > 0 and alpha + beta < 1.
inline GarchParams garch_from_unconstrained(const std::array<double, 3>& u) {
  const double y = std::clamp(u[1], -30.0, 30.0);
  const double z = std::clamp(u[2], -30.0, 30.0);
  GarchParams p;
  p.omega = std::exp(u[0]);
  p.alpha = logistic(y) * kPersistenceCap;
  p.beta = logistic(z) * (kPersistenceCap - p.alpha);
  return p;
}

inline std::array<double, 3> garch_to_unconstrained(const GarchParams& p) {
  return {std::log(p.omega), logit(p.alpha / kPersistenceCap), logit(p.beta / (kPersistenceCap - p.alpha))};
}

}  // namespace detail

struct GarchFitOptions {
  double tolerance = 1e-8;
  std::size_t max_iterations = 2000;
};

/// Maximum-likelihood GARCH(1,1) by Nelder-Mead over transformed parameters.
/// Several starting persistences are tried; a later start replaces an earlier
/// optimum only if it improves the likelihood by more than 1e-6, so flat
/// ridges resolve toward the first (least persistent) start.
inline GarchParams garch_fit(std::span<const double> returns, const GarchFitOptions& opts = {}) {
  if (returns.size() < 100) throw InputError("garch_fit needs at least 100 returns");
  const double var = detail::sample_variance(returns);
  if (!(var > 0.0) || !std::isfinite(var)) throw NumericError("garch_fit: degenerate input");

  auto objective = [&](const std::array<double, 3>& u) {
    const GarchParams p = detail::garch_from_unconstrained(u);
    if (!(p.alpha + p.beta < 1.0) || !(p.omega > 0.0)) return std::numeric_limits<double>::infinity();
    try {
      return -garch_loglik(p, returns);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  constexpr std::array<std::array<double, 2>, 3> kStarts{{{0.05, 0.10}, {0.05, 0.60}, {0.08, 0.88}}};
  bool have = false;
  SimplexResult<3> best;
  for (const auto& [a0, b0] : kStarts) {
    const GarchParams p0{var * (1.0 - a0 - b0), a0, b0};
    const auto u0 = detail::garch_to_unconstrained(p0);
    if (!std::isfinite(objective(u0))) throw NumericError("garch_fit: degenerate input");
    auto r = nelder_mead<3>(objective, u0, 0.5, opts.tolerance, opts.max_iterations);
    // Restart from the optimum with a fresh simplex to escape early collapse.
    r = nelder_mead<3>(objective, r.x, 0.1, opts.tolerance, opts.max_iterations);
    if (!have || r.value < best.value - 1e-6) {
      best = r;
      have = true;
    }
  }
  if (!std::isfinite(best.value)) throw NumericError("garch_fit: likelihood not finite");
  const GarchParams fit = detail::garch_from_unconstrained(best.x);
  if (!validate(fit).empty()) throw NumericError("garch_fit produced invalid parameters");
  return fit;
}

/// Per-day variance forecasts for days t+1..t+k.
inline std::vector<double> garch_forecast(const GarchParams& p, const GarchState& state, std::size_t k) {
  require_valid(p, "garch params");
  if (!(state.last_variance > 0.0)) throw InputError("garch state: last_variance > 0 violated");
  if (k < 1) throw InputError("garch_forecast needs k >= 1");
  std::vector<double> out(k);
  out[0] = p.omega + p.alpha * state.last_return * state.last_return + p.beta * state.last_variance;
  const double long_run = p.long_run_variance();
  const double persistence = p.persistence();
  double decay = 1.0;
  for (std::size_t j = 1; j < k; ++j) {
    decay *= persistence;
    out[j] = long_run + decay * (out[0] - long_run);
  }
  return out;
}

/// ln sqrt(mean of per-day variances): the forecast counterpart of realized_log_vol.
inline double horizon_log_vol(std::span<const double> daily_variances) {
  if (daily_variances.empty()) throw InputError("horizon_log_vol needs at least one variance");
  double sum = 0.0;
  for (double v : daily_variances) sum += v;
  return 0.5 * std::log(sum / static_cast<double>(daily_variances.size()));
}

}  // namespace risklabs
