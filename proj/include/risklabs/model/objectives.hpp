#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "risklabs/core/types.hpp"
#include "risklabs/ingest/returns.hpp"
#include "risklabs/model/config.hpp"
#include "risklabs/nn/loss.hpp"

namespace risklabs {

/// Head outputs: four log-vols aligned with kHorizons, then the 1-day VaR.
inline constexpr std::size_t kHeadOutputs = kNumHorizons + 1;
inline constexpr std::size_t kVarOutput = kNumHorizons;

struct MultitaskWeights {
  std::array<double, kNumHorizons> vol{1.0, 1.0, 1.0, 1.0};
  double var = 1.0;
};

struct MultitaskLoss {
  double value = 0.0;
  std::array<double, kHeadOutputs> grad{};
};

/// sum_h lambda_h (v_hat_h - v_h)^2 + lambda_q * pinball_0.05(VaR_hat, r_next)
inline MultitaskLoss multitask_loss(std::span<const double> pred, const Labels& labels, const MultitaskWeights& lambda) {
  nn::require_len(pred.size(), kHeadOutputs, "multitask_loss");
  MultitaskLoss out;
  for (std::size_t h = 0; h < kNumHorizons; ++h) {
    const double d = pred[h] - labels.log_vol[h];
    out.value += lambda.vol[h] * d * d;
    out.grad[h] = 2.0 * lambda.vol[h] * d;
  }
  const double q = pred[kVarOutput];
  out.value += lambda.var * nn::pinball(q, labels.next_return, kVarAlpha);
  out.grad[kVarOutput] = lambda.var * nn::pinball_grad(q, labels.next_return, kVarAlpha);
  return out;
}

/// w_i proportional to exp(-gamma * age_i), age in calendar days before as_of, summing to 1.
inline std::vector<double> sample_weights(std::span<const Date> sample_dates, Date as_of, const DecayConfig& decay) {
  require_valid(decay, "decay config");
  if (sample_dates.empty()) throw InputError("sample_weights: no samples");
  std::vector<double> w(sample_dates.size());
  double min_age = std::numeric_limits<double>::infinity();
  for (const Date d : sample_dates) {
    if (d > as_of) throw InputError("sample dated " + d.iso() + " is after the weighting date " + as_of.iso());
    min_age = std::min(min_age, days_between(d, as_of));
  }
  // Ages are measured from the newest sample so the exponentials cannot all underflow.
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(-decay.gamma_sample * (days_between(sample_dates[i], as_of) - min_age));
    total += w[i];
  }
  for (auto& x : w) x /= total;
  return w;
}

inline constexpr std::size_t kProbeRecent = 30;
inline constexpr std::size_t kProbePrior = 90;
inline constexpr std::size_t kWindowStep = 30;

/// std of the last 30 returns over std of the 90 before them.
inline double regime_probe(std::span<const double> history) {
  if (history.size() < kProbeRecent + kProbePrior) {
    throw InputError("window selection needs at least " + std::to_string(kProbeRecent + kProbePrior) +
                     " returns, got " + std::to_string(history.size()));
  }
  const auto recent = history.last(kProbeRecent);
  const auto prior = history.subspan(history.size() - kProbeRecent - kProbePrior, kProbePrior);
  return std::max(sample_std(recent), kVolFloor) / std::max(sample_std(prior), kVolFloor);
}

/// One update of the dynamic window given the returns available so far.
inline std::size_t select_window(std::span<const double> history, const WindowConfig& cfg,
                                 std::size_t previous_window) {
  require_valid(cfg, "window config");
  if (regime_probe(history) > cfg.theta) return cfg.w_min;
  return std::min(previous_window + kWindowStep, cfg.w_max);
}

/// As above, on returns dated on or before `as_of`.
inline std::size_t select_window(const ReturnSeries& history, Date as_of, const WindowConfig& cfg,
                                 std::size_t previous_window) {
  const auto end = std::upper_bound(history.dates.begin(), history.dates.end(), as_of) - history.dates.begin();
  return select_window(std::span<const double>(history.returns).first(static_cast<std::size_t>(end)), cfg,
                       previous_window);
}

/// Runs the window rule every 30 days from the first day it is defined,
/// starting at w_min, and returns the window in force at the end of `history`.
inline std::size_t dynamic_window(std::span<const double> history, const WindowConfig& cfg) {
  const std::size_t first = kProbeRecent + kProbePrior;
  if (history.size() < first) return std::max(cfg.w_min, history.size());
  std::size_t w = cfg.w_min;
  std::size_t t = first;
  for (; t <= history.size(); t += kWindowStep) w = select_window(history.first(t), cfg, w);
  if (t - kWindowStep != history.size()) w = select_window(history, cfg, w);
  return w;
}

}  // namespace risklabs
