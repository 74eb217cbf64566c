#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "risklabs/backtest/metrics.hpp"
#include "risklabs/core/dataset.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/core/validate.hpp"
#include "risklabs/ingest/returns.hpp"

namespace risklabs {

/// A forecaster under evaluation. The predictor only ever sees a view of the
/// data truncated at the forecast date; it may keep state between calls.
struct MethodUnderTest {
  std::string name;
  std::function<RiskForecast(const DatasetView&)> predictor;
};

struct CurvePoint {
  Date date;
  double var_pred = 0.0;
  double realized_return = 0.0;  // return over the following trading day

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct EvalReport {
  std::string method;
  std::array<double, kNumHorizons> vol_mse{};
  std::array<std::size_t, kNumHorizons> vol_count{};  // eval days with a full label window
  std::size_t n_eval = 0;
  std::size_t exceedances = 0;
  double var_exceedance_rate = 0.0;
  double kupiec_lr = 0.0;
  bool kupiec_reject = false;
  double responsiveness = 0.0;
  std::vector<CurvePoint> curves;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline constexpr std::size_t kMinEvalDays = 100;

/// Out-of-sample evaluation of `method` on `ticker`: on every trading day t
/// from the first one on or after `split` that still has a next day, the
/// predictor gets the data up to t and is scored against what followed.
inline EvalReport rolling_backtest(MethodUnderTest& method, const Dataset& data, const std::string& ticker,
                                   Date split) {
  const PriceSeries& prices = data.series(ticker);
  const ReturnSeries rets = compute_returns(prices);
  const auto first = static_cast<std::size_t>(std::lower_bound(prices.dates.begin(), prices.dates.end(), split) -
                                              prices.dates.begin());
  const std::size_t n = prices.size();
  const std::size_t n_eval = first + 1 < n ? n - 1 - first : 0;
  if (n_eval < kMinEvalDays) {
    throw InputError("split " + split.iso() + " leaves " + std::to_string(n_eval) + " evaluation days, need " +
                     std::to_string(kMinEvalDays));
  }

  EvalReport rep;
  rep.method = method.name;
  rep.n_eval = n_eval;
  std::vector<double> var_preds, realized;
  std::array<double, kNumHorizons> sse{};
  for (std::size_t p = first; p + 1 < n; ++p) {
    const DatasetView view(data, ticker, prices.dates[p]);
    const RiskForecast f = method.predictor(view);
    require_valid(f, "forecast of '" + method.name + "' on " + prices.dates[p].iso());
    // rets[p] is the return from day p to day p + 1.
    const double r_next = rets.returns[p];
    var_preds.push_back(f.var_1d);
    realized.push_back(r_next);
    rep.curves.push_back({prices.dates[p], f.var_1d, r_next});
    for (std::size_t h = 0; h < kNumHorizons; ++h) {
      const auto len = static_cast<std::size_t>(kHorizons[h]);
      if (p + len > rets.size()) continue;
      const double label = realized_log_vol(std::span<const double>(rets.returns).subspan(p, len));
      const double d = f.vol[h] - label;
      sse[h] += d * d;
      ++rep.vol_count[h];
    }
  }
  for (std::size_t h = 0; h < kNumHorizons; ++h) {
    rep.vol_mse[h] = rep.vol_count[h] ? sse[h] / static_cast<double>(rep.vol_count[h]) : 0.0;
  }
  rep.exceedances = count_exceedances(var_preds, realized);
  rep.var_exceedance_rate = static_cast<double>(rep.exceedances) / static_cast<double>(n_eval);
  rep.kupiec_lr = kupiec_pof(rep.exceedances, n_eval, kVarAlpha);
  rep.kupiec_reject = kupiec_reject(rep.kupiec_lr);
  rep.responsiveness = responsiveness(var_preds);
  return rep;
}

}  // namespace risklabs
