#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>

#include "risklabs/backtest/rolling.hpp"
#include "risklabs/classical/garch.hpp"
#include "risklabs/classical/risk.hpp"
#include "risklabs/ingest/returns.hpp"
#include "risklabs/ingest/samples.hpp"
#include "risklabs/model/model.hpp"

namespace risklabs {

namespace detail {
inline std::span<const double> trailing(const std::vector<double>& r, std::size_t n) {
  return std::span<const double>(r).last(std::min(n, r.size()));
}
}  // namespace detail

/// Historical simulation over the last `window` returns: VaR is the lower
/// empirical 0.05-quantile, every horizon's vol is the window's realized vol.
inline MethodUnderTest historical_method(std::size_t window = 250) {
  return {"historical", [window](const DatasetView& v) {
            const ReturnSeries r = compute_returns(v.prices());
            if (r.size() < window) {
              throw InputError("historical method needs " + std::to_string(window) + " returns before " +
                               v.as_of().iso() + ", have " + std::to_string(r.size()));
            }
            const auto w = detail::trailing(r.returns, window);
            RiskForecast f;
            f.as_of = v.as_of();
            f.vol.fill(realized_log_vol(w));
            f.var_1d = historical_var(w, kVarAlpha);
            return f;
          }};
}

/// GARCH(1,1) refit on the full available history every `refit_every`
/// predictions; VaR is the Gaussian 0.05-quantile of the next-day variance.
inline MethodUnderTest garch_method(std::size_t refit_every = 250) {
  struct State {
    std::optional<GarchParams> params;
    std::size_t since_fit = 0;
  };
  auto state = std::make_shared<State>();
  return {"garch", [state, refit_every](const DatasetView& v) {
            const ReturnSeries r = compute_returns(v.prices());
            if (!state->params || state->since_fit >= refit_every) {
              state->params = garch_fit(r.returns);
              state->since_fit = 0;
            }
            ++state->since_fit;
            const auto vars = garch_forecast(*state->params, garch_filter(*state->params, r.returns),
                                             static_cast<std::size_t>(kHorizons.back()));
            RiskForecast f;
            f.as_of = v.as_of();
            for (std::size_t h = 0; h < kNumHorizons; ++h) {
              f.vol[h] = horizon_log_vol(std::span<const double>(vars).first(static_cast<std::size_t>(kHorizons[h])));
            }
            f.var_1d = normal_quantile(kVarAlpha) * std::sqrt(vars.front());
            return f;
          }};
}

struct NeuralMethodOptions {
  ModelConfig config;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
  std::shared_ptr<analyzer::Analyzer> analyzer;
  std::string name = "risklabs";
};

/// The neural model trained once on the data available at the first
/// forecast date, then applied day by day with a news memory rebuilt from
/// each view.
inline MethodUnderTest neural_method(NeuralMethodOptions opts) {
  struct State {
    std::optional<RiskLabsModel> model;
    TrainResult train;
  };
  auto state = std::make_shared<State>();
  const std::string name = opts.name;
  return {name, [state, opts = std::move(opts)](const DatasetView& v) {
            if (!state->model) {
              state->model.emplace(opts.config, opts.analyzer);
              state->train = state->model->fit(v.data(), v.ticker(), opts.epochs, opts.seed);
            }
            const auto& d = v.data();
            const TrainingSample s = make_prediction_sample(v.prices(), d.news, d.events, v.as_of());
            return state->model->predict(s, RiskLabsModel::memory_for(d, v.ticker()));
          }};
}

}  // namespace risklabs
