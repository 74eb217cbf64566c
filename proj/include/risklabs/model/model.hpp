#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "risklabs/analyzer/analyzer.hpp"
#include "risklabs/classical/risk.hpp"
#include "risklabs/core/dataset.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/encoders/earnings.hpp"
#include "risklabs/encoders/news.hpp"
#include "risklabs/encoders/timeseries.hpp"
#include "risklabs/ingest/io.hpp"
#include "risklabs/ingest/samples.hpp"
#include "risklabs/model/config.hpp"
#include "risklabs/model/objectives.hpp"
#include "risklabs/nn/adam.hpp"
#include "risklabs/nn/dense.hpp"
#include "risklabs/nn/recurrent.hpp"
#include "risklabs/nn/serialize.hpp"

namespace risklabs {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr std::size_t kReactionFeatures = 3;
inline constexpr std::size_t kPresenceFeatures = 3;
inline constexpr std::size_t kMinTrainingSamples = 50;
inline constexpr double kInputClip = 3.0;

/// Daily volatility anchor every prediction is expressed against:
/// sqrt of the EWMA variance of the lookback, floored at kVolFloor.
inline double volatility_anchor(std::span<const double> lookback) {
  return std::max(std::sqrt(ewma_vol(lookback)), kVolFloor);
}

/// The parameter-free part of a sample's features, computed once.
struct PreparedSample {
  std::string ticker;
  Date as_of;
  double scale = 1.0;          // volatility_anchor of the raw lookback
  nn::Vector scaled_lookback;  // lookback / scale
  bool has_earnings = false;
  nn::Tensor2 audio;           // segments x D_a
  nn::Tensor2 text;            // segments x D_t
  nn::Vector summary;          // analyzer features, D_s
  nn::Vector reaction;         // kReactionFeatures
  nn::Vector flags;            // prices, earnings, news
  std::optional<Labels> labels;
};

struct TrainOptions {
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
  /// Samples dated before this are excluded (the dynamic window).
  std::optional<Date> window_start;
};

struct TrainResult {
  std::vector<double> loss_trace;  // weighted loss per epoch, before that epoch's update
  std::size_t samples_used = 0;
  std::size_t window_days = 0;     // set by fit()
};

/// Earnings, news-reaction and time-series encoders feeding a two-layer
/// multi-task head (one tanh layer plus a linear skip from the features).
/// Head outputs are residuals on the volatility anchor s:
/// log-vol_h = ln s + out_h and VaR = s * out_4, so the model is scale-free
/// in the level of returns. The stats and reaction inputs are standardized
/// on the training window and clipped to +-3.
class RiskLabsModel {
 public:
  explicit RiskLabsModel(ModelConfig cfg = {}, std::shared_ptr<analyzer::Analyzer> analysis = nullptr)
      : cfg_(std::move(cfg)), analyzer_(std::move(analysis)) {
    require_valid(cfg_, "model config");
    if (!analyzer_) analyzer_ = std::make_shared<analyzer::StubAnalyzer>();
    cell_ = nn::RecurrentCell("timeseries.cell", 1, cfg_.recurrent_hidden);
    earnings_ = EarningsEncoder("earnings", cfg_.dims, cfg_.fused_dim, cfg_.attention_heads, cfg_.attention_key_dim,
                                cfg_.attention_value_dim);
    hidden_ = nn::DenseLayer("head.hidden", feature_dim(), cfg_.head_hidden, cfg_.head_activation);
    output_ = nn::DenseLayer("head.output", cfg_.head_hidden, kHeadOutputs, nn::Activation::kIdentity);
    linear_ = nn::Param("head.linear.weights", kHeadOutputs, feature_dim());
    input_shift_.assign(feature_dim(), 0.0);
    input_scale_.assign(feature_dim(), 1.0);
    standardized_.assign(feature_dim(), false);
    for (std::size_t i : standardized_features()) standardized_[i] = true;
    init(0);
  }

  const ModelConfig& config() const { return cfg_; }
  analyzer::Analyzer& analyzer() const { return *analyzer_; }

  std::size_t timeseries_dim() const { return cfg_.recurrent_hidden + kTimeseriesStats; }
  std::size_t feature_dim() const {
    return timeseries_dim() + cfg_.fused_dim + kReactionFeatures + kPresenceFeatures;
  }

  /// Re-initializes every parameter from `seed`.
  void init(std::uint64_t seed) {
    nn::Rng rng(seed);
    cell_.init(rng);
    earnings_.init(rng);
    hidden_.init(rng);
    output_.init(rng);
    linear_.value.fill(0.0);
  }

  std::vector<nn::Param*> parameters() {
    std::vector<nn::Param*> out;
    cell_.collect(out);
    earnings_.collect(out);
    hidden_.collect(out);
    output_.collect(out);
    out.push_back(&linear_);
    return out;
  }

  nn::RecurrentCell& cell() { return cell_; }
  EarningsEncoder& earnings_encoder() { return earnings_; }
  nn::DenseLayer& hidden_layer() { return hidden_; }
  nn::DenseLayer& output_layer() { return output_; }
  nn::Param& linear_path() { return linear_; }

  // ---- features ---------------------------------------------------------

  PreparedSample prepare(const TrainingSample& s, const NewsMemory& memory) const {
    require_valid(s, "training sample");
    PreparedSample p;
    p.ticker = s.ticker;
    p.as_of = s.as_of;
    p.labels = s.labels;
    p.scale = volatility_anchor(s.lookback_returns);
    p.scaled_lookback.resize(s.lookback_returns.size());
    for (std::size_t i = 0; i < s.lookback_returns.size(); ++i) p.scaled_lookback[i] = s.lookback_returns[i] / p.scale;

    p.has_earnings = cfg_.use_earnings && s.earnings.has_value();
    if (p.has_earnings) {
      require_valid(*s.earnings, "earnings event", cfg_.dims);
      p.audio = audio_matrix(*s.earnings);
      p.text = text_matrix(*s.earnings);
      p.summary = analysis_of(*s.earnings).feature_vector;
      if (p.summary.size() != cfg_.dims.summary) {
        throw InputError("analyzer features: expected D_s = " + std::to_string(cfg_.dims.summary) + ", got " +
                         std::to_string(p.summary.size()));
      }
    }

    const bool has_news = cfg_.use_news && !s.news_window.empty();
    p.reaction.assign(kReactionFeatures, 0.0);
    if (has_news) p.reaction = reaction_block(s, memory, p.scale);
    p.flags = {1.0, p.has_earnings ? 1.0 : 0.0, has_news ? 1.0 : 0.0};
    return p;
  }

  struct Tape {
    nn::RecurrentCell::Tape cell;
    EarningsEncoder::Tape earnings;
    nn::DenseLayer::Tape hidden;
    nn::DenseLayer::Tape output;
  };

  /// [timeseries (H + 3) | fused earnings (F) | reaction (3) | presence flags (3)]
  nn::Vector assemble_features(const PreparedSample& p, Tape* tape = nullptr) const {
    nn::Vector x = encode_timeseries(p.scaled_lookback, cell_, tape ? &tape->cell : nullptr);
    if (p.has_earnings) {
      const auto fused = earnings_.forward(p.audio, p.text, p.summary, tape ? &tape->earnings : nullptr);
      x.insert(x.end(), fused.begin(), fused.end());
    } else {
      x.insert(x.end(), cfg_.fused_dim, 0.0);
    }
    x.insert(x.end(), p.reaction.begin(), p.reaction.end());
    x.insert(x.end(), p.flags.begin(), p.flags.end());
    return x;
  }

  nn::Vector assemble_features(const TrainingSample& s, const NewsMemory& memory) const {
    return assemble_features(prepare(s, memory));
  }

  /// Raw head outputs for a feature vector. The parameter-free features are
  /// first standardized with statistics of the training samples and clipped
  /// to +-kInputClip, so a prediction never extrapolates far outside them.
  nn::Vector head(std::span<const double> features, Tape* tape = nullptr) const {
    nn::require_len(features.size(), feature_dim(), "head input");
    nn::Vector x(features.begin(), features.end());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = standardize(x[i], i);
    const auto h = hidden_.forward(x, tape ? &tape->hidden : nullptr);
    auto y = output_.forward(h, tape ? &tape->output : nullptr);
    nn::gemv_acc(linear_.value, x, y);
    return y;
  }

  /// Feature indices standardized at the head input: the lookback statistics
  /// and the news reaction block.
  std::vector<std::size_t> standardized_features() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kTimeseriesStats; ++i) out.push_back(cfg_.recurrent_hidden + i);
    const std::size_t reaction = timeseries_dim() + cfg_.fused_dim;
    for (std::size_t i = 0; i < kReactionFeatures; ++i) out.push_back(reaction + i);
    return out;
  }

  double standardize(double v, std::size_t i) const {
    if (!standardized_[i]) return v;
    return std::clamp((v - input_shift_[i]) * input_scale_[i], -kInputClip, kInputClip);
  }

  const nn::Vector& input_shift() const { return input_shift_; }
  const nn::Vector& input_scale() const { return input_scale_; }

  /// Sets the head-input standardization from `samples`: mean and 1/std of
  /// each standardized feature, with scale 1 for a constant feature.
  void fit_input_norm(std::span<const PreparedSample> samples) {
    input_shift_.assign(feature_dim(), 0.0);
    input_scale_.assign(feature_dim(), 1.0);
    if (samples.empty()) return;
    const std::size_t reaction = timeseries_dim() + cfg_.fused_dim;
    auto value = [&](const PreparedSample& p, std::size_t i) {
      if (i < timeseries_dim()) return timeseries_stats(p.scaled_lookback)[i - cfg_.recurrent_hidden];
      return p.reaction[i - reaction];
    };
    const double n = static_cast<double>(samples.size());
    for (std::size_t i : standardized_features()) {
      double mean = 0.0;
      for (const auto& p : samples) mean += value(p, i);
      mean /= n;
      double var = 0.0;
      for (const auto& p : samples) var += (value(p, i) - mean) * (value(p, i) - mean);
      const double sd = std::sqrt(var / n);
      input_shift_[i] = mean;
      input_scale_[i] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }
  }

  /// Head outputs mapped to [log-vol x4, VaR] in label units.
  static nn::Vector to_predictions(std::span<const double> out, double scale) {
    nn::Vector pred(kHeadOutputs);
    const double ls = std::log(scale);
    for (std::size_t h = 0; h < kNumHorizons; ++h) pred[h] = ls + out[h];
    pred[kVarOutput] = scale * out[kVarOutput];
    return pred;
  }

  RiskForecast predict(const PreparedSample& p) const {
    const auto pred = to_predictions(head(assemble_features(p)), p.scale);
    RiskForecast f;
    f.as_of = p.as_of;
    for (std::size_t h = 0; h < kNumHorizons; ++h) f.vol[h] = pred[h];
    f.var_1d = pred[kVarOutput];
    if (!validate(f).empty()) {
      throw NumericError("non-finite forecast for " + p.ticker + " " + p.as_of.iso());
    }
    return f;
  }

  RiskForecast predict(const TrainingSample& s, const NewsMemory& memory) const { return predict(prepare(s, memory)); }

  // ---- loss -------------------------------------------------------------

  MultitaskWeights loss_weights() const { return {cfg_.lambda_vol, cfg_.lambda_var}; }

  double loss(const PreparedSample& p) const {
    const auto pred = to_predictions(head(assemble_features(p)), p.scale);
    return multitask_loss(pred, require_labels(p), loss_weights()).value;
  }

  /// Adds weight * d(loss)/d(params) to every gradient and returns the unweighted loss.
  double accumulate_gradient(const PreparedSample& p, double weight) {
    Tape tape;
    const auto x = assemble_features(p, &tape);
    const auto out = head(x, &tape);
    const auto pred = to_predictions(out, p.scale);
    const auto l = multitask_loss(pred, require_labels(p), loss_weights());
    nn::Vector dout(kHeadOutputs);
    for (std::size_t h = 0; h < kNumHorizons; ++h) dout[h] = weight * l.grad[h];
    dout[kVarOutput] = weight * l.grad[kVarOutput] * p.scale;
    const auto dh = output_.backward(tape.output, dout);
    auto dx = hidden_.backward(tape.hidden, dh);
    nn::outer_acc(linear_.grad, dout, tape.hidden.input);
    nn::gemv_t_acc(linear_.value, dout, dx);
    for (std::size_t i = 0; i < dx.size(); ++i) {
      if (!standardized_[i]) continue;
      const double z = (x[i] - input_shift_[i]) * input_scale_[i];
      dx[i] = std::abs(z) > kInputClip ? 0.0 : dx[i] * input_scale_[i];
    }
    const auto dx_span = std::span<const double>(dx);
    encode_timeseries_backward(cell_, tape.cell, dx_span.first(timeseries_dim()));
    if (p.has_earnings) earnings_.backward(tape.earnings, dx_span.subspan(timeseries_dim(), cfg_.fused_dim));
    return l.value;
  }

  // ---- training ---------------------------------------------------------

  /// Full-batch Adam on the time-decay weighted multi-task loss. Parameters
  /// are re-initialized from `opts.seed`; the output bias starts at the
  /// weighted label means so training begins from a calibrated constant.
  TrainResult train(std::span<const TrainingSample> samples, const NewsMemory& memory, const TrainOptions& opts) {
    std::vector<PreparedSample> prepared;
    for (const auto& s : samples) {
      if (!s.labels) continue;
      if (opts.window_start && s.as_of < *opts.window_start) continue;
      prepared.push_back(prepare(s, memory));
    }
    return train_prepared(std::move(prepared), opts);
  }

  TrainResult train_prepared(std::vector<PreparedSample> prepared, const TrainOptions& opts) {
    if (prepared.size() < kMinTrainingSamples) {
      throw InputError("training needs at least " + std::to_string(kMinTrainingSamples) + " labelled samples, got " +
                       std::to_string(prepared.size()));
    }
    std::stable_sort(prepared.begin(), prepared.end(),
                     [](const PreparedSample& a, const PreparedSample& b) { return a.as_of < b.as_of; });
    TrainResult result;
    result.samples_used = prepared.size();
    result.loss_trace = fit_epochs(prepared, opts.epochs, opts.seed);
    return result;
  }

  /// Builds daily samples and news memory for `ticker` from `data`, applies
  /// the dynamic window to the ticker's return history, and trains.
  TrainResult fit(const Dataset& data, const std::string& ticker, std::size_t epochs, std::uint64_t seed) {
    const auto& prices = data.series(ticker);
    const auto set = build_samples(prices, data.news, data.events, kHorizons, Anchor::kDaily);
    const NewsMemory memory = memory_for(data, ticker);
    const ReturnSeries rets = compute_returns(prices);
    const std::size_t w = dynamic_window(rets.returns, cfg_.window);
    TrainOptions opts{epochs, seed, std::nullopt};
    if (w < rets.size()) opts.window_start = rets.dates[rets.size() - w];
    auto result = train(set.samples, memory, opts);
    result.window_days = std::min(w, rets.size());
    return result;
  }

  /// News of `ticker` with known outcomes.
  static NewsMemory memory_for(const Dataset& data, const std::string& ticker) {
    std::vector<NewsItem> items;
    for (const auto& n : data.news) {
      if (n.ticker == ticker && n.outcome) items.push_back(n);
    }
    std::sort(items.begin(), items.end(), detail::news_less);
    return NewsMemory(items);
  }

  // ---- persistence ------------------------------------------------------

  nlohmann::json to_json() {
    nlohmann::json cfg;
    risklabs::to_json(cfg, cfg_);
    return {{"schema_version", kModelSchemaVersion},
            {"config", cfg},
            {"input_norm", {{"shift", input_shift_}, {"scale", input_scale_}}},
            {"params", nn::params_to_json(parameters())}};
  }

  static RiskLabsModel from_json(const nlohmann::json& j, std::shared_ptr<analyzer::Analyzer> analysis = nullptr) {
    try {
      const int version = j.at("schema_version").get<int>();
      if (version != kModelSchemaVersion) {
        throw InputError("unsupported model schema_version " + std::to_string(version));
      }
      ModelConfig cfg;
      risklabs::from_json(j.at("config"), cfg);
      RiskLabsModel m(cfg, std::move(analysis));
      nn::params_from_json(j.at("params"), m.parameters());
      const auto& norm = j.at("input_norm");
      auto shift = norm.at("shift").get<nn::Vector>();
      auto scale = norm.at("scale").get<nn::Vector>();
      if (shift.size() != m.feature_dim() || scale.size() != m.feature_dim()) {
        throw InputError("model file: input_norm length does not match the feature dimension");
      }
      m.input_shift_ = std::move(shift);
      m.input_scale_ = std::move(scale);
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed model file: ") + e.what());
    }
  }

  void save(const std::filesystem::path& path) { write_text_file(path, to_json().dump(1) + "\n"); }

  static RiskLabsModel load(const std::filesystem::path& path,
                            std::shared_ptr<analyzer::Analyzer> analysis = nullptr) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    return from_json(j, std::move(analysis));
  }

 private:
  static const Labels& require_labels(const PreparedSample& p) {
    if (!p.labels) throw InputError("sample " + p.ticker + " " + p.as_of.iso() + " has no labels");
    return *p.labels;
  }

  const analyzer::AnalyzerOutput& analysis_of(const EarningsEvent& e) const {
    const std::string text = e.transcript();
    auto it = analysis_cache_.find(text);
    if (it == analysis_cache_.end()) it = analysis_cache_.emplace(text, analyzer_->analyze_transcript(text)).first;
    return it->second;
  }

  /// Freshness-weighted sums over the window's headlines of
  /// [ln expected vol change, expected next return / s, support / k],
  /// divided by the largest freshness sum one headline a day could reach.
  nn::Vector reaction_block(const TrainingSample& s, const NewsMemory& memory, double scale) const {
    std::vector<const NewsItem*> items;
    for (const auto& n : s.news_window) items.push_back(&n);
    std::sort(items.begin(), items.end(), [](const NewsItem* a, const NewsItem* b) { return detail::news_less(*a, *b); });
    const double g = cfg_.reaction.gamma_fresh;
    const double norm = g > 0.0 ? 1.0 / (1.0 - std::exp(-g)) : static_cast<double>(kLookback);
    nn::Vector out(kReactionFeatures, 0.0);
    for (const auto* n : items) {
      const double f = news_freshness(n->timestamp, s.as_of, g);
      const auto r = news_reaction(*n, memory, cfg_.reaction);
      if (r.support_count > 0) {
        out[0] += f * std::log(std::max(r.expected_vol_change, kVolFloor));
        out[1] += f * r.expected_next_return / scale;
      }
      out[2] += f * static_cast<double>(r.support_count) / static_cast<double>(cfg_.reaction.k);
    }
    for (auto& v : out) v /= norm;
    return out;
  }

  /// Re-initializes from `seed` and runs full-batch Adam for `epochs` epochs,
  /// returning the weighted loss trace.
  std::vector<double> fit_epochs(std::span<const PreparedSample> samples, std::size_t epochs, std::uint64_t seed) {
    std::vector<Date> dates;
    for (const auto& p : samples) dates.push_back(p.as_of);
    const Date newest = *std::max_element(dates.begin(), dates.end());
    const auto weights = sample_weights(dates, newest, cfg_.decay);

    init(seed);
    fit_input_norm(samples);
    init_output_bias(samples, weights);

    auto params = parameters();
    nn::AdamOptimizer opt(params, nn::AdamConfig{cfg_.lr});
    std::vector<double> trace;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      opt.zero_grad();
      double total = 0.0;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const double l = accumulate_gradient(samples[i], weights[i]);
        if (!std::isfinite(l)) {
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + " on sample " + samples[i].ticker +
                             " " + samples[i].as_of.iso());
        }
        total += weights[i] * l;
      }
      if (cfg_.weight_decay > 0.0) total += apply_weight_decay(params);
      for (const auto* p : params) {
        if (!p->grad.all_finite()) {
          throw NumericError("non-finite gradient in '" + p->name + "' at epoch " + std::to_string(epoch));
        }
      }
      trace.push_back(total);
      opt.step();
    }
    return trace;
  }

  static bool is_bias(const nn::Param& p) { return p.name.ends_with(".bias"); }

  /// Adds the L2 gradient to every non-bias parameter and returns the penalty.
  double apply_weight_decay(const std::vector<nn::Param*>& params) const {
    double penalty = 0.0;
    for (auto* p : params) {
      if (is_bias(*p)) continue;
      auto v = p->value.flat();
      auto g = p->grad.flat();
      for (std::size_t i = 0; i < v.size(); ++i) {
        penalty += 0.5 * cfg_.weight_decay * v[i] * v[i];
        g[i] += cfg_.weight_decay * v[i];
      }
    }
    return penalty;
  }

  void init_output_bias(std::span<const PreparedSample> prepared, const std::vector<double>& weights) {
    auto& b = output_.bias.value;
    for (std::size_t h = 0; h < kNumHorizons; ++h) {
      double mean = 0.0;
      for (std::size_t i = 0; i < prepared.size(); ++i) {
        mean += weights[i] * (prepared[i].labels->log_vol[h] - std::log(prepared[i].scale));
      }
      b[h] = mean;
    }
    std::vector<double> z;
    for (const auto& p : prepared) z.push_back(p.labels->next_return / p.scale);
    b[kVarOutput] = historical_var(z, kVarAlpha);
  }

  ModelConfig cfg_;
  std::shared_ptr<analyzer::Analyzer> analyzer_;
  nn::RecurrentCell cell_;
  EarningsEncoder earnings_;
  nn::DenseLayer hidden_;
  nn::DenseLayer output_;
  nn::Param linear_;  // linear path from the head input straight to the outputs
  nn::Vector input_shift_;
  nn::Vector input_scale_;
  std::vector<bool> standardized_;
  mutable std::map<std::string, analyzer::AnalyzerOutput> analysis_cache_;
};

}  // namespace risklabs
