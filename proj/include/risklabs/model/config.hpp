#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "risklabs/core/types.hpp"
#include "risklabs/core/validate.hpp"
#include "risklabs/encoders/news.hpp"
#include "risklabs/nn/dense.hpp"

namespace risklabs {

struct DecayConfig {
  double gamma_sample = std::numbers::ln2 / 365.0;  // 1/day; one-year half-life
};

/// Training history length adapts to a volatility probe: the ratio of the
/// last 30 days' return std to the 90 days before. Above `theta` the window
/// drops to w_min, otherwise it grows by 30 days up to w_max.
struct WindowConfig {
  std::size_t w_min = 250;  // trading days
  std::size_t w_max = 1000;
  double theta = 1.5;
};

struct ModelConfig {
  Dims dims;
  std::size_t recurrent_hidden = 8;
  std::size_t head_hidden = 32;
  nn::Activation head_activation = nn::Activation::kTanh;
  std::size_t fused_dim = 8;
  std::size_t attention_heads = 2;
  std::size_t attention_key_dim = 4;
  std::size_t attention_value_dim = 4;

  std::array<double, kNumHorizons> lambda_vol{1.0, 1.0, 1.0, 1.0};
  double lambda_var = 1.0;
  DecayConfig decay;
  WindowConfig window;
  ReactionConfig reaction;

  std::size_t epochs = 500;
  double lr = 0.01;
  double weight_decay = 0.1;  // L2 penalty 0.5 * wd * |W|^2 on non-bias parameters

  // Ablation switches: a disabled source is treated as absent in every sample.
  bool use_earnings = true;
  bool use_news = true;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

inline Violations validate(const DecayConfig& d) {
  Violations out;
  if (!std::isfinite(d.gamma_sample) || d.gamma_sample < 0.0) out.push_back({"gamma_sample", ">= 0 and finite"});
  return out;
}

inline Violations validate(const WindowConfig& w) {
  Violations out;
  if (w.w_min < 1) out.push_back({"w_min", ">= 1"});
  if (w.w_min > w.w_max) out.push_back({"w_min", "w_min <= w_max"});
  if (!(w.theta > 1.0)) out.push_back({"theta", "theta > 1"});
  return out;
}

inline Violations validate(const ModelConfig& c) {
  Violations out;
  auto positive = [&](std::size_t v, const char* name) {
    if (v == 0) out.push_back({name, "> 0"});
  };
  positive(c.dims.text, "dims.text");
  positive(c.dims.audio, "dims.audio");
  positive(c.dims.news, "dims.news");
  positive(c.dims.summary, "dims.summary");
  positive(c.recurrent_hidden, "recurrent_hidden");
  positive(c.head_hidden, "head_hidden");
  positive(c.fused_dim, "fused_dim");
  positive(c.attention_heads, "attention_heads");
  positive(c.attention_key_dim, "attention_key_dim");
  positive(c.attention_value_dim, "attention_value_dim");
  positive(c.epochs, "epochs");
  double total = c.lambda_var;
  for (std::size_t h = 0; h < kNumHorizons; ++h) {
    if (!(c.lambda_vol[h] >= 0.0) || !std::isfinite(c.lambda_vol[h])) {
      out.push_back({"lambda_vol[" + std::to_string(h) + "]", ">= 0"});
    }
    total += c.lambda_vol[h];
  }
  if (!(c.lambda_var >= 0.0) || !std::isfinite(c.lambda_var)) out.push_back({"lambda_var", ">= 0"});
  if (!(total > 0.0)) out.push_back({"lambda", "not all zero"});
  if (!(c.lr > 0.0) || !std::isfinite(c.lr)) out.push_back({"lr", "> 0"});
  if (!(c.weight_decay >= 0.0) || !std::isfinite(c.weight_decay)) out.push_back({"weight_decay", ">= 0"});
  for (auto& v : validate(c.decay)) out.push_back({"decay." + v.path, v.rule});
  for (auto& v : validate(c.window)) out.push_back({"window." + v.path, v.rule});
  for (auto& v : validate(c.reaction)) out.push_back({"reaction." + v.path, v.rule});
  return out;
}

inline void to_json(nlohmann::json& j, const ModelConfig& c) {
  // theta may be +inf, which JSON cannot hold; it is written as null.
  nlohmann::json theta = std::isfinite(c.window.theta) ? nlohmann::json(c.window.theta) : nlohmann::json();
  j = {{"dims", {{"text", c.dims.text}, {"audio", c.dims.audio}, {"news", c.dims.news}, {"summary", c.dims.summary}}},
       {"recurrent_hidden", c.recurrent_hidden},
       {"head_hidden", c.head_hidden},
       {"head_activation", nn::activation_name(c.head_activation)},
       {"fused_dim", c.fused_dim},
       {"attention", {{"heads", c.attention_heads}, {"key_dim", c.attention_key_dim}, {"value_dim", c.attention_value_dim}}},
       {"lambda", {{"vol", c.lambda_vol}, {"var", c.lambda_var}}},
       {"decay", {{"gamma_sample", c.decay.gamma_sample}}},
       {"window", {{"w_min", c.window.w_min}, {"w_max", c.window.w_max}, {"theta", theta}}},
       {"reaction", {{"k", c.reaction.k}, {"gamma_fresh", c.reaction.gamma_fresh}, {"min_similarity", c.reaction.min_similarity}}},
       {"epochs", c.epochs},
       {"lr", c.lr},
       {"weight_decay", c.weight_decay},
       {"use_earnings", c.use_earnings},
       {"use_news", c.use_news}};
}

inline void from_json(const nlohmann::json& j, ModelConfig& c) {
  const auto& d = j.at("dims");
  c.dims = {d.at("text").get<std::size_t>(), d.at("audio").get<std::size_t>(), d.at("news").get<std::size_t>(),
            d.at("summary").get<std::size_t>()};
  j.at("recurrent_hidden").get_to(c.recurrent_hidden);
  j.at("head_hidden").get_to(c.head_hidden);
  c.head_activation = nn::parse_activation(j.at("head_activation").get<std::string>());
  j.at("fused_dim").get_to(c.fused_dim);
  const auto& a = j.at("attention");
  a.at("heads").get_to(c.attention_heads);
  a.at("key_dim").get_to(c.attention_key_dim);
  a.at("value_dim").get_to(c.attention_value_dim);
  j.at("lambda").at("vol").get_to(c.lambda_vol);
  j.at("lambda").at("var").get_to(c.lambda_var);
  j.at("decay").at("gamma_sample").get_to(c.decay.gamma_sample);
  const auto& w = j.at("window");
  w.at("w_min").get_to(c.window.w_min);
  w.at("w_max").get_to(c.window.w_max);
  c.window.theta = w.at("theta").is_null() ? std::numeric_limits<double>::infinity() : w.at("theta").get<double>();
  const auto& r = j.at("reaction");
  r.at("k").get_to(c.reaction.k);
  r.at("gamma_fresh").get_to(c.reaction.gamma_fresh);
  r.at("min_similarity").get_to(c.reaction.min_similarity);
  j.at("epochs").get_to(c.epochs);
  j.at("lr").get_to(c.lr);
  j.at("weight_decay").get_to(c.weight_decay);
  j.at("use_earnings").get_to(c.use_earnings);
  j.at("use_news").get_to(c.use_news);
}

}  // namespace risklabs
