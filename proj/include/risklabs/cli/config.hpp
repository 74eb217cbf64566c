#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "risklabs/core/errors.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/ingest/io.hpp"
#include "risklabs/ingest/synth.hpp"
#include "risklabs/model/config.hpp"

namespace risklabs::cli {

/// Everything a command can be configured with. Set from a flat `key = value`
/// file and/or `--key value` flags; flags win.
struct RunConfig {
  std::filesystem::path data_dir;  // holds prices.csv, news.jsonl, events.jsonl
  std::filesystem::path prices, news, events;
  std::filesystem::path out_dir = ".";
  std::filesystem::path in_dir;  // report input, defaults to out_dir
  std::string ticker;
  std::optional<std::uint64_t> seed;

  SynthConfig synth;
  std::optional<std::size_t> shift_day;
  double shift_vol = 1.0;

  ModelConfig model;
  std::string analyzer = "stub";

  std::vector<std::string> methods{"historical", "garch", "risklabs"};
  std::optional<Date> split;
  std::size_t historical_window = 250;
  std::size_t garch_refit = 250;

  std::filesystem::path prices_path() const { return !prices.empty() ? prices : data_dir / "prices.csv"; }
  std::filesystem::path news_path() const { return !news.empty() ? news : data_dir / "news.jsonl"; }
  std::filesystem::path events_path() const { return !events.empty() ? events : data_dir / "events.jsonl"; }
};

namespace detail {

inline double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  if (v == "inf") return std::numeric_limits<double>::infinity();
  if (!risklabs::detail::parse_double(v, out)) throw InputError("config '" + key + "': not a number: '" + v + "'");
  return out;
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw InputError("config '" + key + "': not a non-negative integer: '" + v + "'");
  }
  return out;
}

inline std::size_t to_size(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(to_uint(key, v));
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("config '" + key + "': expected true or false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t{risklabs::detail::trim(item)};
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace detail

struct KeySpec {
  const char* key;
  const char* help;
  std::function<void(RunConfig&, const std::string&)> set;
};

/// The recognized configuration keys.
inline const std::vector<KeySpec>& config_keys() {
  using namespace detail;
  static const std::vector<KeySpec> kKeys = {
      {"data", "directory with prices.csv, news.jsonl, events.jsonl", [](RunConfig& c, const std::string& v) { c.data_dir = v; }},
      {"prices", "prices CSV (date,ticker,close)", [](RunConfig& c, const std::string& v) { c.prices = v; }},
      {"news", "news JSON-lines", [](RunConfig& c, const std::string& v) { c.news = v; }},
      {"events", "earnings events JSON-lines", [](RunConfig& c, const std::string& v) { c.events = v; }},
      {"out", "output directory", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
      {"in", "report input directory (defaults to --out)", [](RunConfig& c, const std::string& v) { c.in_dir = v; }},
      {"ticker", "ticker to fit or backtest", [](RunConfig& c, const std::string& v) { c.ticker = v; c.synth.ticker = v; }},
      {"seed", "random seed", [](RunConfig& c, const std::string& v) { c.seed = to_uint("seed", v); }},

      {"days", "synthetic price days", [](RunConfig& c, const std::string& v) { c.synth.n_days = to_size("days", v); }},
      {"start", "first synthetic date", [](RunConfig& c, const std::string& v) { c.synth.start = Date::parse(v); }},
      {"garch_omega", "synthetic GARCH omega", [](RunConfig& c, const std::string& v) { c.synth.garch.omega = to_double("garch_omega", v); }},
      {"garch_alpha", "synthetic GARCH alpha", [](RunConfig& c, const std::string& v) { c.synth.garch.alpha = to_double("garch_alpha", v); }},
      {"garch_beta", "synthetic GARCH beta", [](RunConfig& c, const std::string& v) { c.synth.garch.beta = to_double("garch_beta", v); }},
      {"news_rate", "headline probability per day", [](RunConfig& c, const std::string& v) { c.synth.news_rate = to_double("news_rate", v); }},
      {"shock_factor", "variance multiplier of bad news", [](RunConfig& c, const std::string& v) { c.synth.shock_factor = to_double("shock_factor", v); }},
      {"event_interval", "trading days between earnings calls (0 = none)", [](RunConfig& c, const std::string& v) { c.synth.event_interval = to_size("event_interval", v); }},
      {"shift_day", "regime shift day", [](RunConfig& c, const std::string& v) { c.shift_day = to_size("shift_day", v); }},
      {"shift_vol", "volatility multiplier after the shift", [](RunConfig& c, const std::string& v) { c.shift_vol = to_double("shift_vol", v); }},

      {"dim_text", "text embedding dim", [](RunConfig& c, const std::string& v) { c.model.dims.text = c.synth.dims.text = to_size("dim_text", v); }},
      {"dim_audio", "audio feature dim", [](RunConfig& c, const std::string& v) { c.model.dims.audio = c.synth.dims.audio = to_size("dim_audio", v); }},
      {"dim_news", "news embedding dim", [](RunConfig& c, const std::string& v) { c.model.dims.news = c.synth.dims.news = to_size("dim_news", v); }},
      {"recurrent_hidden", "recurrent hidden size", [](RunConfig& c, const std::string& v) { c.model.recurrent_hidden = to_size("recurrent_hidden", v); }},
      {"head_hidden", "head hidden size", [](RunConfig& c, const std::string& v) { c.model.head_hidden = to_size("head_hidden", v); }},
      {"head_activation", "identity, tanh or relu", [](RunConfig& c, const std::string& v) { c.model.head_activation = nn::parse_activation(v); }},
      {"fused_dim", "fused earnings dim", [](RunConfig& c, const std::string& v) { c.model.fused_dim = to_size("fused_dim", v); }},
      {"attention_heads", "attention heads", [](RunConfig& c, const std::string& v) { c.model.attention_heads = to_size("attention_heads", v); }},
      {"attention_key_dim", "attention key dim", [](RunConfig& c, const std::string& v) { c.model.attention_key_dim = to_size("attention_key_dim", v); }},
      {"attention_value_dim", "attention value dim", [](RunConfig& c, const std::string& v) { c.model.attention_value_dim = to_size("attention_value_dim", v); }},
      {"lambda_3", "loss weight, 3-day vol", [](RunConfig& c, const std::string& v) { c.model.lambda_vol[0] = to_double("lambda_3", v); }},
      {"lambda_7", "loss weight, 7-day vol", [](RunConfig& c, const std::string& v) { c.model.lambda_vol[1] = to_double("lambda_7", v); }},
      {"lambda_15", "loss weight, 15-day vol", [](RunConfig& c, const std::string& v) { c.model.lambda_vol[2] = to_double("lambda_15", v); }},
      {"lambda_30", "loss weight, 30-day vol", [](RunConfig& c, const std::string& v) { c.model.lambda_vol[3] = to_double("lambda_30", v); }},
      {"lambda_var", "loss weight, VaR", [](RunConfig& c, const std::string& v) { c.model.lambda_var = to_double("lambda_var", v); }},
      {"gamma_sample", "sample time decay (1/day)", [](RunConfig& c, const std::string& v) { c.model.decay.gamma_sample = to_double("gamma_sample", v); }},
      {"w_min", "shortest training window (days)", [](RunConfig& c, const std::string& v) { c.model.window.w_min = to_size("w_min", v); }},
      {"w_max", "longest training window (days)", [](RunConfig& c, const std::string& v) { c.model.window.w_max = to_size("w_max", v); }},
      {"theta", "regime probe threshold", [](RunConfig& c, const std::string& v) { c.model.window.theta = to_double("theta", v); }},
      {"reaction_k", "news neighbours", [](RunConfig& c, const std::string& v) { c.model.reaction.k = to_size("reaction_k", v); }},
      {"gamma_fresh", "news freshness decay (1/day)", [](RunConfig& c, const std::string& v) { c.model.reaction.gamma_fresh = to_double("gamma_fresh", v); }},
      {"min_similarity", "news similarity threshold", [](RunConfig& c, const std::string& v) { c.model.reaction.min_similarity = to_double("min_similarity", v); }},
      {"epochs", "training epochs", [](RunConfig& c, const std::string& v) { c.model.epochs = to_size("epochs", v); }},
      {"lr", "learning rate", [](RunConfig& c, const std::string& v) { c.model.lr = to_double("lr", v); }},
      {"weight_decay", "L2 penalty on non-bias weights",
       [](RunConfig& c, const std::string& v) { c.model.weight_decay = to_double("weight_decay", v); }},
      {"use_earnings", "feed earnings calls to the model", [](RunConfig& c, const std::string& v) { c.model.use_earnings = to_bool("use_earnings", v); }},
      {"use_news", "feed news reactions to the model", [](RunConfig& c, const std::string& v) { c.model.use_news = to_bool("use_news", v); }},
      {"analyzer", "stub or remote", [](RunConfig& c, const std::string& v) {
         if (v != "stub" && v != "remote") throw InputError("analyzer must be stub or remote, got '" + v + "'");
         c.analyzer = v;
       }},

      {"methods", "comma list of historical, garch, risklabs", [](RunConfig& c, const std::string& v) {
         c.methods = split_list(v);
         for (const auto& m : c.methods) {
           if (m != "historical" && m != "garch" && m != "risklabs") throw InputError("unknown method '" + m + "'");
         }
         if (c.methods.empty()) throw InputError("methods list is empty");
       }},
      {"split", "first evaluation date", [](RunConfig& c, const std::string& v) { c.split = Date::parse(v); }},
      {"historical_window", "historical method window (returns)", [](RunConfig& c, const std::string& v) { c.historical_window = to_size("historical_window", v); }},
      {"garch_refit", "GARCH refit interval (days)", [](RunConfig& c, const std::string& v) { c.garch_refit = to_size("garch_refit", v); }},
  };
  return kKeys;
}

inline void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& k : config_keys()) {
    if (key == k.key) {
      k.set(cfg, value);
      return;
    }
  }
  throw InputError("unknown config key '" + key + "'");
}

/// Parses `key = value` lines; `#` starts a comment line.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text,
                                                                          const std::string& source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = risklabs::detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key = value");
    const std::string key{risklabs::detail::trim(t.substr(0, eq))};
    const std::string value{risklabs::detail::trim(t.substr(eq + 1))};
    if (key.empty()) throw ParseError(source, line_no, "empty key");
    bool known = false;
    for (const auto& k : config_keys()) known = known || key == k.key;
    if (!known) throw ParseError(source, line_no, "unknown config key '" + key + "'");
    out.emplace_back(key, value);
  }
  return out;
}

inline void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  const std::string source = path.string();
  for (const auto& [k, v] : parse_config_text(read_text_file(path), source)) {
    try {
      set_key(cfg, k, v);
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw InputError(source + ": " + e.what());
    }
  }
}

}  // namespace risklabs::cli
