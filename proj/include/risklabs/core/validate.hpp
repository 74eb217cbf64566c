#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "risklabs/core/errors.hpp"
#include "risklabs/core/types.hpp"

namespace risklabs {

/// One broken invariant: where it is and which rule it breaks.
struct Violation {
  std::string path;  // e.g. "closes[3]"
  std::string rule;  // e.g. "closes[i] > 0"

  std::string str() const { return path + ": " + rule; }
  friend bool operator==(const Violation&, const Violation&) = default;
};

using Violations = std::vector<Violation>;

namespace detail {

inline std::string indexed(const std::string& name, std::size_t i) {
  return name + "[" + std::to_string(i) + "]";
}

inline void check_finite(const std::vector<double>& v, const std::string& name, Violations& out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) out.push_back({indexed(name, i), name + "[i] finite"});
  }
}

template <class T>
void check_increasing(const std::vector<T>& v, const std::string& name, Violations& out) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) out.push_back({indexed(name, i), name + " strictly increasing"});
  }
}

}  // namespace detail

inline Violations validate(const PriceSeries& s) {
  Violations out;
  if (s.dates.size() != s.closes.size()) out.push_back({"closes", "closes.len == dates.len"});
  detail::check_increasing(s.dates, "dates", out);
  for (std::size_t i = 0; i < s.closes.size(); ++i) {
    if (!(s.closes[i] > 0.0) || !std::isfinite(s.closes[i])) {
      out.push_back({detail::indexed("closes", i), "closes[i] > 0"});
    }
  }
  return out;
}

inline Violations validate(const ReturnSeries& s) {
  Violations out;
  if (s.dates.size() != s.returns.size()) out.push_back({"returns", "returns.len == dates.len"});
  detail::check_increasing(s.dates, "dates", out);
  detail::check_finite(s.returns, "returns", out);
  return out;
}

/// Checks shared segment dimensions, and the configured ones when `dims` is given.
inline Violations validate(const EarningsEvent& e, std::optional<Dims> dims = std::nullopt) {
  Violations out;
  if (e.segments.empty()) {
    out.push_back({"segments", ">= 1 segment"});
    return out;
  }
  const std::size_t dt = dims ? dims->text : e.segments.front().text_embedding.size();
  const std::size_t da = dims ? dims->audio : e.segments.front().audio_features.size();
  for (std::size_t i = 0; i < e.segments.size(); ++i) {
    const auto& seg = e.segments[i];
    const std::string base = detail::indexed("segments", i);
    if (seg.text_embedding.size() != dt) {
      out.push_back({base + ".text_embedding", "D_t mismatch (expected " + std::to_string(dt) +
                                                   ", got " +
                                                   std::to_string(seg.text_embedding.size()) + ")"});
    }
    if (seg.audio_features.size() != da) {
      out.push_back({base + ".audio_features", "D_a mismatch (expected " + std::to_string(da) +
                                                   ", got " +
                                                   std::to_string(seg.audio_features.size()) + ")"});
    }
    detail::check_finite(seg.text_embedding, base + ".text_embedding", out);
    detail::check_finite(seg.audio_features, base + ".audio_features", out);
  }
  return out;
}

inline Violations validate(const NewsItem& n, std::optional<Dims> dims = std::nullopt) {
  Violations out;
  if (dims && n.embedding.size() != dims->news) {
    out.push_back({"embedding", "D_n mismatch (expected " + std::to_string(dims->news) + ", got " +
                                    std::to_string(n.embedding.size()) + ")"});
  }
  if (n.embedding.empty()) out.push_back({"embedding", "nonempty embedding"});
  detail::check_finite(n.embedding, "embedding", out);
  if (n.outcome) {
    if (!std::isfinite(n.outcome->next_day_return)) {
      out.push_back({"outcome.next_day_return", "finite"});
    }
    if (!std::isfinite(n.outcome->vol_change)) out.push_back({"outcome.vol_change", "finite"});
  }
  return out;
}

inline Violations validate(const RiskForecast& f) {
  Violations out;
  for (std::size_t i = 0; i < kNumHorizons; ++i) {
    if (!std::isfinite(f.vol[i])) {
      out.push_back({"vol[" + std::to_string(kHorizons[i]) + "]", "finite"});
    }
  }
  if (!std::isfinite(f.var_1d)) out.push_back({"var_1d", "finite"});
  return out;
}

inline Violations validate(const TrainingSample& s) {
  Violations out;
  if (s.lookback_returns.size() != kLookback) {
    out.push_back({"lookback_returns", "lookback_returns.len == " + std::to_string(kLookback)});
  }
  detail::check_finite(s.lookback_returns, "lookback_returns", out);
  if (s.earnings) {
    for (auto& v : validate(*s.earnings)) out.push_back({"earnings." + v.path, v.rule});
    if (s.earnings->event_date > s.as_of) out.push_back({"earnings.event_date", "<= as_of"});
  }
  for (std::size_t i = 0; i < s.news_window.size(); ++i) {
    if (s.news_window[i].timestamp > s.as_of) {
      out.push_back({detail::indexed("news_window", i) + ".timestamp", "<= as_of"});
    }
  }
  if (s.presence.earnings != s.earnings.has_value()) {
    out.push_back({"presence.earnings", "matches earnings"});
  }
  if (s.presence.news != !s.news_window.empty()) {
    out.push_back({"presence.news", "matches news_window"});
  }
  return out;
}

/// Throws InputError listing every violation of `value`, prefixed by `what`.
template <class T, class... Extra>
void require_valid(const T& value, const std::string& what, Extra&&... extra) {
  const Violations v = validate(value, std::forward<Extra>(extra)...);
  if (v.empty()) return;
  std::string msg = what + ":";
  for (const auto& x : v) msg += " " + x.path + " (" + x.rule + " violated);";
  throw InputError(msg);
}

}  // namespace risklabs
