#pragma once

// JSON mappings for the domain types. News and event records use the
// on-disk JSON-lines field names.

#include <json.hpp>

#include "risklabs/core/types.hpp"

namespace risklabs {

using json = nlohmann::json;

inline void to_json(json& j, const Date& d) { j = d.iso(); }
inline void from_json(const json& j, Date& d) { d = Date::parse(j.get<std::string>()); }

inline void to_json(json& j, const Dims& d) {
  j = json{{"text", d.text}, {"audio", d.audio}, {"news", d.news}, {"summary", d.summary}};
}
inline void from_json(const json& j, Dims& d) {
  j.at("text").get_to(d.text);
  j.at("audio").get_to(d.audio);
  j.at("news").get_to(d.news);
  j.at("summary").get_to(d.summary);
}

inline void to_json(json& j, const PriceSeries& s) {
  j = json{{"ticker", s.ticker}, {"dates", s.dates}, {"closes", s.closes}};
}
inline void from_json(const json& j, PriceSeries& s) {
  j.at("ticker").get_to(s.ticker);
  j.at("dates").get_to(s.dates);
  j.at("closes").get_to(s.closes);
}

inline void to_json(json& j, const ReturnSeries& s) {
  j = json{{"ticker", s.ticker}, {"dates", s.dates}, {"returns", s.returns}};
}
inline void from_json(const json& j, ReturnSeries& s) {
  j.at("ticker").get_to(s.ticker);
  j.at("dates").get_to(s.dates);
  j.at("returns").get_to(s.returns);
}

inline void to_json(json& j, const Segment& s) {
  j = json{{"text", s.text}, {"text_embedding", s.text_embedding},
           {"audio_features", s.audio_features}};
}
inline void from_json(const json& j, Segment& s) {
  j.at("text").get_to(s.text);
  j.at("text_embedding").get_to(s.text_embedding);
  j.at("audio_features").get_to(s.audio_features);
}

inline void to_json(json& j, const EarningsEvent& e) {
  j = json{{"ticker", e.ticker}, {"event_date", e.event_date}, {"segments", e.segments}};
}
inline void from_json(const json& j, EarningsEvent& e) {
  j.at("ticker").get_to(e.ticker);
  j.at("event_date").get_to(e.event_date);
  j.at("segments").get_to(e.segments);
}

inline void to_json(json& j, const NewsOutcome& o) {
  j = json{{"next_day_return", o.next_day_return}, {"vol_change", o.vol_change}};
}
inline void from_json(const json& j, NewsOutcome& o) {
  j.at("next_day_return").get_to(o.next_day_return);
  j.at("vol_change").get_to(o.vol_change);
}

inline void to_json(json& j, const NewsItem& n) {
  j = json{{"ts", n.timestamp}, {"ticker", n.ticker}, {"headline", n.headline},
           {"embedding", n.embedding}};
  if (n.outcome) j["outcome"] = *n.outcome;
}
inline void from_json(const json& j, NewsItem& n) {
  j.at("ts").get_to(n.timestamp);
  j.at("ticker").get_to(n.ticker);
  j.at("headline").get_to(n.headline);
  j.at("embedding").get_to(n.embedding);
  if (auto it = j.find("outcome"); it != j.end() && !it->is_null()) {
    n.outcome = it->get<NewsOutcome>();
  } else {
    n.outcome.reset();
  }
}

inline void to_json(json& j, const RiskForecast& f) {
  json vol = json::object();
  for (std::size_t i = 0; i < kNumHorizons; ++i) vol[std::to_string(kHorizons[i])] = f.vol[i];
  j = json{{"as_of", f.as_of}, {"vol", vol}, {"var_1d", f.var_1d}};
}
inline void from_json(const json& j, RiskForecast& f) {
  j.at("as_of").get_to(f.as_of);
  const json& vol = j.at("vol");
  if (vol.size() != kNumHorizons) throw InputError("forecast vol must have exactly 4 horizons");
  for (std::size_t i = 0; i < kNumHorizons; ++i) {
    vol.at(std::to_string(kHorizons[i])).get_to(f.vol[i]);
  }
  j.at("var_1d").get_to(f.var_1d);
}

inline void to_json(json& j, const Labels& l) {
  j = json{{"log_vol", l.log_vol}, {"next_return", l.next_return}};
}
inline void from_json(const json& j, Labels& l) {
  j.at("log_vol").get_to(l.log_vol);
  j.at("next_return").get_to(l.next_return);
}

inline void to_json(json& j, const PresenceFlags& p) {
  j = json{{"prices", p.prices}, {"earnings", p.earnings}, {"news", p.news}};
}
inline void from_json(const json& j, PresenceFlags& p) {
  j.at("prices").get_to(p.prices);
  j.at("earnings").get_to(p.earnings);
  j.at("news").get_to(p.news);
}

inline void to_json(json& j, const TrainingSample& s) {
  j = json{{"ticker", s.ticker},
           {"as_of", s.as_of},
           {"lookback_returns", s.lookback_returns},
           {"news_window", s.news_window},
           {"presence", s.presence}};
  j["earnings"] = s.earnings ? json(*s.earnings) : json(nullptr);
  j["labels"] = s.labels ? json(*s.labels) : json(nullptr);
}
inline void from_json(const json& j, TrainingSample& s) {
  j.at("ticker").get_to(s.ticker);
  j.at("as_of").get_to(s.as_of);
  j.at("lookback_returns").get_to(s.lookback_returns);
  j.at("news_window").get_to(s.news_window);
  j.at("presence").get_to(s.presence);
  const json& e = j.at("earnings");
  s.earnings = e.is_null() ? std::nullopt : std::optional<EarningsEvent>(e.get<EarningsEvent>());
  const json& l = j.at("labels");
  s.labels = l.is_null() ? std::nullopt : std::optional<Labels>(l.get<Labels>());
}

}  // namespace risklabs
