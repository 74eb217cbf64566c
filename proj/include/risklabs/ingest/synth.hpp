#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "risklabs/classical/garch.hpp"
#include "risklabs/core/dataset.hpp"
#include "risklabs/core/errors.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/ingest/io.hpp"

namespace risklabs {

/// From `day` (a price index) on, stationary volatility is scaled by
/// vol_multiplier, i.e. omega by vol_multiplier^2.
struct RegimeShift {
  std::size_t day = 0;
  double vol_multiplier = 1.0;
};

struct SynthConfig {
  std::size_t n_days = 2000;                // price days
  GarchParams garch{5e-6, 0.05, 0.90};      // stationary daily vol 1%
  double news_rate = 0.5;                   // probability of a headline per day
  double shock_factor = 1.0;                // variance multiplier of bad news
  std::optional<RegimeShift> regime_shift;
  std::uint64_t seed = 0;

  std::string ticker = "SYN";
  Date start{2010, 1, 4};
  std::size_t event_interval = 63;  // trading days between earnings calls, 0 = none
  Dims dims;
};

inline Violations validate(const SynthConfig& c) {
  Violations out;
  if (c.n_days < 100) out.push_back({"n_days", "n_days >= 100"});
  if (!(c.shock_factor >= 1.0) || !std::isfinite(c.shock_factor)) {
    out.push_back({"shock_factor", "shock_factor >= 1"});
  }
  if (!(c.news_rate >= 0.0 && c.news_rate <= 1.0)) out.push_back({"news_rate", "0 <= news_rate <= 1"});
  for (auto& v : validate(c.garch)) out.push_back({"garch." + v.path, v.rule});
  if (c.regime_shift && !(c.regime_shift->vol_multiplier > 0.0)) {
    out.push_back({"regime_shift.vol_multiplier", "> 0"});
  }
  return out;
}

/// Headline tone clusters. Bad news multiplies the next day's conditional
/// variance by shock_factor, good news divides it, irrelevant news leaves it.
enum class NewsCluster { kGood = 0, kBad = 1, kIrrelevant = 2 };

struct SynthDataset {
  PriceSeries prices;
  std::vector<NewsItem> news;
  std::vector<NewsCluster> news_clusters;  // parallel to news
  std::vector<EarningsEvent> events;
  std::vector<double> variances;  // true conditional variance of each return

  Dataset dataset() const {
    Dataset d;
    d.prices.emplace(prices.ticker, prices);
    d.news = news;
    d.events = events;
    return d;
  }
};

namespace detail {

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

inline std::vector<Date> business_days(Date start, std::size_t n) {
  std::vector<Date> out;
  out.reserve(n);
  for (Date d = start; out.size() < n; d = d.plus_days(1)) {
    const unsigned wd = d.weekday();
    if (wd != 0 && wd != 6) out.push_back(d);
  }
  return out;
}

inline std::vector<double> unit_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  std::vector<double> v(dim);
  double norm = 0.0;
  for (auto& x : v) {
    x = n01(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

inline std::vector<double> jitter(const std::vector<double>& center, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  std::vector<double> v = center;
  for (auto& x : v) x += scale * n01(rng);
  return v;
}

inline const std::array<std::vector<std::string>, 3>& headline_phrases() {
  static const std::array<std::vector<std::string>, 3> kPhrases{{
      {"profits soar on record growth", "shares surge after strong earnings beat",
       "analysts upgrade outlook on robust demand", "revenue gains exceed expectations",
       "record quarter lifts margins"},
      {"fraud probe widens as losses mount", "shares plunge after earnings miss",
       "regulator opens investigation into accounting", "losses widen on weak demand",
       "downgrade follows profit warning"},
      {"company schedules annual meeting", "board names new director",
       "firm relocates headquarters office", "company updates website design",
       "management to attend industry conference"},
  }};
  return kPhrases;
}

inline const std::array<std::vector<std::string>, 2>& call_phrases() {
  static const std::array<std::vector<std::string>, 2> kPhrases{{
      {"we delivered record revenue and strong growth this quarter",
       "demand remains robust and margins improved",
       "we raise our outlook on solid momentum",
       "our expansion plans continue to exceed targets"},
      {"we saw weak demand and margins declined",
       "we cut guidance amid uncertainty and headwinds",
       "losses widened and we face litigation risk",
       "restructuring charges and impairment weighed on results"},
  }};
  return kPhrases;
}

inline double cluster_multiplier(NewsCluster c, double shock) {
  switch (c) {
    case NewsCluster::kBad: return shock;
    case NewsCluster::kGood: return 1.0 / shock;
    case NewsCluster::kIrrelevant: return 1.0;
  }
  return 1.0;
}

inline double omega_on(const SynthConfig& c, std::size_t day) {
  if (c.regime_shift && day >= c.regime_shift->day) {
    return c.garch.omega * c.regime_shift->vol_multiplier * c.regime_shift->vol_multiplier;
  }
  return c.garch.omega;
}

}  // namespace detail

/// Plain GARCH(1,1) returns from the same random stream synth_generate uses
/// for returns, started at the stationary variance.
inline std::vector<double> simulate_garch(const GarchParams& p, std::size_t n_returns, std::uint64_t seed) {
  require_valid(p, "garch params");
  auto rng = detail::stream(seed, 1);
  std::normal_distribution<double> n01;
  std::vector<double> r(n_returns);
  double var = p.long_run_variance();
  for (std::size_t t = 0; t < n_returns; ++t) {
    r[t] = std::sqrt(var) * n01(rng);
    var = p.omega + p.alpha * r[t] * r[t] + p.beta * var;
  }
  return r;
}

/// Synthetic prices, news and earnings calls with planted variance effects.
/// Returns, news and events draw from independent streams derived from the
/// seed, so the news effect can be switched off without changing the draws.
inline SynthDataset synth_generate(const SynthConfig& cfg) {
  require_valid(cfg, "synth config");
  auto ret_rng = detail::stream(cfg.seed, 1);
  auto news_rng = detail::stream(cfg.seed, 2);
  auto event_rng = detail::stream(cfg.seed, 3);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::array<std::vector<double>, 3> news_centers;
  for (auto& c : news_centers) c = detail::unit_vector(cfg.dims.news, news_rng);
  std::array<std::vector<double>, 2> text_centers, audio_centers;
  for (std::size_t k = 0; k < 2; ++k) {
    text_centers[k] = detail::unit_vector(cfg.dims.text, event_rng);
    audio_centers[k] = detail::jitter(std::vector<double>(cfg.dims.audio, 0.0), 1.0, event_rng);
  }

  SynthDataset out;
  out.prices.ticker = cfg.ticker;
  out.prices.dates = detail::business_days(cfg.start, cfg.n_days);
  out.prices.closes.resize(cfg.n_days);
  out.prices.closes[0] = 100.0;
  out.variances.resize(cfg.n_days - 1);
  std::vector<double> returns(cfg.n_days - 1);
  std::vector<std::size_t> news_day;

  const GarchParams& g = cfg.garch;
  double var = detail::omega_on(cfg, 1) / (1.0 - g.alpha - g.beta);
  const std::size_t first_event = 40;
  for (std::size_t t = 1; t < cfg.n_days; ++t) {
    const double r = std::sqrt(var) * n01(ret_rng);
    returns[t - 1] = r;
    out.variances[t - 1] = var;
    out.prices.closes[t] = out.prices.closes[t - 1] * std::exp(r);

    double multiplier = 1.0;
    if (u01(news_rng) < cfg.news_rate) {
      const auto cluster = static_cast<NewsCluster>(std::uniform_int_distribution<int>(0, 2)(news_rng));
      const auto& phrases = detail::headline_phrases()[static_cast<std::size_t>(cluster)];
      NewsItem item;
      item.timestamp = out.prices.dates[t];
      item.ticker = cfg.ticker;
      item.headline = phrases[std::uniform_int_distribution<std::size_t>(0, phrases.size() - 1)(news_rng)];
      item.embedding = detail::jitter(news_centers[static_cast<std::size_t>(cluster)], 0.2, news_rng);
      out.news.push_back(std::move(item));
      out.news_clusters.push_back(cluster);
      news_day.push_back(t);
      multiplier *= detail::cluster_multiplier(cluster, cfg.shock_factor);
    }
    if (cfg.event_interval > 0 && t >= first_event && (t - first_event) % cfg.event_interval == 0) {
      const std::size_t tone = u01(event_rng) < 0.5 ? 0 : 1;  // 0 good, 1 bad
      EarningsEvent e;
      e.ticker = cfg.ticker;
      e.event_date = out.prices.dates[t];
      const auto n_seg = std::uniform_int_distribution<std::size_t>(3, 6)(event_rng);
      const auto& phrases = detail::call_phrases()[tone];
      for (std::size_t s = 0; s < n_seg; ++s) {
        Segment seg;
        seg.text = phrases[std::uniform_int_distribution<std::size_t>(0, phrases.size() - 1)(event_rng)];
        seg.text_embedding = detail::jitter(text_centers[tone], 0.3, event_rng);
        seg.audio_features = detail::jitter(audio_centers[tone], 0.5, event_rng);
        e.segments.push_back(std::move(seg));
      }
      out.events.push_back(std::move(e));
      multiplier *= tone == 1 ? cfg.shock_factor : 1.0 / cfg.shock_factor;
    }
    var = multiplier * (detail::omega_on(cfg, t + 1) + g.alpha * r * r + g.beta * var);
  }

  for (std::size_t i = 0; i < out.news.size(); ++i) {
    const std::size_t t = news_day[i];
    if (t + 1 < cfg.n_days) {
      out.news[i].outcome = NewsOutcome{returns[t], out.variances[t] / out.variances[t - 1]};
    }
  }
  return out;
}

/// Writes prices.csv, news.jsonl and events.jsonl into `dir`.
inline void write_dataset(const Dataset& data, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  {
    auto out = detail::open_out(dir / "prices.csv");
    write_prices(out, data.prices);
  }
  {
    auto out = detail::open_out(dir / "news.jsonl");
    write_json_lines(out, data.news);
  }
  {
    auto out = detail::open_out(dir / "events.jsonl");
    write_json_lines(out, data.events);
  }
}

/// Reads the three files written by write_dataset; absent news/events files load empty.
inline Dataset load_dataset(const std::filesystem::path& prices, const std::filesystem::path& news,
                            const std::filesystem::path& events, const Dims& dims = {}) {
  Dataset d;
  d.prices = load_prices(prices);
  if (!news.empty() && std::filesystem::exists(news)) d.news = load_news(news, dims);
  if (!events.empty() && std::filesystem::exists(events)) d.events = load_events(events, dims);
  return d;
}

}  // namespace risklabs
