#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "risklabs/core/dataset.hpp"
#include "risklabs/core/errors.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/ingest/returns.hpp"

namespace risklabs {

/// How build_samples picks as-of dates.
enum class Anchor {
  kAuto,   // one sample per earnings event when the ticker has events, else daily
  kDaily,  // every trading day with enough history and future
  kEvent,  // earnings-event dates only
};

struct SampleSet {
  std::vector<TrainingSample> samples;
  std::size_t skipped = 0;  // anchors dropped for lack of history or future data
};

namespace detail {

inline bool news_less(const NewsItem& a, const NewsItem& b) {
  return std::tie(a.timestamp, a.headline, a.embedding) < std::tie(b.timestamp, b.headline, b.embedding);
}

/// Index of the last date <= d, or npos.
inline std::size_t last_on_or_before(const std::vector<Date>& dates, Date d) {
  auto it = std::upper_bound(dates.begin(), dates.end(), d);
  if (it == dates.begin()) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - dates.begin()) - 1;
}

/// Per-ticker news sorted canonically, and events sorted by date.
struct SourceIndex {
  std::vector<NewsItem> news;
  std::vector<EarningsEvent> events;

  SourceIndex(const std::string& ticker, std::span<const NewsItem> all_news,
              std::span<const EarningsEvent> all_events) {
    for (const auto& n : all_news) {
      if (n.ticker == ticker) news.push_back(n);
    }
    std::sort(news.begin(), news.end(), news_less);
    for (const auto& e : all_events) {
      if (e.ticker == ticker) events.push_back(e);
    }
    std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
      return a.event_date < b.event_date;
    });
  }
};

/// Builds the sample anchored at price index `p`; labels need kHorizons.back() future returns.
inline std::optional<TrainingSample> sample_at(const PriceSeries& prices, const ReturnSeries& rets,
                                               const SourceIndex& src, std::size_t p,
                                               bool with_labels,
                                               const EarningsEvent* anchor_event = nullptr) {
  const std::size_t n_prices = prices.size();
  if (p < kLookback || p >= n_prices) return std::nullopt;
  const std::size_t max_h = static_cast<std::size_t>(kHorizons.back());
  if (with_labels && p + max_h > rets.size()) return std::nullopt;

  TrainingSample s;
  s.ticker = prices.ticker;
  s.as_of = prices.dates[p];
  // Return j spans prices j..j+1, so the return dated as_of has index p - 1.
  s.lookback_returns.assign(rets.returns.begin() + static_cast<std::ptrdiff_t>(p - kLookback),
                            rets.returns.begin() + static_cast<std::ptrdiff_t>(p));
  const Date window_start = prices.dates[p - kLookback + 1];

  if (anchor_event) {
    s.earnings = *anchor_event;
  } else {
    for (auto it = src.events.rbegin(); it != src.events.rend(); ++it) {
      if (it->event_date <= s.as_of) {
        if (it->event_date >= window_start) s.earnings = *it;
        break;
      }
    }
  }
  auto lo = std::lower_bound(src.news.begin(), src.news.end(), window_start,
                             [](const NewsItem& n, Date d) { return n.timestamp < d; });
  for (auto it = lo; it != src.news.end() && it->timestamp <= s.as_of; ++it) {
    s.news_window.push_back(*it);
  }

  if (with_labels) {
    Labels l;
    const auto future = std::span<const double>(rets.returns).subspan(p);
    for (std::size_t h = 0; h < kNumHorizons; ++h) {
      l.log_vol[h] = realized_log_vol(future.first(static_cast<std::size_t>(kHorizons[h])));
    }
    l.next_return = future.front();
    s.labels = l;
  }
  s.presence.prices = true;
  s.presence.earnings = s.earnings.has_value();
  s.presence.news = !s.news_window.empty();
  return s;
}

}  // namespace detail

/// Leakage-free samples for one ticker: a kLookback-return history ending at
/// as_of, and labels computed only from returns strictly after as_of.
inline SampleSet build_samples(const PriceSeries& prices, std::span<const NewsItem> news,
                               std::span<const EarningsEvent> events,
                               std::span<const int> horizons = kHorizons,
                               Anchor anchor = Anchor::kAuto) {
  if (!std::equal(horizons.begin(), horizons.end(), kHorizons.begin(), kHorizons.end())) {
    throw InputError("horizons must be exactly {3, 7, 15, 30}");
  }
  SampleSet out;
  if (prices.size() < 2) {
    out.skipped = prices.size();
    return out;
  }
  const ReturnSeries rets = compute_returns(prices);
  const detail::SourceIndex src(prices.ticker, news, events);

  const bool by_event =
      anchor == Anchor::kEvent || (anchor == Anchor::kAuto && !src.events.empty());
  if (by_event) {
    for (const auto& e : src.events) {
      const std::size_t p = detail::last_on_or_before(prices.dates, e.event_date);
      auto s = p == static_cast<std::size_t>(-1)
                   ? std::nullopt
                   : detail::sample_at(prices, rets, src, p, true, &e);
      if (s) {
        out.samples.push_back(std::move(*s));
      } else {
        ++out.skipped;
      }
    }
  } else {
    for (std::size_t p = 0; p < prices.size(); ++p) {
      if (auto s = detail::sample_at(prices, rets, src, p, true)) {
        out.samples.push_back(std::move(*s));
      } else {
        ++out.skipped;
      }
    }
  }
  return out;
}

/// Samples for every ticker in the dataset, tickers in name order.
inline SampleSet build_samples(const Dataset& data, Anchor anchor = Anchor::kAuto) {
  SampleSet out;
  for (const auto& [ticker, series] : data.prices) {
    SampleSet one = build_samples(series, data.news, data.events, kHorizons, anchor);
    out.skipped += one.skipped;
    for (auto& s : one.samples) out.samples.push_back(std::move(s));
  }
  return out;
}

/// An unlabeled sample at `as_of` for prediction; needs kLookback returns up to as_of.
inline TrainingSample make_prediction_sample(const PriceSeries& prices,
                                             std::span<const NewsItem> news,
                                             std::span<const EarningsEvent> events, Date as_of) {
  const std::size_t p = detail::last_on_or_before(prices.dates, as_of);
  if (p == static_cast<std::size_t>(-1) || prices.dates[p] != as_of) {
    throw InputError("no trading day " + as_of.iso() + " for '" + prices.ticker + "'");
  }
  if (p < kLookback) {
    throw InputError("need " + std::to_string(kLookback) + " returns before " + as_of.iso());
  }
  const ReturnSeries rets = compute_returns(prices);
  const detail::SourceIndex src(prices.ticker, news, events);
  return *detail::sample_at(prices, rets, src, p, false);
}

}  // namespace risklabs
