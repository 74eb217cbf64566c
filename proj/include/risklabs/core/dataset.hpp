#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "risklabs/core/errors.hpp"
#include "risklabs/core/types.hpp"

namespace risklabs {

/// Everything loaded for a run: prices per ticker, news, earnings events.
struct Dataset {
  std::map<std::string, PriceSeries> prices;
  std::vector<NewsItem> news;
  std::vector<EarningsEvent> events;

  const PriceSeries& series(const std::string& ticker) const {
    auto it = prices.find(ticker);
    if (it == prices.end()) throw InputError("unknown ticker '" + ticker + "'");
    return it->second;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

namespace detail {

/// True when the trading day following `d` is known by `as_of`.
inline bool outcome_known(const Dataset& full, const std::string& ticker, Date d, Date as_of) {
  auto it = full.prices.find(ticker);
  if (it == full.prices.end()) return d < as_of;
  const auto& dates = it->second.dates;
  auto next = std::upper_bound(dates.begin(), dates.end(), d);
  return next != dates.end() && *next <= as_of;
}

}  // namespace detail

/// A copy of a dataset holding nothing dated after `as_of`. News outcomes
/// whose next trading day lies beyond `as_of` are stripped as well, since they
/// describe the future.
class DatasetView {
 public:
  DatasetView(const Dataset& full, std::string ticker, Date as_of)
      : ticker_(std::move(ticker)), as_of_(as_of) {
    for (const auto& [name, s] : full.prices) {
      PriceSeries cut{name, {}, {}};
      for (std::size_t i = 0; i < s.size() && s.dates[i] <= as_of; ++i) {
        cut.dates.push_back(s.dates[i]);
        cut.closes.push_back(s.closes[i]);
      }
      data_.prices.emplace(name, std::move(cut));
    }
    for (const auto& n : full.news) {
      if (n.timestamp > as_of) continue;
      NewsItem copy = n;
      if (copy.outcome && !detail::outcome_known(full, n.ticker, n.timestamp, as_of)) {
        copy.outcome.reset();
      }
      data_.news.push_back(std::move(copy));
    }
    for (const auto& e : full.events) {
      if (e.event_date <= as_of) data_.events.push_back(e);
    }
  }

  Date as_of() const { return as_of_; }
  const std::string& ticker() const { return ticker_; }
  const Dataset& data() const { return data_; }
  const PriceSeries& prices() const { return data_.series(ticker_); }

  /// Close on `d`; asking for any date after as_of is a hard error.
  double close_on(Date d) const {
    if (d > as_of_) {
      throw LookAheadError("requested " + d.iso() + " from a view as of " + as_of_.iso());
    }
    const auto& s = prices();
    auto it = std::lower_bound(s.dates.begin(), s.dates.end(), d);
    if (it == s.dates.end() || *it != d) throw InputError("no price on " + d.iso());
    return s.closes[static_cast<std::size_t>(it - s.dates.begin())];
  }

 private:
  std::string ticker_;
  Date as_of_;
  Dataset data_;
};

}  // namespace risklabs
