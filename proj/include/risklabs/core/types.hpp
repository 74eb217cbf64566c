#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risklabs/core/errors.hpp"

namespace risklabs {

/// A calendar date with day resolution. Trading days are whatever dates the
/// data provides; there is no holiday calendar.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  constexpr Date(int year, unsigned month, unsigned day)
      : days_(std::chrono::year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}}) {}

  /// Parses `YYYY-MM-DD`. A trailing time component (`THH:MM:SS...`) is ignored.
  static Date parse(std::string_view text) {
    if (text.size() > 10 && (text[10] == 'T' || text[10] == ' ')) text = text.substr(0, 10);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
      throw InputError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    auto digits = [&](std::size_t pos, std::size_t len) {
      int value = 0;
      for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') throw InputError("invalid date '" + std::string(text) + "'");
        value = value * 10 + (c - '0');
      }
      return value;
    };
    const std::chrono::year_month_day ymd{std::chrono::year{digits(0, 4)},
                                          std::chrono::month{static_cast<unsigned>(digits(5, 2))},
                                          std::chrono::day{static_cast<unsigned>(digits(8, 2))}};
    if (!ymd.ok()) throw InputError("invalid calendar date '" + std::string(text) + "'");
    return Date(std::chrono::sys_days{ymd});
  }

  std::string iso() const {
    const std::chrono::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

  /// Days since 1970-01-01.
  constexpr std::int64_t serial() const { return days_.time_since_epoch().count(); }
  constexpr std::chrono::sys_days sys_days() const { return days_; }
  constexpr Date plus_days(int n) const { return Date(days_ + std::chrono::days{n}); }
  /// 0 = Sunday ... 6 = Saturday.
  unsigned weekday() const { return std::chrono::weekday{days_}.c_encoding(); }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;
  friend constexpr bool operator==(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

/// Signed day difference `later - earlier`.
constexpr double days_between(Date earlier, Date later) {
  return static_cast<double>(later.serial() - earlier.serial());
}

/// Embedding sizes of the precomputed input vectors.
struct Dims {
  std::size_t text = 16;     // D_t
  std::size_t audio = 8;     // D_a
  std::size_t news = 16;     // D_n
  std::size_t summary = 4;   // D_s, analyzer feature vector

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Forecast horizons in trading days, ascending.
inline constexpr std::array<int, 4> kHorizons{3, 7, 15, 30};
inline constexpr std::size_t kNumHorizons = kHorizons.size();
/// Trading days of history behind each sample.
inline constexpr std::size_t kLookback = 30;
/// Tail probability of the 1-day VaR.
inline constexpr double kVarAlpha = 0.05;

/// Index of `horizon` in kHorizons; throws for anything else.
inline std::size_t horizon_index(int horizon) {
  for (std::size_t i = 0; i < kNumHorizons; ++i) {
    if (kHorizons[i] == horizon) return i;
  }
  throw InputError("unknown horizon " + std::to_string(horizon));
}

struct PriceSeries {
  std::string ticker;
  std::vector<Date> dates;
  std::vector<double> closes;

  std::size_t size() const { return closes.size(); }
  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;
};

/// Log returns r_t = ln(P_t / P_{t-1}); dates[i] is the date of the later price.
struct ReturnSeries {
  std::string ticker;
  std::vector<Date> dates;
  std::vector<double> returns;

  std::size_t size() const { return returns.size(); }
  friend bool operator==(const ReturnSeries&, const ReturnSeries&) = default;
};

struct Segment {
  std::string text;
  std::vector<double> text_embedding;
  std::vector<double> audio_features;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct EarningsEvent {
  std::string ticker;
  Date event_date;
  std::vector<Segment> segments;

  /// All segment texts joined by single spaces.
  std::string transcript() const {
    std::string out;
    for (const auto& s : segments) {
      if (!out.empty()) out += ' ';
      out += s.text;
    }
    return out;
  }

  friend bool operator==(const EarningsEvent&, const EarningsEvent&) = default;
};

/// Realized market response on the trading day after a headline.
struct NewsOutcome {
  double next_day_return = 0.0;
  double vol_change = 1.0;  // ratio of next-day variance to the prior level

  friend bool operator==(const NewsOutcome&, const NewsOutcome&) = default;
};

struct NewsItem {
  Date timestamp;
  std::string ticker;
  std::string headline;
  std::vector<double> embedding;
  std::optional<NewsOutcome> outcome;

  friend bool operator==(const NewsItem&, const NewsItem&) = default;
};

struct RiskForecast {
  Date as_of;
  std::array<double, kNumHorizons> vol{};  // log realized vol, aligned with kHorizons
  double var_1d = 0.0;                     // 0.05-quantile of next-day log return

  double vol_at(int horizon) const { return vol[horizon_index(horizon)]; }
  friend bool operator==(const RiskForecast&, const RiskForecast&) = default;
};

struct Labels {
  std::array<double, kNumHorizons> log_vol{};
  double next_return = 0.0;

  friend bool operator==(const Labels&, const Labels&) = default;
};

struct PresenceFlags {
  bool prices = true;
  bool earnings = false;
  bool news = false;

  friend bool operator==(const PresenceFlags&, const PresenceFlags&) = default;
};

struct TrainingSample {
  std::string ticker;
  Date as_of;
  std::vector<double> lookback_returns;  // the kLookback returns ending at as_of
  std::optional<EarningsEvent> earnings;
  std::vector<NewsItem> news_window;
  std::optional<Labels> labels;  // absent for prediction-time samples
  PresenceFlags presence;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

}  // namespace risklabs
