#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "risklabs/core/errors.hpp"
#include "risklabs/core/serialize.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/core/validate.hpp"

namespace risklabs {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

template <class T>
std::vector<T> parse_json_lines(std::istream& in, const std::string& source, const Dims& dims,
                                const char* kind) {
  std::vector<T> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    T item;
    try {
      item = json::parse(line).get<T>();
    } catch (const json::exception& e) {
      throw ParseError(source, lineno, std::string("malformed ") + kind + " record: " + e.what());
    } catch (const InputError& e) {
      throw ParseError(source, lineno, e.what());
    }
    const Violations v = validate(item, dims);
    if (!v.empty()) throw ParseError(source, lineno, v.front().path + ": " + v.front().rule);
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace detail

/// Parses CSV `date,ticker,close` into one date-sorted series per ticker.
inline std::map<std::string, PriceSeries> parse_prices(std::istream& in,
                                                       const std::string& source = "prices") {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "date,ticker,close") {
    throw ParseError(source, 1, "expected header 'date,ticker,close'");
  }
  struct Row {
    Date date;
    double close;
    std::size_t line;
  };
  std::map<std::string, std::vector<Row>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      fields.push_back(detail::trim(text.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 3) throw ParseError(source, lineno, "expected 3 fields");
    Row row{};
    row.line = lineno;
    try {
      row.date = Date::parse(fields[0]);
    } catch (const InputError& e) {
      throw ParseError(source, lineno, e.what());
    }
    if (fields[1].empty()) throw ParseError(source, lineno, "empty ticker");
    if (!detail::parse_double(fields[2], row.close)) {
      throw ParseError(source, lineno, "malformed close '" + std::string(fields[2]) + "'");
    }
    if (!(row.close > 0.0) || !std::isfinite(row.close)) {
      throw ParseError(source, lineno, "closes[i] > 0 violated");
    }
    rows[std::string(fields[1])].push_back(row);
  }

  std::map<std::string, PriceSeries> out;
  for (auto& [ticker, list] : rows) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    PriceSeries s{ticker, {}, {}};
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0 && list[i].date == list[i - 1].date) {
        throw ParseError(source, list[i].line,
                         "duplicate (date,ticker) (" + list[i].date.iso() + "," + ticker + ")");
      }
      s.dates.push_back(list[i].date);
      s.closes.push_back(list[i].close);
    }
    out.emplace(ticker, std::move(s));
  }
  return out;
}

inline std::map<std::string, PriceSeries> load_prices(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return parse_prices(in, path.string());
}

/// JSON-lines news. Either every line loads or an error names the bad line.
inline std::vector<NewsItem> parse_news(std::istream& in, const Dims& dims,
                                        const std::string& source = "news") {
  return detail::parse_json_lines<NewsItem>(in, source, dims, "news");
}

inline std::vector<NewsItem> load_news(const std::filesystem::path& path, const Dims& dims = {}) {
  auto in = detail::open_in(path);
  return parse_news(in, dims, path.string());
}

inline std::vector<EarningsEvent> parse_events(std::istream& in, const Dims& dims,
                                               const std::string& source = "events") {
  return detail::parse_json_lines<EarningsEvent>(in, source, dims, "event");
}

inline std::vector<EarningsEvent> load_events(const std::filesystem::path& path,
                                              const Dims& dims = {}) {
  auto in = detail::open_in(path);
  return parse_events(in, dims, path.string());
}

/// Rows ordered by date, then ticker.
inline void write_prices(std::ostream& out, const std::map<std::string, PriceSeries>& prices) {
  std::vector<std::tuple<Date, std::string, double>> rows;
  for (const auto& [ticker, s] : prices) {
    for (std::size_t i = 0; i < s.size(); ++i) rows.emplace_back(s.dates[i], ticker, s.closes[i]);
  }
  std::sort(rows.begin(), rows.end());
  out << "date,ticker,close\n";
  for (const auto& [d, t, c] : rows) out << d.iso() << ',' << t << ',' << detail::format_double(c) << '\n';
}

template <class T>
void write_json_lines(std::ostream& out, const std::vector<T>& items) {
  for (const auto& item : items) out << json(item).dump() << '\n';
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto out = detail::open_out(path);
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace risklabs
