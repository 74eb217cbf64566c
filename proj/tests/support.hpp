#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "risklabs/core/dataset.hpp"
#include "risklabs/core/types.hpp"

namespace risklabs::fixtures {

inline std::vector<Date> trading_days(Date start, std::size_t n) {
  std::vector<Date> out;
  for (Date d = start; out.size() < n; d = d.plus_days(1)) {
    if (d.weekday() != 0 && d.weekday() != 6) out.push_back(d);
  }
  return out;
}

/// Prices whose log returns are exactly `returns`, starting at 100.
inline PriceSeries prices_from_returns(const std::vector<double>& returns, const std::string& ticker = "T",
                                       Date start = Date{2015, 1, 5}) {
  PriceSeries s;
  s.ticker = ticker;
  s.dates = trading_days(start, returns.size() + 1);
  s.closes.push_back(100.0);
  for (double r : returns) s.closes.push_back(s.closes.back() * std::exp(r));
  return s;
}

inline Dataset dataset_of(PriceSeries s) {
  Dataset d;
  const std::string t = s.ticker;
  d.prices.emplace(t, std::move(s));
  return d;
}

inline std::vector<double> gaussian_returns(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, sigma);
  std::vector<double> r(n);
  for (auto& x : r) x = z(rng);
  return r;
}

/// A fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("risklabs_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace risklabs::fixtures
