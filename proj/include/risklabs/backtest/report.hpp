#pragma once

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "risklabs/backtest/rolling.hpp"
#include "risklabs/core/errors.hpp"
#include "risklabs/ingest/io.hpp"

namespace risklabs {

/// metrics.csv: method,metric,horizon,value; horizon is the forecast horizon
/// in trading days, 1 for VaR metrics, empty for the evaluation length.
inline std::string metrics_csv(const std::vector<EvalReport>& reports) {
  using detail::format_double;
  std::ostringstream out;
  out << "method,metric,horizon,value\n";
  for (const auto& r : reports) {
    if (r.method.find_first_of(",\n\"") != std::string::npos) {
      throw InputError("method name '" + r.method + "' cannot be written to CSV");
    }
    for (std::size_t h = 0; h < kNumHorizons; ++h) {
      out << r.method << ",vol_mse," << kHorizons[h] << ',' << format_double(r.vol_mse[h]) << '\n';
    }
    for (std::size_t h = 0; h < kNumHorizons; ++h) {
      out << r.method << ",vol_count," << kHorizons[h] << ',' << r.vol_count[h] << '\n';
    }
    out << r.method << ",n_eval,," << r.n_eval << '\n';
    out << r.method << ",exceedances,1," << r.exceedances << '\n';
    out << r.method << ",var_exceedance_rate,1," << format_double(r.var_exceedance_rate) << '\n';
    out << r.method << ",kupiec_lr,1," << format_double(r.kupiec_lr) << '\n';
    out << r.method << ",kupiec_reject,1," << (r.kupiec_reject ? 1 : 0) << '\n';
    out << r.method << ",responsiveness,1," << format_double(r.responsiveness) << '\n';
  }
  return out.str();
}

/// curves.json: [{date, method, var_pred, realized_return}, ...], methods in report order.
inline std::string curves_json(const std::vector<EvalReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    for (const auto& c : r.curves) {
      arr.push_back({{"date", c.date.iso()}, {"method", r.method}, {"var_pred", c.var_pred},
                     {"realized_return", c.realized_return}});
    }
  }
  return arr.dump(1) + "\n";
}

inline void emit_report(const std::vector<EvalReport>& reports, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  write_text_file(out_dir / "metrics.csv", metrics_csv(reports));
  write_text_file(out_dir / "curves.json", curves_json(reports));
}

/// Reads back what emit_report wrote.
inline std::vector<EvalReport> parse_report(const std::filesystem::path& dir) {
  std::vector<EvalReport> reports;
  std::map<std::string, std::size_t> index;
  auto report_for = [&](const std::string& method) -> EvalReport& {
    auto it = index.find(method);
    if (it == index.end()) {
      it = index.emplace(method, reports.size()).first;
      reports.push_back({});
      reports.back().method = method;
    }
    return reports[it->second];
  };

  const auto metrics_path = dir / "metrics.csv";
  std::istringstream in(read_text_file(metrics_path));
  std::string line;
  std::size_t line_no = 0;
  const std::string source = metrics_path.string();
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "method,metric,horizon,value") throw ParseError(source, 1, "unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 4) throw ParseError(source, line_no, "expected 4 fields");
    double value = 0.0;
    if (!detail::parse_double(f[3], value)) throw ParseError(source, line_no, "bad value '" + f[3] + "'");
    EvalReport& r = report_for(f[0]);
    const std::string& metric = f[1];
    auto horizon = [&]() {
      double h = 0.0;
      if (!detail::parse_double(f[2], h)) throw ParseError(source, line_no, "bad horizon '" + f[2] + "'");
      return horizon_index(static_cast<int>(h));
    };
    if (metric == "vol_mse") r.vol_mse[horizon()] = value;
    else if (metric == "vol_count") r.vol_count[horizon()] = static_cast<std::size_t>(value);
    else if (metric == "n_eval") r.n_eval = static_cast<std::size_t>(value);
    else if (metric == "exceedances") r.exceedances = static_cast<std::size_t>(value);
    else if (metric == "var_exceedance_rate") r.var_exceedance_rate = value;
    else if (metric == "kupiec_lr") r.kupiec_lr = value;
    else if (metric == "kupiec_reject") r.kupiec_reject = value != 0.0;
    else if (metric == "responsiveness") r.responsiveness = value;
    else throw ParseError(source, line_no, "unknown metric '" + metric + "'");
  }

  const auto curves_path = dir / "curves.json";
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(read_text_file(curves_path));
    for (const auto& c : arr) {
      report_for(c.at("method").get<std::string>())
          .curves.push_back({Date::parse(c.at("date").get<std::string>()), c.at("var_pred").get<double>(),
                             c.at("realized_return").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(curves_path.string() + ": " + e.what());
  }
  return reports;
}

}  // namespace risklabs
