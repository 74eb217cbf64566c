#pragma once

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risklabs/analyzer/analyzer.hpp"
#include "risklabs/analyzer/remote.hpp"
#include "risklabs/backtest/methods.hpp"
#include "risklabs/backtest/report.hpp"
#include "risklabs/backtest/rolling.hpp"
#include "risklabs/cli/config.hpp"
#include "risklabs/core/errors.hpp"
#include "risklabs/ingest/io.hpp"
#include "risklabs/ingest/synth.hpp"
#include "risklabs/model/model.hpp"

namespace risklabs::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

namespace detail {

inline std::uint64_t require_seed(const RunConfig& c, const char* command) {
  if (!c.seed) throw InputError(std::string(command) + " requires --seed");
  return *c.seed;
}

inline std::shared_ptr<analyzer::Analyzer> make_analyzer(const RunConfig& c) {
  if (c.analyzer == "remote") return std::make_shared<analyzer::RemoteAnalyzer>(analyzer::RemoteConfig::from_env());
  return std::make_shared<analyzer::StubAnalyzer>();
}

inline Dataset load_inputs(const RunConfig& c) {
  if (c.prices.empty() && c.data_dir.empty()) throw InputError("no input data: pass --data DIR or --prices FILE");
  return load_dataset(c.prices_path(), c.news_path(), c.events_path(), c.model.dims);
}

inline std::string pick_ticker(const RunConfig& c, const Dataset& d) {
  if (!c.ticker.empty()) {
    d.series(c.ticker);
    return c.ticker;
  }
  if (d.prices.size() != 1) throw InputError("data holds several tickers; choose one with --ticker");
  return d.prices.begin()->first;
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

inline int cmd_synth(const RunConfig& c, std::ostream& out) {
  SynthConfig s = c.synth;
  s.seed = require_seed(c, "synth");
  if (c.shift_day) s.regime_shift = RegimeShift{*c.shift_day, c.shift_vol};
  const SynthDataset data = synth_generate(s);
  write_dataset(data.dataset(), c.out_dir);
  out << "wrote " << data.prices.size() << " prices, " << data.news.size() << " headlines, " << data.events.size()
      << " earnings calls to " << c.out_dir.string() << "\n";
  return kOk;
}

inline int cmd_fit(const RunConfig& c, std::ostream& out) {
  const std::uint64_t seed = require_seed(c, "fit");
  const Dataset data = load_inputs(c);
  const std::string ticker = pick_ticker(c, data);
  RiskLabsModel model(c.model, make_analyzer(c));
  const TrainResult r = model.fit(data, ticker, c.model.epochs, seed);
  ensure_dir(c.out_dir);
  model.save(c.out_dir / "model.json");
  std::ostringstream trace;
  trace << "epoch,loss\n";
  for (std::size_t e = 0; e < r.loss_trace.size(); ++e) {
    trace << e << ',' << risklabs::detail::format_double(r.loss_trace[e]) << '\n';
  }
  write_text_file(c.out_dir / "loss_trace.csv", trace.str());
  out << "trained on " << r.samples_used << " samples (window " << r.window_days << " days), final loss "
      << risklabs::detail::format_double(r.loss_trace.back()) << "\n";
  return kOk;
}

inline int cmd_backtest(const RunConfig& c, std::ostream& out) {
  const Dataset data = load_inputs(c);
  const std::string ticker = pick_ticker(c, data);
  const auto& dates = data.series(ticker).dates;
  // Without an explicit split the last 40% of the history is evaluated.
  const Date split = c.split ? *c.split : dates[dates.size() * 3 / 5];
  if (split > dates.back()) throw InputError("split " + split.iso() + " is after the last price date " + dates.back().iso());

  std::vector<EvalReport> reports;
  for (const auto& name : c.methods) {
    MethodUnderTest m;
    if (name == "historical") {
      m = historical_method(c.historical_window);
    } else if (name == "garch") {
      m = garch_method(c.garch_refit);
    } else {
      NeuralMethodOptions o;
      o.config = c.model;
      o.epochs = c.model.epochs;
      o.seed = require_seed(c, "backtest with the risklabs method");
      o.analyzer = make_analyzer(c);
      m = neural_method(std::move(o));
    }
    reports.push_back(rolling_backtest(m, data, ticker, split));
  }
  emit_report(reports, c.out_dir);
  for (const auto& r : reports) {
    out << r.method << ": exceedance " << risklabs::detail::format_double(r.var_exceedance_rate) << " kupiec "
        << risklabs::detail::format_double(r.kupiec_lr) << "\n";
  }
  return kOk;
}

inline int cmd_report(const RunConfig& c, std::ostream& out) {
  const auto dir = c.in_dir.empty() ? c.out_dir : c.in_dir;
  const auto reports = parse_report(dir);
  out << std::left << std::setw(12) << "method";
  for (int h : kHorizons) out << std::right << std::setw(10) << ("mse" + std::to_string(h));
  out << std::setw(12) << "exceedance" << std::setw(10) << "kupiec" << std::setw(8) << "reject" << std::setw(12)
      << "respons." << "\n";
  out << std::fixed;
  for (const auto& r : reports) {
    out << std::left << std::setw(12) << r.method << std::right;
    for (double m : r.vol_mse) out << std::setw(10) << std::setprecision(4) << m;
    out << std::setw(12) << std::setprecision(4) << r.var_exceedance_rate << std::setw(10) << std::setprecision(3)
        << r.kupiec_lr << std::setw(8) << (r.kupiec_reject ? "yes" : "no") << std::setw(12) << std::setprecision(5)
        << r.responsiveness << "\n";
  }
  return kOk;
}

}  // namespace detail

/// Entry point of the `risklabs` binary, callable in-process.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Multi-source volatility and VaR forecasting"};
  app.require_subcommand(1);
  struct Sub {
    CLI::App* app;
    std::string config_path;
  };
  const std::vector<std::pair<const char*, const char*>> kCommands{
      {"synth", "generate a synthetic dataset"},
      {"fit", "train the model and write model.json"},
      {"backtest", "rolling out-of-sample evaluation"},
      {"report", "print a summary of backtest output"}};
  std::vector<std::unique_ptr<Sub>> subs;
  std::vector<std::vector<std::string>> flag_values(kCommands.size(), std::vector<std::string>(config_keys().size()));
  for (std::size_t s = 0; s < kCommands.size(); ++s) {
    auto sub = std::make_unique<Sub>();
    sub->app = app.add_subcommand(kCommands[s].first, kCommands[s].second);
    sub->app->add_option("--config", sub->config_path, "flat key = value config file");
    for (std::size_t k = 0; k < config_keys().size(); ++k) {
      std::string key = config_keys()[k].key;
      std::string names = "--" + key;
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != key) names += ",--" + dashed;
      sub->app->add_option(names, flag_values[s][k], config_keys()[k].help);
    }
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    for (std::size_t s = 0; s < subs.size(); ++s) {
      if (!subs[s]->app->parsed()) continue;
      RunConfig cfg;
      if (!subs[s]->config_path.empty()) apply_config_file(cfg, subs[s]->config_path);
      for (std::size_t k = 0; k < config_keys().size(); ++k) {
        const std::string key = config_keys()[k].key;
        if (subs[s]->app->get_option("--" + key)->count() > 0) set_key(cfg, key, flag_values[s][k]);
      }
      const std::string name = kCommands[s].first;
      if (name == "synth") return detail::cmd_synth(cfg, out);
      if (name == "fit") return detail::cmd_fit(cfg, out);
      if (name == "backtest") return detail::cmd_backtest(cfg, out);
      return detail::cmd_report(cfg, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const RemoteError& e) {
    err << "analyzer error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}

}  // namespace risklabs::cli
