#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "risklabs/cli/app.hpp"
#include "../support.hpp"

using namespace risklabs;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "risklabs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Small dims and model so fitting takes a moment.
const std::vector<std::string> kTiny{"--dim-text", "4", "--dim-audio", "3", "--dim-news", "4",
                                     "--recurrent-hidden", "3", "--head-hidden", "4", "--fused-dim", "3",
                                     "--attention-heads", "1", "--attention-key-dim", "2",
                                     "--attention-value-dim", "2"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

fs::path synth_into(const std::string& name, std::size_t days, std::uint64_t seed) {
  const auto dir = fixtures::scratch_dir(name);
  const auto r = run_cli(with({"synth", "--seed", std::to_string(seed), "--days", std::to_string(days),
                               "--event-interval", "40", "--out", dir.string()},
                              kTiny));
  EXPECT_EQ(r.code, 0) << r.err;
  return dir;
}

std::vector<std::string> metric_methods(const fs::path& csv) {
  std::istringstream in(read_text_file(csv));
  std::string line;
  std::getline(in, line);
  std::vector<std::string> methods;
  while (std::getline(in, line)) {
    const std::string m = line.substr(0, line.find(','));
    if (methods.empty() || methods.back() != m) methods.push_back(m);
  }
  return methods;
}

}  // namespace

TEST(CliSynth, SameSeedGivesIdenticalFiles) {
  const auto a = fixtures::scratch_dir("cli_synth_a");
  const auto b = fixtures::scratch_dir("cli_synth_b");
  ASSERT_EQ(run_cli({"synth", "--seed", "7", "--days", "2000", "--out", a.string()}).code, 0);
  ASSERT_EQ(run_cli({"synth", "--seed", "7", "--days", "2000", "--out", b.string()}).code, 0);
  for (const char* f : {"prices.csv", "news.jsonl", "events.jsonl"}) {
    EXPECT_EQ(read_text_file(a / f), read_text_file(b / f)) << f;
  }
  const Dataset d = load_dataset(a / "prices.csv", a / "news.jsonl", a / "events.jsonl");
  EXPECT_EQ(d.series("SYN").size(), 2000u);
}

TEST(CliSynth, MissingSeedIsAUsageError) {
  const auto dir = fixtures::scratch_dir("cli_noseed");
  const auto r = run_cli({"synth", "--days", "300", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--seed"), std::string::npos) << r.err;
}

TEST(CliSynth, RegimeShiftShrinksTheWindow) {
  const auto dir = fixtures::scratch_dir("cli_shift");
  ASSERT_EQ(run_cli({"synth", "--seed", "3", "--days", "800", "--shift-day", "600", "--shift-vol", "3", "--out",
                     dir.string()})
                .code,
            0);
  const Dataset d = load_dataset(dir / "prices.csv", dir / "news.jsonl", dir / "events.jsonl");
  const ReturnSeries r = compute_returns(d.series("SYN"));
  const std::span<const double> all(r.returns);
  const WindowConfig cfg;
  // Thirty returns into the new regime the probe fires; before the shift it does not.
  EXPECT_EQ(select_window(all.first(600 + 30), cfg, 700), cfg.w_min);
  EXPECT_GT(regime_probe(all.first(630)), cfg.theta);
  EXPECT_LT(regime_probe(all.first(590)), cfg.theta);
}

TEST(CliUsage, BadInvocationsExitWithTwo) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"bogus"}).code, 2);
  EXPECT_EQ(run_cli({"synth", "--seed", "1", "--no-such-flag", "3"}).code, 2);
  EXPECT_EQ(run_cli({"synth", "--seed", "x"}).code, 2);
  EXPECT_EQ(run_cli({"fit", "--seed", "1"}).code, 2);  // no data
  EXPECT_EQ(run_cli({"synth", "--help"}).code, 0);

  const auto dir = fixtures::scratch_dir("cli_cfg");
  write_text_file(dir / "bad.cfg", "days = 300\nnot_a_key = 1\n");
  const auto r = run_cli({"synth", "--seed", "1", "--config", (dir / "bad.cfg").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.cfg:2"), std::string::npos) << r.err;
}

TEST(CliUsage, MissingInputFileIsAnIoError) {
  const auto dir = fixtures::scratch_dir("cli_missing");
  const auto r = run_cli({"fit", "--seed", "1", "--data", (dir / "nowhere").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 4) << r.err;
}

TEST(CliConfig, FileValuesAndFlagOverrides) {
  cli::RunConfig c;
  const auto dir = fixtures::scratch_dir("cli_cfg_values");
  write_text_file(dir / "run.cfg", "# experiment\nepochs = 12\nlr = 0.002\ntheta = inf\nmethods = historical,garch\n");
  cli::apply_config_file(c, dir / "run.cfg");
  EXPECT_EQ(c.model.epochs, 12u);
  EXPECT_EQ(c.model.lr, 0.002);
  EXPECT_TRUE(std::isinf(c.model.window.theta));
  EXPECT_EQ(c.methods, (std::vector<std::string>{"historical", "garch"}));
  EXPECT_THROW(cli::set_key(c, "epochs", "twelve"), InputError);
  EXPECT_THROW(cli::set_key(c, "methods", "historical,oracle"), InputError);
  EXPECT_THROW(cli::set_key(c, "unknown", "1"), InputError);
}

TEST(CliFit, WritesModelDeterministically) {
  const auto data = synth_into("cli_fit_data", 400, 5);
  const auto a = fixtures::scratch_dir("cli_fit_a");
  const auto b = fixtures::scratch_dir("cli_fit_b");
  const auto args = with({"fit", "--seed", "2", "--epochs", "5", "--data", data.string()}, kTiny);
  const auto ra = run_cli(with(args, {"--out", a.string()}));
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(run_cli(with(args, {"--out", b.string()})).code, 0);
  EXPECT_EQ(read_text_file(a / "model.json"), read_text_file(b / "model.json"));
  EXPECT_EQ(read_text_file(a / "loss_trace.csv"), read_text_file(b / "loss_trace.csv"));

  const auto model = RiskLabsModel::load(a / "model.json");
  EXPECT_EQ(model.config().epochs, 5u);
  EXPECT_EQ(model.config().recurrent_hidden, 3u);
  std::istringstream trace(read_text_file(a / "loss_trace.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(trace, line)) ++rows;
  EXPECT_EQ(rows, 6u);
}

TEST(CliFit, DivergenceExitsWithThree) {
  const auto data = synth_into("cli_nan_data", 400, 6);
  const auto out = fixtures::scratch_dir("cli_nan_out");
  const auto r = run_cli(
      with({"fit", "--seed", "1", "--epochs", "20", "--lr", "1e200", "--data", data.string(), "--out", out.string()},
           kTiny));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("numeric failure"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(out / "model.json"));
}

TEST(CliBacktest, ThreeMethodsAndReport) {
  const auto data = synth_into("cli_bt_data", 500, 8);
  const auto out = fixtures::scratch_dir("cli_bt_out");
  const auto r = run_cli(with({"backtest", "--seed", "1", "--epochs", "5", "--analyzer", "stub", "--garch-refit",
                               "100", "--historical-window", "100", "--data", data.string(), "--out", out.string()},
                              kTiny));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(metric_methods(out / "metrics.csv"), (std::vector<std::string>{"historical", "garch", "risklabs"}));
  const auto reports = parse_report(out);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& rep : reports) EXPECT_EQ(rep.n_eval, 199u) << rep.method;

  const auto shown = run_cli({"report", "--in", out.string()});
  ASSERT_EQ(shown.code, 0) << shown.err;
  for (const char* m : {"historical", "garch", "risklabs", "exceedance"}) {
    EXPECT_NE(shown.out.find(m), std::string::npos) << m;
  }
}

TEST(CliBacktest, SplitAfterTheDataIsAUsageError) {
  const auto data = synth_into("cli_split_data", 300, 9);
  const auto out = fixtures::scratch_dir("cli_split_out");
  const auto r = run_cli({"backtest", "--methods", "historical", "--split", "2030-01-01", "--data", data.string(),
                          "--out", out.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("split"), std::string::npos) << r.err;
}
