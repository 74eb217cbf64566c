#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "risklabs/classical/garch.hpp"
#include "risklabs/classical/nelder_mead.hpp"
#include "risklabs/classical/risk.hpp"
#include "risklabs/ingest/synth.hpp"
#include "../support.hpp"

using namespace risklabs;

namespace {

// Written out term by term, independent of garch_loglik.
double spreadsheet_loglik(double omega, double alpha, double beta, const std::vector<double>& r) {
  double mean = 0.0;
  for (double x : r) mean += x;
  mean /= static_cast<double>(r.size());
  double s2 = 0.0;
  for (double x : r) s2 += (x - mean) * (x - mean);
  double var = s2 / static_cast<double>(r.size() - 1);
  double ll = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (t > 0) var = omega + alpha * r[t - 1] * r[t - 1] + beta * var;
    ll += -0.5 * (std::log(2.0 * std::numbers::pi) + std::log(var) + r[t] * r[t] / var);
  }
  return ll;
}

double gaussian_loglik(double variance, const std::vector<double>& r) {
  double ll = 0.0;
  for (double x : r) ll += -0.5 * std::log(2.0 * std::numbers::pi * variance) - x * x / (2.0 * variance);
  return ll;
}

}  // namespace

TEST(GarchParams, Validation) {
  EXPECT_TRUE(validate(GarchParams{0.1, 0.1, 0.8}).empty());
  EXPECT_FALSE(validate(GarchParams{0.0, 0.1, 0.8}).empty());
  EXPECT_FALSE(validate(GarchParams{0.1, -0.1, 0.8}).empty());
  EXPECT_FALSE(validate(GarchParams{0.1, 0.2, 0.8}).empty());
  EXPECT_FALSE(validate(GarchParams{0.1, NAN, 0.8}).empty());
}

TEST(GarchLoglik, NoDynamicsIsGaussian) {
  const auto r = fixtures::gaussian_returns(50, 0.7, 1);
  std::vector<double> tail(r.begin() + 1, r.end());
  // sigma^2_1 is the sample variance; every later day uses omega.
  const double first_var = [&] {
    double m = 0.0;
    for (double x : r) m += x;
    m /= 50.0;
    double s = 0.0;
    for (double x : r) s += (x - m) * (x - m);
    return s / 49.0;
  }();
  const double expect = gaussian_loglik(0.3, tail) + gaussian_loglik(first_var, {r[0]});
  EXPECT_NEAR(garch_loglik(GarchParams{0.3, 0.0, 0.0}, r), expect, 1e-10);
}

TEST(GarchLoglik, MatchesHandRecursion) {
  const auto r = fixtures::gaussian_returns(20, 1.0, 2);
  const GarchParams p{0.07, 0.12, 0.8};
  EXPECT_NEAR(garch_loglik(p, r), spreadsheet_loglik(p.omega, p.alpha, p.beta, r), 1e-12);
}

TEST(GarchLoglik, LargeOmegaLowersLikelihood) {
  const auto r = fixtures::gaussian_returns(200, 1.0, 3);
  double prev = garch_loglik(GarchParams{2.0, 0.05, 0.5}, r);
  for (double omega = 4.0; omega <= 256.0; omega *= 2.0) {
    const double ll = garch_loglik(GarchParams{omega, 0.05, 0.5}, r);
    EXPECT_LT(ll, prev) << omega;
    prev = ll;
  }
}

TEST(GarchLoglik, ShortInputRejected) {
  const std::vector<double> r(9, 0.1);
  EXPECT_THROW(garch_loglik(GarchParams{0.1, 0.1, 0.1}, r), InputError);
}

TEST(GarchLoglik, TrueParamsBeatPerturbed) {
  const GarchParams truth{0.05, 0.10, 0.85};
  const auto r = simulate_garch(truth, 20000, 11);
  const double at_truth = garch_loglik(truth, r);
  for (const GarchParams& q : {GarchParams{0.1, 0.10, 0.80}, GarchParams{0.05, 0.2, 0.75},
                               GarchParams{0.02, 0.05, 0.9}, GarchParams{0.3, 0.1, 0.6}}) {
    EXPECT_GT(at_truth, garch_loglik(q, r));
  }
}

TEST(Transform, RoundTripsAndStaysStationary) {
  const GarchParams p{0.03, 0.2, 0.7};
  const auto back = detail::garch_from_unconstrained(detail::garch_to_unconstrained(p));
  EXPECT_NEAR(back.omega, p.omega, 1e-14);
  EXPECT_NEAR(back.alpha, p.alpha, 1e-14);
  EXPECT_NEAR(back.beta, p.beta, 1e-14);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const auto q = detail::garch_from_unconstrained({u(rng) / 10.0, u(rng), u(rng)});
    EXPECT_LT(q.alpha + q.beta, 1.0);
    EXPECT_GE(q.alpha, 0.0);
    EXPECT_GE(q.beta, 0.0);
  }
}

TEST(NelderMead, MinimizesRosenbrock) {
  auto f = [](const std::array<double, 2>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead<2>(f, {-1.2, 1.0}, 0.5, 1e-14, 5000);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(GarchFit, RecoversSimulatedParams) {
  const GarchParams truth{0.05, 0.10, 0.85};
  const auto r = simulate_garch(truth, 10000, 3);
  const auto fit = garch_fit(r);
  EXPECT_NEAR(fit.omega, truth.omega, 0.05);
  EXPECT_NEAR(fit.alpha, truth.alpha, 0.05);
  EXPECT_NEAR(fit.beta, truth.beta, 0.05);
  EXPECT_LT(fit.alpha + fit.beta, 1.0);
}

TEST(GarchFit, IidInput) {
  const auto r = fixtures::gaussian_returns(10000, 1.0, 6);
  const auto fit = garch_fit(r);
  EXPECT_LT(fit.alpha, 0.05);
  EXPECT_NEAR(fit.long_run_variance(), 1.0, 0.1);
  EXPECT_LT(fit.alpha + fit.beta, 1.0);
}

TEST(GarchFit, DegenerateInputs) {
  const std::vector<double> zeros(500, 0.0);
  EXPECT_THROW(garch_fit(zeros), NumericError);
  const std::vector<double> short_input(50, 0.01);
  EXPECT_THROW(garch_fit(short_input), InputError);
}

TEST(GarchForecast, NoDynamicsIsOmega) {
  const auto f = garch_forecast(GarchParams{0.4, 0.0, 0.0}, GarchState{1.7, 3.0}, 10);
  for (double v : f) EXPECT_DOUBLE_EQ(v, 0.4);
}

TEST(GarchForecast, DecaysMonotonicallyToLongRun) {
  const GarchParams p{0.05, 0.1, 0.85};
  for (const GarchState s : {GarchState{3.0, 4.0}, GarchState{0.1, 0.2}}) {
    const auto f = garch_forecast(p, s, 400);
    const double lr = p.long_run_variance();
    for (std::size_t j = 1; j < f.size(); ++j) {
      EXPECT_LE(std::abs(f[j] - lr), std::abs(f[j - 1] - lr));
    }
    EXPECT_NEAR(f.back(), lr, 1e-6);
  }
}

TEST(GarchForecast, MatchesIteratedExpectation) {
  const GarchParams p{0.05, 0.1, 0.85};
  const GarchState s{0.8, 1.3};
  const auto f = garch_forecast(p, s, 3);
  // E[r^2_{t+j}] = sigma^2_{t+j}, so each step is omega + (alpha + beta) sigma^2.
  double v = p.omega + p.alpha * s.last_return * s.last_return + p.beta * s.last_variance;
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(f[j], v, 1e-12);
    v = p.omega + p.alpha * v + p.beta * v;
  }
  EXPECT_NEAR(horizon_log_vol(f), std::log(std::sqrt((f[0] + f[1] + f[2]) / 3.0)), 1e-15);
  EXPECT_THROW(garch_forecast(p, s, 0), InputError);
}

TEST(GarchFilter, LastStateFromRecursion) {
  const GarchParams p{0.05, 0.1, 0.85};
  const auto r = fixtures::gaussian_returns(30, 1.0, 9);
  const auto st = garch_filter(p, r);
  EXPECT_EQ(st.last_return, r.back());
  EXPECT_EQ(st.last_variance, garch_variances(p, r).back());
}

TEST(Ewma, ConstantReturnsConverge) {
  const std::vector<double> r(500, 0.02);
  EXPECT_NEAR(ewma_vol(r), 0.0004, 1e-16);
}

TEST(Ewma, LambdaNearOneKeepsInitialValue) {
  const std::vector<double> r{0.03, 0.5, -0.4, 0.2};
  EXPECT_NEAR(ewma_vol(r, 1.0 - 1e-12), 0.0009, 1e-12);
}

TEST(Ewma, FivePointHandRecursion) {
  const std::vector<double> r{0.01, -0.02, 0.015, 0.0, -0.03};
  const double l = 0.94;
  double s2 = 0.01 * 0.01;                      // sigma^2_1
  s2 = l * s2 + (1 - l) * 0.01 * 0.01;          // sigma^2_2
  s2 = l * s2 + (1 - l) * 0.02 * 0.02;          // sigma^2_3
  s2 = l * s2 + (1 - l) * 0.015 * 0.015;        // sigma^2_4
  s2 = l * s2 + (1 - l) * 0.0;                  // sigma^2_5
  s2 = l * s2 + (1 - l) * 0.03 * 0.03;          // sigma^2_6
  EXPECT_NEAR(ewma_vol(r), s2, 1e-15);
}

TEST(Ewma, ScalesWithSquare) {
  const auto r = fixtures::gaussian_returns(60, 0.01, 2);
  std::vector<double> s = r;
  for (auto& x : s) x *= 3.0;
  EXPECT_NEAR(ewma_vol(s), 9.0 * ewma_vol(r), 1e-15);
  EXPECT_THROW(ewma_vol(std::vector<double>{}), InputError);
  EXPECT_THROW(ewma_vol(r, 1.0), InputError);
}

TEST(HistoricalVar, ConstantWindow) {
  const std::vector<double> r(40, -0.013);
  EXPECT_EQ(historical_var(r), -0.013);
}

TEST(HistoricalVar, FifthOfHundred) {
  std::vector<double> r(100);
  for (std::size_t i = 0; i < 100; ++i) r[i] = -0.05 + 0.001 * static_cast<double>(i);
  std::mt19937_64 rng(1);
  std::shuffle(r.begin(), r.end(), rng);
  EXPECT_DOUBLE_EQ(historical_var(r), -0.05 + 0.004);
}

TEST(HistoricalVar, AppendingAboveKeepsQuantile) {
  auto r = fixtures::gaussian_returns(101, 0.01, 3);
  const double q = historical_var(r);
  ASSERT_EQ(lower_quantile_rank(101, 0.05), 6u);
  // ceil(0.05 * N) stays 6 up to N = 120.
  for (int i = 0; i < 19; ++i) {
    r.push_back(q + 0.001 * (i + 1));
    EXPECT_EQ(historical_var(r), q);
  }
}

TEST(HistoricalVar, MonotoneUnderLowering) {
  const auto r = fixtures::gaussian_returns(250, 0.01, 4);
  const double q = historical_var(r);
  for (std::size_t i = 0; i < r.size(); i += 7) {
    auto s = r;
    s[i] -= 0.05;
    EXPECT_LE(historical_var(s), q);
  }
}

TEST(HistoricalVar, WindowTooShort) {
  const std::vector<double> r(19, 0.01);
  EXPECT_THROW(historical_var(r), InputError);
  EXPECT_NO_THROW(historical_var(std::vector<double>(20, 0.01)));
}

TEST(NormalQuantile, KnownValues) {
  EXPECT_NEAR(normal_quantile(0.05), -1.6448536269514722, 1e-12);
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_THROW(normal_quantile(1.0), InputError);
}
