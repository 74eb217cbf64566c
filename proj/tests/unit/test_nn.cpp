#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "risklabs/nn/adam.hpp"
#include "risklabs/nn/attention.hpp"
#include "risklabs/nn/dense.hpp"
#include "risklabs/nn/grad_check.hpp"
#include "risklabs/nn/loss.hpp"
#include "risklabs/nn/recurrent.hpp"
#include "risklabs/nn/serialize.hpp"

using namespace risklabs;
using namespace risklabs::nn;

namespace {

Vector random_vector(std::size_t n, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> z(0.0, sd);
  Vector v(n);
  for (auto& x : v) x = z(rng);
  return v;
}

Tensor2 random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  return Tensor2(r, c, random_vector(r * c, rng));
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

Tensor2 rows_in_order(const Tensor2& m, const std::vector<std::size_t>& order) {
  Tensor2 out(m.rows(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(i, c) = m(order[i], c);
  }
  return out;
}

}  // namespace

TEST(Dense, IdentityWeightsPassInputThrough) {
  DenseLayer layer("d", 3, 3, Activation::kIdentity);
  for (std::size_t i = 0; i < 3; ++i) layer.weights.value(i, i) = 1.0;
  const Vector x{0.5, -2.0, 3.25};
  EXPECT_EQ(layer.forward(x), x);
  EXPECT_THROW(layer.forward(Vector{1.0, 2.0}), InputError);
}

TEST(Dense, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(1);
  for (auto act : {Activation::kTanh, Activation::kIdentity, Activation::kRelu}) {
    Rng init(2);
    DenseLayer layer("d", 6, 4, act);
    layer.init(init);
    for (auto& b : layer.bias.value.flat()) b = 0.3;  // keeps relu units away from the kink
    const auto x = random_vector(6, rng);
    const auto c = random_vector(4, rng);
    std::vector<Param*> ps;
    layer.collect(ps);
    const auto report = grad_check(
        ps, [&] { return dot(layer.forward(x), c); },
        [&] {
          DenseLayer::Tape t;
          layer.forward(x, &t);
          layer.backward(t, c);
        });
    EXPECT_TRUE(report.passed) << activation_name(act) << " worst " << report.worst_param << " "
                               << report.worst_rel_error;
  }
}

TEST(Dense, InputGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  Rng init(4);
  DenseLayer layer("d", 5, 3, Activation::kTanh);
  layer.init(init);
  Param input("input", 5, 1);
  input.value = Tensor2(5, 1, random_vector(5, rng));
  const auto c = random_vector(3, rng);
  const auto report = grad_check(
      {&input}, [&] { return dot(layer.forward(input.value.flat()), c); },
      [&] {
        DenseLayer::Tape t;
        layer.forward(input.value.flat(), &t);
        const auto dx = layer.backward(t, c);
        for (std::size_t i = 0; i < dx.size(); ++i) input.grad[i] = dx[i];
      });
  EXPECT_TRUE(report.passed) << report.worst_rel_error;
}

TEST(Recurrent, BackpropThroughTimeMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  for (std::size_t len : {1u, 5u, 12u}) {
    Rng init(6);
    RecurrentCell cell("cell", 2, 3);
    cell.init(init);
    const auto seq = random_matrix(len, 2, rng);
    const auto c = random_vector(3, rng);
    std::vector<Param*> ps;
    cell.collect(ps);
    const auto report = grad_check(
        ps, [&] { return dot(cell.forward(seq), c); },
        [&] {
          RecurrentCell::Tape t;
          cell.forward(seq, &t);
          cell.backward(t, c);
        });
    EXPECT_TRUE(report.passed) << "len " << len << " worst " << report.worst_param << " " << report.worst_rel_error;
  }
}

TEST(Recurrent, RejectsWrongInputWidth) {
  RecurrentCell cell("cell", 2, 3);
  EXPECT_THROW(cell.forward(Tensor2(4, 3)), InputError);
}

TEST(Attention, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 4u}) {
    Rng init(8);
    AttentionPool pool("pool", 5, 2, 3, 2, 4);
    pool.init(init);
    const auto seg = random_matrix(n, 5, rng);
    const auto c = random_vector(4, rng);
    std::vector<Param*> ps;
    pool.collect(ps);
    const auto report = grad_check(
        ps, [&] { return dot(pool.forward(seg), c); },
        [&] {
          AttentionPool::Tape t;
          pool.forward(seg, &t);
          pool.backward(t, c);
        });
    EXPECT_TRUE(report.passed) << n << " segments, worst " << report.worst_param << " " << report.worst_rel_error;
  }
}

TEST(Attention, WeightsAreASoftmaxPerHead) {
  std::mt19937_64 rng(9);
  Rng init(10);
  AttentionPool pool("pool", 6, 3, 4, 2, 5);
  pool.init(init);
  const auto seg = random_matrix(7, 6, rng);
  const Tensor2 w = pool.attention_weights(seg);
  ASSERT_EQ(w.rows(), 3u);
  ASSERT_EQ(w.cols(), 7u);
  for (std::size_t h = 0; h < w.rows(); ++h) {
    double sum = 0.0;
    for (std::size_t i = 0; i < w.cols(); ++i) {
      EXPECT_GT(w(h, i), 0.0);
      sum += w(h, i);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Attention, SingleSegmentPoolsToItsProjectedValue) {
  std::mt19937_64 rng(11);
  Rng init(12);
  AttentionPool pool("pool", 4, 2, 3, 2, 3);
  pool.init(init);
  const auto x = random_vector(4, rng);
  const Tensor2 seg(1, 4, x);
  const Tensor2 w = pool.attention_weights(seg);
  EXPECT_EQ(w(0, 0), 1.0);
  EXPECT_EQ(w(1, 0), 1.0);
  // With one segment every head returns V x, so the output is W_o V x.
  const Vector expected = matvec(pool.output.value, matvec(pool.value.value, x));
  const Vector got = pool.forward(seg);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-14);
}

TEST(Attention, PermutationInvariantBitwise) {
  std::mt19937_64 rng(13);
  Rng init(14);
  AttentionPool pool("pool", 5, 2, 3, 3, 4);
  pool.init(init);
  const auto seg = random_matrix(6, 5, rng);
  const Vector base = pool.forward(seg);
  std::vector<std::size_t> order(6);
  std::iota(order.begin(), order.end(), 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    EXPECT_EQ(pool.forward(rows_in_order(seg, order)), base);
  }
}

TEST(GradCheck, CorruptedGradientIsCaughtAndNamed) {
  std::mt19937_64 rng(15);
  Rng init(16);
  DenseLayer a("first", 4, 3, Activation::kTanh);
  DenseLayer b("second", 3, 2, Activation::kIdentity);
  a.init(init);
  b.init(init);
  const auto x = random_vector(4, rng);
  const auto c = random_vector(2, rng);
  std::vector<Param*> ps;
  a.collect(ps);
  b.collect(ps);
  auto loss = [&] { return dot(b.forward(a.forward(x)), c); };
  auto backprop = [&](bool corrupt) {
    DenseLayer::Tape ta, tb;
    b.forward(a.forward(x, &ta), &tb);
    const auto dh = b.backward(tb, c);
    a.backward(ta, dh);
    if (corrupt) {
      for (auto& g : a.weights.grad.flat()) g *= 2.0;
    }
  };
  EXPECT_TRUE(grad_check(ps, loss, [&] { backprop(false); }).passed);
  const auto bad = grad_check(ps, loss, [&] { backprop(true); });
  EXPECT_FALSE(bad.passed);
  EXPECT_EQ(bad.worst_param, "first.weights");
  for (const auto& p : bad.params) EXPECT_EQ(p.passed, p.name != "first.weights") << p.name;
}

TEST(Loss, MseExamples) {
  const auto r = mse_loss(Vector{1.0, 2.0}, Vector{1.0, 4.0});
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_DOUBLE_EQ(r.grad[0], 0.0);
  EXPECT_DOUBLE_EQ(r.grad[1], -2.0);
  EXPECT_EQ(mse_loss(Vector{0.3, -0.7}, Vector{0.3, -0.7}).value, 0.0);
  EXPECT_THROW(mse_loss(Vector{1.0}, Vector{1.0, 2.0}), InputError);
}

TEST(Loss, PinballExamples) {
  // Realization below the quantile costs (1 - alpha) per unit, above costs alpha.
  EXPECT_NEAR(pinball(-0.01, -0.02, 0.05), 0.95 * 0.01, 1e-15);
  EXPECT_NEAR(pinball(-0.01, 0.03, 0.05), 0.05 * 0.04, 1e-15);
  EXPECT_EQ(pinball(0.2, 0.2, 0.05), 0.0);
  EXPECT_EQ(pinball_grad(0.2, 0.2, 0.05), 0.95);
  EXPECT_EQ(pinball_grad(0.2, 0.3, 0.05), -0.05);
  EXPECT_THROW(pinball_loss(Vector{0.0}, Vector{0.0}, 1.0), InputError);
  EXPECT_THROW(pinball_loss(Vector{0.0}, Vector{0.0}, 0.0), InputError);
}

TEST(Loss, PinballAtMedianIsHalfTheMeanAbsoluteError) {
  std::mt19937_64 rng(17);
  const auto q = random_vector(50, rng);
  const auto y = random_vector(50, rng);
  double mae = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) mae += std::abs(q[i] - y[i]);
  mae /= static_cast<double>(q.size());
  EXPECT_NEAR(pinball_loss(q, y, 0.5).value, 0.5 * mae, 1e-15);
}

TEST(Loss, PinballIsConvexInTheQuantile) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto y = random_vector(30, rng);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = 0.01 + 0.98 * u(rng);
    const Vector q1(30, 3.0 * (u(rng) - 0.5));
    const Vector q2(30, 3.0 * (u(rng) - 0.5));
    const double lam = u(rng);
    Vector mix(30);
    for (std::size_t i = 0; i < 30; ++i) mix[i] = lam * q1[i] + (1.0 - lam) * q2[i];
    const double lhs = pinball_loss(mix, y, alpha).value;
    const double rhs = lam * pinball_loss(q1, y, alpha).value + (1.0 - lam) * pinball_loss(q2, y, alpha).value;
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

TEST(Loss, PinballMinimizerIsTheEmpiricalQuantile) {
  std::mt19937_64 rng(21);
  const auto y = random_vector(200, rng);
  auto sorted = y;
  std::sort(sorted.begin(), sorted.end());
  for (double alpha : {0.05, 0.25, 0.5, 0.9}) {
    // Brute-force over a dense grid spanning the data.
    double best_q = 0.0, best = INFINITY;
    for (int k = 0; k <= 40000; ++k) {
      const double q = sorted.front() + (sorted.back() - sorted.front()) * k / 40000.0;
      const double l = pinball_loss(Vector(y.size(), q), y, alpha).value;
      if (l < best) {
        best = l;
        best_q = q;
      }
    }
    const std::size_t idx = static_cast<std::size_t>(std::ceil(alpha * 200.0)) - 1;
    // alpha * N is an integer here, so every q in [sorted[idx], sorted[idx+1]] is optimal.
    EXPECT_GE(best_q, sorted[idx] - 1e-3) << alpha;
    EXPECT_LE(best_q, sorted[idx + 1] + 1e-3) << alpha;
  }
}

TEST(Adam, ConvergesOnAScalarQuadratic) {
  Param x("x", 1, 1);
  AdamOptimizer opt({&x}, AdamConfig{0.05});
  for (int step = 0; step < 500; ++step) {
    opt.zero_grad();
    x.grad[0] = 2.0 * (x.value[0] - 3.0);
    opt.step();
  }
  EXPECT_NEAR(x.value[0], 3.0, 1e-3);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  // Bias correction makes the first update exactly lr * sign(g) up to eps.
  Vector p{1.0, -1.0};
  AdamState s;
  adam_step(p, Vector{4.0, -0.001}, s, AdamConfig{0.1});
  EXPECT_NEAR(p[0], 0.9, 1e-9);
  EXPECT_NEAR(p[1], -0.9, 1e-5);
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  Vector p{0.25, -3.0, 7.5};
  const Vector before = p;
  AdamState s;
  for (int i = 0; i < 10; ++i) adam_step(p, Vector(3, 0.0), s, AdamConfig{});
  EXPECT_EQ(p, before);
}

TEST(Adam, IsDeterministic) {
  auto run = [] {
    Vector p{0.5, 0.5};
    AdamState s;
    for (int i = 0; i < 100; ++i) {
      const Vector g{std::sin(p[0] * 3.0), p[1] * p[1] - 1.0};
      adam_step(p, g, s, AdamConfig{0.02});
    }
    return p;
  };
  EXPECT_EQ(run(), run());
}

TEST(Serialize, RoundTripIsExact) {
  Rng init(23);
  DenseLayer layer("d", 3, 2, Activation::kTanh);
  RecurrentCell cell("cell", 1, 2);
  layer.init(init);
  cell.init(init);
  std::vector<Param*> ps;
  layer.collect(ps);
  cell.collect(ps);
  const auto doc = nlohmann::json::parse(params_to_json(ps).dump());

  Rng other(99);
  DenseLayer layer2("d", 3, 2, Activation::kTanh);
  RecurrentCell cell2("cell", 1, 2);
  layer2.init(other);
  cell2.init(other);
  std::vector<Param*> ps2;
  layer2.collect(ps2);
  cell2.collect(ps2);
  params_from_json(doc, ps2);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    EXPECT_EQ(ps[i]->value.values(), ps2[i]->value.values()) << ps[i]->name;
  }
}

TEST(Serialize, RejectsShapeAndNameMismatches) {
  DenseLayer layer("d", 3, 2, Activation::kTanh);
  std::vector<Param*> ps;
  layer.collect(ps);
  const auto doc = params_to_json(ps);

  DenseLayer wider("d", 4, 2, Activation::kTanh);
  std::vector<Param*> wide;
  wider.collect(wide);
  EXPECT_THROW(params_from_json(doc, wide), InputError);

  auto extra = doc;
  extra["stray"] = doc["d.bias"];
  EXPECT_THROW(params_from_json(extra, ps), InputError);

  auto missing = doc;
  missing.erase("d.bias");
  EXPECT_THROW(params_from_json(missing, ps), InputError);
}
