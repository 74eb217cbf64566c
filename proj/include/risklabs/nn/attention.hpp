#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "risklabs/nn/tensor.hpp"

namespace risklabs::nn {

/// Multi-head attention pooling of a variable number of segments into one
/// vector. Each head scores segment keys against a learned query, softmaxes
/// over segments and averages the projected values; heads are concatenated
/// and mapped through an output projection (no bias).
///
/// Segments are processed in lexicographic order of their feature rows, so
/// every sum runs in the same order whatever order the caller supplies and
/// the result is exactly permutation invariant.
class AttentionPool {
 public:
  struct Tape {
    std::vector<std::size_t> order;  // canonical position -> caller row
    Tensor2 inputs;                  // canonical order
    Tensor2 keys;                    // n x heads*key_dim
    Tensor2 values;                  // n x heads*value_dim
    Tensor2 weights;                 // heads x n, canonical order
    Vector pooled;                   // heads*value_dim
  };

  AttentionPool() = default;
  AttentionPool(const std::string& name, std::size_t input_dim, std::size_t heads, std::size_t key_dim,
                std::size_t value_dim, std::size_t output_dim)
      : query(name + ".query", heads, key_dim),
        key(name + ".key", heads * key_dim, input_dim),
        value(name + ".value", heads * value_dim, input_dim),
        output(name + ".output", output_dim, heads * value_dim),
        heads_(heads),
        key_dim_(key_dim),
        value_dim_(value_dim) {}

  void init(Rng& rng) {
    glorot_uniform(query.value, key_dim_, 1, rng);
    glorot_uniform(key.value, input_dim(), key_dim_, rng);
    glorot_uniform(value.value, input_dim(), value_dim_, rng);
    glorot_uniform(output.value, heads_ * value_dim_, output_dim(), rng);
  }

  std::size_t input_dim() const { return key.value.cols(); }
  std::size_t output_dim() const { return output.value.rows(); }
  std::size_t heads() const { return heads_; }

  Vector forward(const Tensor2& segments, Tape* tape = nullptr) const {
    Tape local;
    Tape& tp = tape ? *tape : local;
    run(segments, tp);
    return matvec(output.value, tp.pooled);
  }

  /// Softmax weights per head (heads x n), columns in the caller's row order.
  Tensor2 attention_weights(const Tensor2& segments) const {
    Tape tp;
    run(segments, tp);
    Tensor2 out(heads_, segments.rows());
    for (std::size_t h = 0; h < heads_; ++h) {
      for (std::size_t i = 0; i < tp.order.size(); ++i) out(h, tp.order[i]) = tp.weights(h, i);
    }
    return out;
  }

  /// Accumulates parameter gradients; returns dL/d(segments) in the caller's row order.
  Tensor2 backward(const Tape& tp, std::span<const double> dy) {
    require_len(dy.size(), output_dim(), "attention backward");
    const std::size_t n = tp.order.size(), D = input_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(key_dim_));
    outer_acc(output.grad, dy, tp.pooled);
    Vector dpooled(heads_ * value_dim_, 0.0);
    gemv_t_acc(output.value, dy, dpooled);

    Tensor2 dx(n, D);
    Vector da(n);
    for (std::size_t h = 0; h < heads_; ++h) {
      const double* dp = dpooled.data() + h * value_dim_;
      for (std::size_t i = 0; i < n; ++i) {
        const auto x = tp.inputs.row(i);
        const double a = tp.weights(h, i);
        const double* v = tp.values.row(i).data() + h * value_dim_;
        double d = 0.0;
        for (std::size_t c = 0; c < value_dim_; ++c) d += dp[c] * v[c];
        da[i] = d;
        for (std::size_t c = 0; c < value_dim_; ++c) {
          const double g = a * dp[c];
          double* wrow = value.grad.row(h * value_dim_ + c).data();
          const double* vrow = value.value.row(h * value_dim_ + c).data();
          for (std::size_t e = 0; e < D; ++e) {
            wrow[e] += g * x[e];
            dx(i, e) += g * vrow[e];
          }
        }
      }
      double mean_da = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean_da += tp.weights(h, i) * da[i];
      for (std::size_t i = 0; i < n; ++i) {
        const double ds = tp.weights(h, i) * (da[i] - mean_da) * scale;
        if (ds == 0.0) continue;
        const auto x = tp.inputs.row(i);
        const double* k = tp.keys.row(i).data() + h * key_dim_;
        for (std::size_t c = 0; c < key_dim_; ++c) {
          query.grad(h, c) += ds * k[c];
          const double g = ds * query.value(h, c);
          double* wrow = key.grad.row(h * key_dim_ + c).data();
          const double* krow = key.value.row(h * key_dim_ + c).data();
          for (std::size_t e = 0; e < D; ++e) {
            wrow[e] += g * x[e];
            dx(i, e) += g * krow[e];
          }
        }
      }
    }
    Tensor2 out(n, D);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(dx.row(i).begin(), dx.row(i).end(), out.row(tp.order[i]).begin());
    }
    return out;
  }

  void collect(std::vector<Param*>& out) {
    out.push_back(&query);
    out.push_back(&key);
    out.push_back(&value);
    out.push_back(&output);
  }

  Param query;
  Param key;
  Param value;
  Param output;

 private:
  void run(const Tensor2& segments, Tape& tp) const {
    const std::size_t n = segments.rows(), D = input_dim();
    if (n == 0) throw InputError("attention pool needs at least one segment");
    if (segments.cols() != D) {
      throw InputError("attention pool: segments " + segments.shape() + " vs key projection " + key.value.shape());
    }
    tp.order.resize(n);
    std::iota(tp.order.begin(), tp.order.end(), std::size_t{0});
    std::stable_sort(tp.order.begin(), tp.order.end(), [&](std::size_t a, std::size_t b) {
      const auto ra = segments.row(a), rb = segments.row(b);
      return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    tp.inputs = Tensor2(n, D);
    tp.keys = Tensor2(n, heads_ * key_dim_);
    tp.values = Tensor2(n, heads_ * value_dim_);
    for (std::size_t i = 0; i < n; ++i) {
      const auto src = segments.row(tp.order[i]);
      std::copy(src.begin(), src.end(), tp.inputs.row(i).begin());
      gemv_acc(key.value, src, tp.keys.row(i));
      gemv_acc(value.value, src, tp.values.row(i));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(key_dim_));
    tp.weights = Tensor2(heads_, n);
    tp.pooled.assign(heads_ * value_dim_, 0.0);
    Vector score(n);
    for (std::size_t h = 0; h < heads_; ++h) {
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double* k = tp.keys.row(i).data() + h * key_dim_;
        double s = 0.0;
        for (std::size_t c = 0; c < key_dim_; ++c) s += query.value(h, c) * k[c];
        score[i] = s * scale;
        top = std::max(top, score[i]);
      }
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        score[i] = std::exp(score[i] - top);
        total += score[i];
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double a = score[i] / total;
        tp.weights(h, i) = a;
        const double* v = tp.values.row(i).data() + h * value_dim_;
        for (std::size_t c = 0; c < value_dim_; ++c) tp.pooled[h * value_dim_ + c] += a * v[c];
      }
    }
  }

  std::size_t heads_ = 0;
  std::size_t key_dim_ = 0;
  std::size_t value_dim_ = 0;
};

}  // namespace risklabs::nn
