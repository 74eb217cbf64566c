#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "risklabs/core/errors.hpp"

namespace risklabs::nn {

using Vector = std::vector<double>;
using Rng = std::mt19937_64;

inline std::string shape_str(std::size_t rows, std::size_t cols) {
  return "(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
}

/// Dense row-major matrix of doubles.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Tensor2(std::size_t rows, std::size_t cols, Vector data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InputError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                       shape_str(rows_, cols_));
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  std::string shape() const { return shape_str(rows_, cols_); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  const Vector& values() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

inline void require_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InputError(std::string(what) + ": shape mismatch, expected " + std::to_string(want) + ", got " +
                     std::to_string(got));
  }
}

/// y += m * x, for a row-major block of `m` starting at column `col0`.
inline void gemv_acc(const Tensor2& m, std::span<const double> x, std::span<double> y, std::size_t col0 = 0) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* w = m.row(r).data() + col0;
    double acc = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) acc += w[c] * x[c];
    y[r] += acc;
  }
}

/// y = m * x with shape checking.
inline Vector matvec(const Tensor2& m, std::span<const double> x) {
  if (x.size() != m.cols()) {
    throw InputError("matvec: matrix " + m.shape() + " times vector " + shape_str(x.size(), 1));
  }
  Vector y(m.rows(), 0.0);
  gemv_acc(m, x, y);
  return y;
}

/// grad += dy (outer) x, into the block of `grad` starting at column `col0`.
inline void outer_acc(Tensor2& grad, std::span<const double> dy, std::span<const double> x, std::size_t col0 = 0) {
  for (std::size_t r = 0; r < dy.size(); ++r) {
    if (dy[r] == 0.0) continue;
    double* g = grad.row(r).data() + col0;
    for (std::size_t c = 0; c < x.size(); ++c) g[c] += dy[r] * x[c];
  }
}

/// dx += m^T dy over the block of `m` starting at column `col0`.
inline void gemv_t_acc(const Tensor2& m, std::span<const double> dy, std::span<double> dx, std::size_t col0 = 0) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (dy[r] == 0.0) continue;
    const double* w = m.row(r).data() + col0;
    for (std::size_t c = 0; c < dx.size(); ++c) dx[c] += w[c] * dy[r];
  }
}

/// A named trainable tensor and its gradient accumulator.
struct Param {
  std::string name;
  Tensor2 value;
  Tensor2 grad;

  Param() = default;
  Param(std::string n, std::size_t rows, std::size_t cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols) {}

  void zero_grad() { grad.fill(0.0); }
  std::size_t size() const { return value.size(); }
};

/// Uniform(-s, s) with s = sqrt(6 / (fan_in + fan_out)).
inline void glorot_uniform(Tensor2& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-s, s);
  for (auto& v : t.flat()) v = u(rng);
}

}  // namespace risklabs::nn
