#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "risklabs/nn/tensor.hpp"

namespace risklabs::nn {

/// Four-gate LSTM cell unrolled over a whole sequence. Each gate has an
/// H x (H + in) weight acting on [h_{t-1}; x_t] and an H bias.
class RecurrentCell {
 public:
  enum Gate : std::size_t { kInput = 0, kForget = 1, kOutput = 2, kCandidate = 3 };

  struct Tape {
    std::size_t steps = 0;
    Tensor2 z;                      // [h_{t-1}; x_t] per step
    std::array<Tensor2, 4> gates;   // post-activation gate values per step
    Tensor2 cells;                  // c_0..c_T
    Tensor2 tanh_cells;             // tanh(c_t) for t = 1..T
  };

  RecurrentCell() = default;
  RecurrentCell(const std::string& name, std::size_t input_dim, std::size_t hidden_dim)
      : input_dim_(input_dim), hidden_dim_(hidden_dim) {
    static constexpr std::array<const char*, 4> kNames{"input", "forget", "output", "candidate"};
    for (std::size_t k = 0; k < 4; ++k) {
      weights[k] = Param(name + "." + kNames[k] + ".weights", hidden_dim, hidden_dim + input_dim);
      biases[k] = Param(name + "." + kNames[k] + ".bias", hidden_dim, 1);
    }
  }

  void init(Rng& rng) {
    for (std::size_t k = 0; k < 4; ++k) {
      glorot_uniform(weights[k].value, hidden_dim_ + input_dim_, hidden_dim_, rng);
      biases[k].value.fill(0.0);
    }
  }

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_dim() const { return hidden_dim_; }

  /// Final hidden state after running over the rows of `sequence` (T x in), from h = c = 0.
  Vector forward(const Tensor2& sequence, Tape* tape = nullptr) const {
    if (sequence.cols() != input_dim_) {
      throw InputError("recurrent cell: input " + sequence.shape() + " vs expected width " +
                       std::to_string(input_dim_));
    }
    const std::size_t H = hidden_dim_, T = sequence.rows(), Z = H + input_dim_;
    if (tape) {
      tape->steps = T;
      tape->z = Tensor2(T, Z);
      for (auto& g : tape->gates) g = Tensor2(T, H);
      tape->cells = Tensor2(T + 1, H);
      tape->tanh_cells = Tensor2(T, H);
    }
    Vector h(H, 0.0), c(H, 0.0), z(Z, 0.0);
    std::array<Vector, 4> a;
    for (auto& v : a) v.resize(H);
    for (std::size_t t = 0; t < T; ++t) {
      std::copy(h.begin(), h.end(), z.begin());
      const auto x = sequence.row(t);
      std::copy(x.begin(), x.end(), z.begin() + static_cast<std::ptrdiff_t>(H));
      for (std::size_t k = 0; k < 4; ++k) {
        std::copy(biases[k].value.values().begin(), biases[k].value.values().end(), a[k].begin());
        gemv_acc(weights[k].value, z, a[k]);
        for (auto& v : a[k]) v = k == kCandidate ? std::tanh(v) : 1.0 / (1.0 + std::exp(-v));
      }
      for (std::size_t j = 0; j < H; ++j) {
        c[j] = a[kForget][j] * c[j] + a[kInput][j] * a[kCandidate][j];
        const double tc = std::tanh(c[j]);
        h[j] = a[kOutput][j] * tc;
        if (tape) {
          tape->cells(t + 1, j) = c[j];
          tape->tanh_cells(t, j) = tc;
        }
      }
      if (tape) {
        std::copy(z.begin(), z.end(), tape->z.row(t).begin());
        for (std::size_t k = 0; k < 4; ++k) std::copy(a[k].begin(), a[k].end(), tape->gates[k].row(t).begin());
      }
    }
    return h;
  }

  /// Backpropagation through time from a gradient on the final hidden state.
  /// Accumulates parameter gradients; returns dL/d(sequence), T x in.
  Tensor2 backward(const Tape& tape, std::span<const double> dh_final) {
    const std::size_t H = hidden_dim_, T = tape.steps, Z = H + input_dim_;
    require_len(dh_final.size(), H, "recurrent backward");
    Tensor2 dseq(T, input_dim_);
    Vector dh(dh_final.begin(), dh_final.end()), dc(H, 0.0), dz(Z);
    std::array<Vector, 4> da;
    for (auto& v : da) v.resize(H);
    for (std::size_t step = T; step-- > 0;) {
      for (std::size_t j = 0; j < H; ++j) {
        const double i = tape.gates[kInput](step, j), f = tape.gates[kForget](step, j);
        const double o = tape.gates[kOutput](step, j), g = tape.gates[kCandidate](step, j);
        const double tc = tape.tanh_cells(step, j);
        const double c_prev = tape.cells(step, j);
        dc[j] += dh[j] * o * (1.0 - tc * tc);
        da[kOutput][j] = dh[j] * tc * o * (1.0 - o);
        da[kInput][j] = dc[j] * g * i * (1.0 - i);
        da[kCandidate][j] = dc[j] * i * (1.0 - g * g);
        da[kForget][j] = dc[j] * c_prev * f * (1.0 - f);
        dc[j] *= f;
      }
      std::fill(dz.begin(), dz.end(), 0.0);
      const auto z = tape.z.row(step);
      for (std::size_t k = 0; k < 4; ++k) {
        outer_acc(weights[k].grad, da[k], z);
        for (std::size_t j = 0; j < H; ++j) biases[k].grad[j] += da[k][j];
        gemv_t_acc(weights[k].value, da[k], dz);
      }
      std::copy(dz.begin(), dz.begin() + static_cast<std::ptrdiff_t>(H), dh.begin());
      std::copy(dz.begin() + static_cast<std::ptrdiff_t>(H), dz.end(), dseq.row(step).begin());
    }
    return dseq;
  }

  void collect(std::vector<Param*>& out) {
    for (std::size_t k = 0; k < 4; ++k) {
      out.push_back(&weights[k]);
      out.push_back(&biases[k]);
    }
  }

  std::array<Param, 4> weights;
  std::array<Param, 4> biases;

 private:
  std::size_t input_dim_ = 0;
  std::size_t hidden_dim_ = 0;
};

}  // namespace risklabs::nn
