#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "risklabs/nn/tensor.hpp"

namespace risklabs::nn {

enum class Activation { kIdentity, kTanh, kRelu };

inline const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
  }
  return "identity";
}

inline Activation parse_activation(const std::string& s) {
  if (s == "identity") return Activation::kIdentity;
  if (s == "tanh") return Activation::kTanh;
  if (s == "relu") return Activation::kRelu;
  throw InputError("unknown activation '" + s + "'");
}

/// y = act(W x + b)
class DenseLayer {
 public:
  struct Tape {
    Vector input;
    Vector output;
  };

  DenseLayer() = default;
  DenseLayer(const std::string& name, std::size_t in, std::size_t out, Activation act)
      : weights(name + ".weights", out, in), bias(name + ".bias", out, 1), activation(act) {}

  void init(Rng& rng) {
    glorot_uniform(weights.value, in_dim(), out_dim(), rng);
    bias.value.fill(0.0);
  }

  std::size_t in_dim() const { return weights.value.cols(); }
  std::size_t out_dim() const { return weights.value.rows(); }

  Vector forward(std::span<const double> x, Tape* tape = nullptr) const {
    if (x.size() != in_dim()) {
      throw InputError("dense '" + weights.name + "': weights " + weights.value.shape() + " vs input " +
                       shape_str(x.size(), 1));
    }
    Vector y(bias.value.values());
    gemv_acc(weights.value, x, y);
    for (auto& v : y) {
      if (activation == Activation::kTanh) v = std::tanh(v);
      else if (activation == Activation::kRelu) v = v > 0.0 ? v : 0.0;
    }
    if (tape) {
      tape->input.assign(x.begin(), x.end());
      tape->output = y;
    }
    return y;
  }

  /// Accumulates parameter gradients and returns dL/dx.
  Vector backward(const Tape& tape, std::span<const double> dy) {
    require_len(dy.size(), out_dim(), "dense backward");
    Vector dz(dy.begin(), dy.end());
    for (std::size_t i = 0; i < dz.size(); ++i) {
      if (activation == Activation::kTanh) dz[i] *= 1.0 - tape.output[i] * tape.output[i];
      else if (activation == Activation::kRelu) dz[i] = tape.output[i] > 0.0 ? dz[i] : 0.0;
    }
    outer_acc(weights.grad, dz, tape.input);
    for (std::size_t i = 0; i < dz.size(); ++i) bias.grad[i] += dz[i];
    Vector dx(in_dim(), 0.0);
    gemv_t_acc(weights.value, dz, dx);
    return dx;
  }

  void collect(std::vector<Param*>& out) {
    out.push_back(&weights);
    out.push_back(&bias);
  }

  Param weights;
  Param bias;
  Activation activation = Activation::kIdentity;
};

}  // namespace risklabs::nn
