#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "risklabs/nn/tensor.hpp"

namespace risklabs::nn {

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Vector m;
  Vector v;
  long step = 0;
};

/// One bias-corrected adaptive-moment update of `params` in place.
inline void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
                      const AdamConfig& cfg) {
  require_len(grads.size(), params.size(), "adam_step");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  require_len(state.m.size(), params.size(), "adam_step state");
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    params[i] -= cfg.lr * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + cfg.eps);
  }
}

/// Adam over a fixed list of parameters; each keeps its own moment estimates.
class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<Param*> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
    states_.resize(params_.size());
  }

  void zero_grad() {
    for (auto* p : params_) p->zero_grad();
  }

  void step() {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      adam_step(params_[i]->value.flat(), params_[i]->grad.flat(), states_[i], cfg_);
    }
  }

  AdamConfig& config() { return cfg_; }

 private:
  std::vector<Param*> params_;
  std::vector<AdamState> states_;
  AdamConfig cfg_;
};

}  // namespace risklabs::nn
