#pragma once

#include <span>
#include <string>

#include "risklabs/nn/tensor.hpp"

namespace risklabs::nn {

struct LossResult {
  double value = 0.0;
  Vector grad;  // d(value)/d(pred)
};

/// Mean of squared differences.
inline LossResult mse_loss(std::span<const double> pred, std::span<const double> target) {
  require_len(target.size(), pred.size(), "mse_loss");
  if (pred.empty()) throw InputError("mse_loss: empty input");
  const double n = static_cast<double>(pred.size());
  LossResult out;
  out.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    out.value += d * d;
    out.grad[i] = 2.0 * d / n;
  }
  out.value /= n;
  return out;
}

inline void require_quantile_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("quantile level must lie in (0,1), got " + std::to_string(alpha));
}

/// rho_alpha(y - q) for one observation.
inline double pinball(double q, double y, double alpha) {
  const double u = y - q;
  return u > 0.0 ? alpha * u : (alpha - 1.0) * u;
}

/// d rho / d q. At y == q the subgradient d rho / du = alpha - 1 is used.
inline double pinball_grad(double q, double y, double alpha) {
  return y > q ? -alpha : 1.0 - alpha;
}

/// Mean pinball loss of quantile predictions `q` against realizations `y`.
inline LossResult pinball_loss(std::span<const double> q, std::span<const double> y, double alpha) {
  require_quantile_level(alpha);
  require_len(y.size(), q.size(), "pinball_loss");
  if (q.empty()) throw InputError("pinball_loss: empty input");
  const double n = static_cast<double>(q.size());
  LossResult out;
  out.grad.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    out.value += pinball(q[i], y[i], alpha);
    out.grad[i] = pinball_grad(q[i], y[i], alpha) / n;
  }
  out.value /= n;
  return out;
}

}  // namespace risklabs::nn
