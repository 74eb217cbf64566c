#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "risklabs/nn/tensor.hpp"

namespace risklabs::nn {

struct ParamCheck {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;  // at worst_index
  double numeric = 0.0;
  bool passed = true;
};

struct GradCheckReport {
  std::vector<ParamCheck> params;
  bool passed = true;
  std::string worst_param;
  double worst_rel_error = 0.0;
};

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

/// Compares analytic gradients with central differences.
///
/// `loss` evaluates the scalar objective at the current parameter values.
/// `backprop` must leave d(loss)/d(param) in every Param::grad; the checker
/// zeroes the gradients before calling it. Inputs can be checked by wrapping
/// them in a Param.
inline GradCheckReport grad_check(const std::vector<Param*>& params, const std::function<double()>& loss,
                                  const std::function<void()>& backprop, double tolerance = 1e-4,
                                  double step = 1e-5) {
  for (auto* p : params) p->zero_grad();
  backprop();
  GradCheckReport report;
  for (auto* p : params) {
    ParamCheck pc;
    pc.name = p->name;
    auto values = p->value.flat();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + step;
      const double up = loss();
      values[i] = saved - step;
      const double down = loss();
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = p->grad[i];
      const double err = relative_error(analytic, numeric);
      if (err > pc.max_rel_error || i == 0) {
        pc.max_rel_error = err;
        pc.worst_index = i;
        pc.analytic = analytic;
        pc.numeric = numeric;
      }
    }
    pc.passed = pc.max_rel_error < tolerance;
    report.passed = report.passed && pc.passed;
    if (report.worst_param.empty() || pc.max_rel_error > report.worst_rel_error) {
      report.worst_param = pc.name;
      report.worst_rel_error = pc.max_rel_error;
    }
    report.params.push_back(std::move(pc));
  }
  return report;
}

}  // namespace risklabs::nn
