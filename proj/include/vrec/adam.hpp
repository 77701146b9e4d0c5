#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "vrec/types.hpp"

namespace vrec {

// First/second moment accumulators for Adam. Shapes must match the
// parameter vector being updated.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  explicit AdamState(std::size_t dim = 0) : m(dim, 0.0), v(dim, 0.0) {}
};

// One Adam ascent step: theta += lr * m_hat / (sqrt(v_hat) + eps).
inline void adam_ascend(std::vector<double>& theta,
                        std::span<const double> grad, AdamState& state,
                        double learning_rate) {
  if (theta.size() != grad.size() || theta.size() != state.m.size()) {
    throw ValidationError("adam: parameter/gradient/state size mismatch");
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    theta[i] += learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

}  // namespace vrec
