#pragma once

#include <cstdint>
#include <vector>

#include "pregrasp/nn/mlp.hpp"

namespace pregrasp::nn {

struct NonFiniteGradient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment accumulators mirroring a parameter set.
struct AdamState {
  std::vector<Matrix> m, v;
  std::int64_t step = 0;
  AdamConfig config;

  static AdamState like(const MlpParams& params);
  static AdamState scalar();
};

// Standard bias-corrected Adam update, in place. Throws NonFiniteGradient.
void adam_step(AdamState& state, MlpParams& params, const MlpGrads& grads, double learning_rate);

// Scalar variant (used for the temperature parameter). Returns the update.
double adam_step_scalar(AdamState& state, double& param, double grad, double learning_rate);

}  // namespace pregrasp::nn
