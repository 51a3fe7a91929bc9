#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <stdexcept>

#include "pregrasp/rng.hpp"

namespace pregrasp::nn {

struct InvalidLayout : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonFiniteInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Matrix = Eigen::MatrixXd;

// Fixed two-hidden-layer topology with tanh activations and a linear head.
struct MlpLayout {
  int input = 0;
  int hidden = 64;
  int output = 0;
};

struct MlpParams {
  MlpLayout layout;
  Matrix w1, b1, w2, b2, w3, b3;  // biases stored as (n, 1)

  std::array<Matrix*, 6> tensors() { return {&w1, &b1, &w2, &b2, &w3, &b3}; }
  std::array<const Matrix*, 6> tensors() const { return {&w1, &b1, &w2, &b2, &w3, &b3}; }
  std::size_t param_count() const;
  bool finite() const;
};

// Fan-in-scaled uniform weights (variance 1/fan_in), zero biases.
MlpParams mlp_init(const MlpLayout& layout, Rng& rng);

// Post-activation values needed by the backward pass.
struct MlpCache {
  Matrix input, h1, h2;
};

// Columns are samples. Throws ShapeMismatch / NonFiniteInput.
Matrix mlp_forward(const MlpParams& params, const Matrix& input, MlpCache* cache = nullptr);

struct MlpGrads {
  Matrix w1, b1, w2, b2, w3, b3;
  Matrix input;  // gradient with respect to the forward input

  std::array<const Matrix*, 6> tensors() const { return {&w1, &b1, &w2, &b2, &w3, &b3}; }
};

// Exact reverse-mode gradients of sum(output .* out_grad).
MlpGrads mlp_backward(const MlpParams& params, const MlpCache& cache, const Matrix& out_grad);

}  // namespace pregrasp::nn
