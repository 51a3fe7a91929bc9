#include "pregrasp/nn/mlp.hpp"

#include <cmath>

namespace pregrasp::nn {
namespace {

Matrix uniform_matrix(int rows, int cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      m(r, c) = rng.uniform(-bound, bound);
    }
  }
  return m;
}

}  // namespace

std::size_t MlpParams::param_count() const {
  std::size_t n = 0;
  for (const Matrix* t : tensors()) n += static_cast<std::size_t>(t->size());
  return n;
}

bool MlpParams::finite() const {
  for (const Matrix* t : tensors()) {
    if (!t->allFinite()) return false;
  }
  return true;
}

MlpParams mlp_init(const MlpLayout& layout, Rng& rng) {
  if (layout.input <= 0 || layout.hidden <= 0 || layout.output <= 0) {
    throw InvalidLayout("layer widths must be positive");
  }
  MlpParams p;
  p.layout = layout;
  // Uniform(-sqrt(3/fan_in), sqrt(3/fan_in)) has variance exactly 1/fan_in.
  p.w1 = uniform_matrix(layout.hidden, layout.input, std::sqrt(3.0 / layout.input), rng);
  p.b1 = Matrix::Zero(layout.hidden, 1);
  p.w2 = uniform_matrix(layout.hidden, layout.hidden, std::sqrt(3.0 / layout.hidden), rng);
  p.b2 = Matrix::Zero(layout.hidden, 1);
  p.w3 = uniform_matrix(layout.output, layout.hidden, std::sqrt(3.0 / layout.hidden), rng);
  p.b3 = Matrix::Zero(layout.output, 1);
  return p;
}

Matrix mlp_forward(const MlpParams& p, const Matrix& input, MlpCache* cache) {
  if (input.rows() != p.layout.input) {
    throw ShapeMismatch("forward input rows do not match the layout");
  }
  if (!input.allFinite()) throw NonFiniteInput("forward input is not finite");

  Matrix h1 = ((p.w1 * input).colwise() + p.b1.col(0)).array().tanh().matrix();
  Matrix h2 = ((p.w2 * h1).colwise() + p.b2.col(0)).array().tanh().matrix();
  Matrix out = (p.w3 * h2).colwise() + p.b3.col(0);
  if (cache) {
    cache->input = input;
    cache->h1 = std::move(h1);
    cache->h2 = std::move(h2);
  }
  return out;
}

MlpGrads mlp_backward(const MlpParams& p, const MlpCache& cache, const Matrix& out_grad) {
  if (out_grad.rows() != p.layout.output || out_grad.cols() != cache.input.cols()) {
    throw ShapeMismatch("backward out_grad shape does not match the cache");
  }
  if (!out_grad.allFinite()) throw NonFiniteInput("backward out_grad is not finite");

  MlpGrads g;
  g.w3.noalias() = out_grad * cache.h2.transpose();
  g.b3 = out_grad.rowwise().sum();

  Matrix dz2 = (p.w3.transpose() * out_grad).array() * (1.0 - cache.h2.array().square());
  g.w2.noalias() = dz2 * cache.h1.transpose();
  g.b2 = dz2.rowwise().sum();

  Matrix dz1 = (p.w2.transpose() * dz2).array() * (1.0 - cache.h1.array().square());
  g.w1.noalias() = dz1 * cache.input.transpose();
  g.b1 = dz1.rowwise().sum();

  g.input.noalias() = p.w1.transpose() * dz1;
  return g;
}

}  // namespace pregrasp::nn
