#include "pregrasp/nn/adam.hpp"

#include <cmath>

namespace pregrasp::nn {

AdamState AdamState::like(const MlpParams& params) {
  AdamState s;
  for (const Matrix* t : params.tensors()) {
    s.m.push_back(Matrix::Zero(t->rows(), t->cols()));
    s.v.push_back(Matrix::Zero(t->rows(), t->cols()));
  }
  return s;
}

AdamState AdamState::scalar() {
  AdamState s;
  s.m.push_back(Matrix::Zero(1, 1));
  s.v.push_back(Matrix::Zero(1, 1));
  return s;
}

void adam_step(AdamState& s, MlpParams& params, const MlpGrads& grads, double lr) {
  const auto ps = params.tensors();
  const auto gs = grads.tensors();
  for (const Matrix* g : gs) {
    if (!g->allFinite()) throw NonFiniteGradient("adam_step received a non-finite gradient");
  }
  s.step += 1;
  const double c1 = 1.0 - std::pow(s.config.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.config.beta2, static_cast<double>(s.step));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Matrix& m = s.m[i];
    Matrix& v = s.v[i];
    m = s.config.beta1 * m + (1.0 - s.config.beta1) * (*gs[i]);
    v = (s.config.beta2 * v.array() + (1.0 - s.config.beta2) * gs[i]->array().square()).matrix();
    ps[i]->array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + s.config.eps);
  }
}

double adam_step_scalar(AdamState& s, double& param, double grad, double lr) {
  if (!std::isfinite(grad)) throw NonFiniteGradient("scalar adam received a non-finite gradient");
  s.step += 1;
  double& m = s.m[0](0, 0);
  double& v = s.v[0](0, 0);
  m = s.config.beta1 * m + (1.0 - s.config.beta1) * grad;
  v = s.config.beta2 * v + (1.0 - s.config.beta2) * grad * grad;
  const double mhat = m / (1.0 - std::pow(s.config.beta1, static_cast<double>(s.step)));
  const double vhat = v / (1.0 - std::pow(s.config.beta2, static_cast<double>(s.step)));
  const double delta = -lr * mhat / (std::sqrt(vhat) + s.config.eps);
  param += delta;
  return delta;
}

}  // namespace pregrasp::nn
