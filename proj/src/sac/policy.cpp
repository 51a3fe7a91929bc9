#include "pregrasp/sac/policy.hpp"

#include <cmath>

namespace pregrasp::sac {
namespace {

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// log(1 - tanh(u)^2) evaluated stably for large |u|.
double log_one_minus_tanh_sq(double u) {
  return 2.0 * (std::log(2.0) - u - softplus(-2.0 * u));
}

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)

}  // namespace

nn::Matrix observation_matrix(const env::Observation& obs) {
  nn::Matrix m(kObservationDim, 1);
  const auto a = obs.as_array();
  for (int i = 0; i < kObservationDim; ++i) m(i, 0) = a[i];
  return m;
}

ActorEval actor_eval(const nn::MlpParams& actor, const nn::Matrix& observations) {
  ActorEval e;
  nn::Matrix out = nn::mlp_forward(actor, observations, &e.cache);
  e.mean = out.topRows(kActionDim);
  e.raw_log_std = out.bottomRows(kActionDim);
  e.log_std = e.raw_log_std.array().min(kLogStdMax).max(kLogStdMin);
  return e;
}

SquashedBatch squash_with_noise(const ActorEval& eval, const nn::Matrix& eps) {
  SquashedBatch s;
  s.eps = eps;
  const nn::Matrix sigma = eval.log_std.array().exp();
  s.u = eval.mean + (sigma.array() * eps.array()).matrix();
  s.t = s.u.array().tanh();
  const Eigen::Index n = eps.cols();
  s.log_prob.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    double lp = 0.0;
    for (int r = 0; r < kActionDim; ++r) {
      lp += -0.5 * eps(r, c) * eps(r, c) - eval.log_std(r, c) - kHalfLog2Pi -
            log_one_minus_tanh_sq(s.u(r, c));
    }
    s.log_prob(c) = lp;
  }
  return s;
}

SquashedBatch sample_squashed(const ActorEval& eval, Rng& rng) {
  nn::Matrix eps(kActionDim, eval.mean.cols());
  for (Eigen::Index c = 0; c < eps.cols(); ++c) {
    for (int r = 0; r < kActionDim; ++r) eps(r, c) = rng.normal();
  }
  return squash_with_noise(eval, eps);
}

double log_bound_volume() {
  double s = 0.0;
  for (double b : env::kActionBounds) s += std::log(b);
  return s;
}

env::Action to_physical(const Eigen::Vector3d& normalized) {
  return {normalized(0) * env::kActionBounds[0], normalized(1) * env::kActionBounds[1],
          normalized(2) * env::kActionBounds[2]};
}

Eigen::Vector3d to_normalized(const env::Action& action) {
  return {action.dy / env::kActionBounds[0], action.dz / env::kActionBounds[1],
          action.dpitch / env::kActionBounds[2]};
}

PolicySample policy_sample(const nn::MlpParams& actor, const env::Observation& obs, Rng& rng) {
  const ActorEval eval = actor_eval(actor, observation_matrix(obs));
  const SquashedBatch s = sample_squashed(eval, rng);
  PolicySample out;
  out.action = to_physical(s.t.col(0));
  out.log_prob = s.log_prob(0) - log_bound_volume();
  return out;
}

env::Action policy_mean(const nn::MlpParams& actor, const env::Observation& obs) {
  const ActorEval eval = actor_eval(actor, observation_matrix(obs));
  const Eigen::Vector3d t = eval.mean.col(0).array().tanh();
  return to_physical(t);
}

}  // namespace pregrasp::sac
