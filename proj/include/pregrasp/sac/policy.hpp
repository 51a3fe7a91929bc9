#pragma once

#include "pregrasp/env/env.hpp"
#include "pregrasp/sac/networks.hpp"

namespace pregrasp::sac {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

// Batched actor head evaluation: mean and clamped log-std per column.
struct ActorEval {
  nn::Matrix mean;     // kActionDim x N
  nn::Matrix log_std;  // clamped
  nn::Matrix raw_log_std;
  nn::MlpCache cache;
};
ActorEval actor_eval(const nn::MlpParams& actor, const nn::Matrix& observations);

// Reparameterized tanh-squashed sample in the normalized [-1,1] action cube.
// log_prob is the density over the normalized cube (tanh correction only);
// the physical-bound correction is a constant handled by the callers below.
struct SquashedBatch {
  nn::Matrix eps;     // the frozen standard-normal draws
  nn::Matrix u;       // pre-squash
  nn::Matrix t;       // tanh(u) = normalized actions
  Eigen::VectorXd log_prob;
};
SquashedBatch sample_squashed(const ActorEval& eval, Rng& rng);
// Same with caller-provided noise (finite-difference tests freeze eps).
SquashedBatch squash_with_noise(const ActorEval& eval, const nn::Matrix& eps);

// Log of the constant Jacobian from the normalized cube to physical bounds.
double log_bound_volume();

env::Action to_physical(const Eigen::Vector3d& normalized);
Eigen::Vector3d to_normalized(const env::Action& action);

// Stochastic policy: action within the physical bounds (strictly), log_prob
// of the physical-action density (tanh and bound-scaling corrections).
struct PolicySample {
  env::Action action;
  double log_prob = 0.0;
};
PolicySample policy_sample(const nn::MlpParams& actor, const env::Observation& obs, Rng& rng);

// Deterministic policy bound * tanh(mean(s)).
env::Action policy_mean(const nn::MlpParams& actor, const env::Observation& obs);

nn::Matrix observation_matrix(const env::Observation& obs);

}  // namespace pregrasp::sac
