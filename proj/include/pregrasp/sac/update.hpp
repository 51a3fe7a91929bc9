#pragma once

#include <vector>

#include "pregrasp/sac/networks.hpp"
#include "pregrasp/sac/policy.hpp"
#include "pregrasp/sac/replay.hpp"

namespace pregrasp::sac {

struct NonFiniteLoss : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UpdateLosses {
  double critic1 = 0.0;
  double critic2 = 0.0;
  double actor = 0.0;
  double alpha = 0.0;
};

// Batch in matrix form (columns are transitions, actions normalized).
struct Batch {
  nn::Matrix states;       // 7 x N
  nn::Matrix actions;      // 3 x N, in [-1, 1]
  Eigen::VectorXd rewards;
  nn::Matrix next_states;  // 7 x N
  Eigen::VectorXd absorbing;  // 1 = terminal bootstrap cut

  static Batch gather(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices);
};

// Critic bootstrap target: r + gamma*(1-absorbing)*(min target Q - alpha*logpi).
Eigen::VectorXd critic_target(const Networks& nets, const Batch& batch, const SacConfig& cfg,
                              Rng& rng);

// One gradient step on both critics, the actor, and the temperature,
// followed by the polyak target update. Throws NonFiniteLoss.
UpdateLosses sac_update(Networks& nets, const Batch& batch, const SacConfig& cfg, Rng& rng);

// target <- tau * target + (1 - tau) * online, elementwise.
void polyak_update(nn::MlpParams& target, const nn::MlpParams& online, double tau);

// Actor objective on a frozen noise matrix: mean over the batch of
// alpha * log pi(a|s) - min(Q1, Q2)(s, a), a reparameterized from eps.
// Exposed so gradient checks can difference the exact same function the
// update differentiates.
struct ActorLossResult {
  double loss = 0.0;
  double mean_log_prob = 0.0;
  nn::MlpGrads gradients;
};
ActorLossResult actor_loss(const Networks& nets, const nn::Matrix& states, const nn::Matrix& eps,
                           double alpha);
double actor_loss_value(const Networks& nets, const nn::Matrix& states, const nn::Matrix& eps,
                        double alpha);

}  // namespace pregrasp::sac
