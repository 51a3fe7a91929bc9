#pragma once

#include "pregrasp/nn/adam.hpp"
#include "pregrasp/nn/mlp.hpp"

namespace pregrasp::sac {

inline constexpr int kObservationDim = 7;
inline constexpr int kActionDim = 3;

inline nn::MlpLayout actor_layout() { return {kObservationDim, 64, 2 * kActionDim}; }
inline nn::MlpLayout critic_layout() { return {kObservationDim + kActionDim, 64, 1}; }

struct SacConfig {
  double gamma = 0.99;
  double tau = 0.995;  // target <- tau * target + (1 - tau) * online
  double learning_rate = 1e-3;
  int batch_size = 100;
  double target_entropy = -3.0;
  std::size_t replay_capacity = 300000;
  int warmup_steps = 1000;
  int updates_per_env_step = 1;
  std::int64_t total_env_steps = 300000;
  int eval_every = 5000;
  int eval_episodes = 20;
  // Stop before the sample budget once an evaluation reaches this success
  // rate (>1 disables early stopping).
  double early_stop_success = 0.95;
  std::int64_t early_stop_min_steps = 50000;

  bool valid() const {
    return gamma > 0.0 && gamma < 1.0 && tau > 0.0 && tau < 1.0 && batch_size >= 1 &&
           learning_rate > 0.0 && replay_capacity >= 1 && warmup_steps >= 0 &&
           updates_per_env_step >= 0 && total_env_steps >= 0;
  }
};

// Actor, twin critics, their polyak targets, and the temperature.
struct Networks {
  nn::MlpParams actor, critic1, critic2, target1, target2;
  double log_alpha = 0.0;
  nn::AdamState opt_actor, opt_critic1, opt_critic2, opt_alpha;

  double alpha() const { return std::exp(log_alpha); }

  static Networks init(Rng& rng) {
    Networks n;
    n.actor = nn::mlp_init(actor_layout(), rng);
    n.critic1 = nn::mlp_init(critic_layout(), rng);
    n.critic2 = nn::mlp_init(critic_layout(), rng);
    n.target1 = n.critic1;
    n.target2 = n.critic2;
    n.opt_actor = nn::AdamState::like(n.actor);
    n.opt_critic1 = nn::AdamState::like(n.critic1);
    n.opt_critic2 = nn::AdamState::like(n.critic2);
    n.opt_alpha = nn::AdamState::scalar();
    return n;
  }
};

}  // namespace pregrasp::sac
