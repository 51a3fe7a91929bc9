#pragma once

#include <functional>

#include "pregrasp/eval/harness.hpp"
#include "pregrasp/sac/update.hpp"

namespace pregrasp::sac {

// One metrics-log record, emitted at every evaluation event.
struct EvalRecord {
  std::int64_t env_steps = 0;
  double critic1_loss = 0.0;
  double critic2_loss = 0.0;
  double actor_loss = 0.0;
  double alpha = 0.0;
  double eval_success_rate = 0.0;
  double eval_mean_max_pitch = 0.0;
};

struct TrainHooks {
  std::function<void(const EvalRecord&)> on_eval;
  std::function<void(const Networks&, std::int64_t env_steps, bool final)> on_checkpoint;
  std::function<bool()> should_stop;  // external cancellation
};

struct TrainResult {
  std::int64_t env_steps = 0;
  double final_eval_success = 0.0;
  double final_eval_mean_max_pitch = 0.0;
  bool stopped_early = false;
  Networks networks;
  std::vector<EvalRecord> records;
};

// Off-policy training loop: warmup with uniform-random actions, then one
// policy-sampled environment step and `updates_per_env_step` gradient steps
// per iteration. Deterministic for a fixed seed (single-threaded).
TrainResult train(const env::EnvConfig& env_cfg, const SacConfig& cfg, std::uint64_t seed,
                  const TrainHooks& hooks = {});

}  // namespace pregrasp::sac
