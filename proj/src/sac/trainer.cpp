#include "pregrasp/sac/trainer.hpp"

namespace pregrasp::sac {
namespace {

env::Action random_action(Rng& rng) {
  return {rng.uniform(-env::kActionBounds[0], env::kActionBounds[0]),
          rng.uniform(-env::kActionBounds[1], env::kActionBounds[1]),
          rng.uniform(-env::kActionBounds[2], env::kActionBounds[2])};
}

bool absorbing_for(env::TerminationReason reason) {
  // Collisions and workspace exits are true terminal states; pitch-limit and
  // horizon terminations are time-limit cuts and keep their bootstrap value.
  return reason == env::TerminationReason::SupportCollision ||
         reason == env::TerminationReason::WorkspaceViolation;
}

}  // namespace

TrainResult train(const env::EnvConfig& env_cfg, const SacConfig& cfg, std::uint64_t seed,
                  const TrainHooks& hooks) {
  if (!cfg.valid()) throw std::invalid_argument("invalid SAC configuration");

  Rng rng(Rng::derive_stream(seed, 0));
  env::PregraspEnv environment(env_cfg, Rng::derive_stream(seed, 1));

  TrainResult result;
  result.networks = Networks::init(rng);
  ReplayBuffer buffer(cfg.replay_capacity);

  env::Observation obs = environment.reset();

  double c1_sum = 0.0, c2_sum = 0.0, actor_sum = 0.0;
  std::int64_t updates_since_eval = 0;
  std::uint64_t eval_count = 0;

  auto run_eval = [&](std::int64_t env_steps) {
    EvalRecord rec;
    rec.env_steps = env_steps;
    if (updates_since_eval > 0) {
      rec.critic1_loss = c1_sum / static_cast<double>(updates_since_eval);
      rec.critic2_loss = c2_sum / static_cast<double>(updates_since_eval);
      rec.actor_loss = actor_sum / static_cast<double>(updates_since_eval);
    }
    rec.alpha = result.networks.alpha();
    const eval::EvalSummary summary = eval::evaluate_policy(
        env_cfg, result.networks.actor, cfg.eval_episodes,
        Rng::derive_stream(seed, 10000 + eval_count));
    eval_count += 1;
    rec.eval_success_rate = summary.success_rate;
    rec.eval_mean_max_pitch = summary.mean_max_pitch;
    result.records.push_back(rec);
    if (hooks.on_eval) hooks.on_eval(rec);
    if (hooks.on_checkpoint) hooks.on_checkpoint(result.networks, env_steps, false);
    c1_sum = c2_sum = actor_sum = 0.0;
    updates_since_eval = 0;
    return rec;
  };

  for (std::int64_t step = 1; step <= cfg.total_env_steps; ++step) {
    env::Action action;
    if (step <= cfg.warmup_steps) {
      action = random_action(rng);
    } else {
      action = policy_sample(result.networks.actor, obs, rng).action;
    }

    const env::StepResult sr = environment.step(action);
    if (sr.reason != env::TerminationReason::SolverFailure) {
      Transition t;
      t.state = obs.as_array();
      t.action = action.as_array();
      t.reward = sr.reward;
      t.next_state = sr.observation.as_array();
      t.absorbing = absorbing_for(sr.reason);
      buffer.push(t);
    }
    obs = sr.terminated ? environment.reset() : sr.observation;

    if (step > cfg.warmup_steps &&
        buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
      for (int u = 0; u < cfg.updates_per_env_step; ++u) {
        const Batch batch = Batch::gather(buffer, buffer.sample_indices(
                                                      static_cast<std::size_t>(cfg.batch_size), rng));
        const UpdateLosses losses = sac_update(result.networks, batch, cfg, rng);
        c1_sum += losses.critic1;
        c2_sum += losses.critic2;
        actor_sum += losses.actor;
        updates_since_eval += 1;
      }
    }

    result.env_steps = step;
    if (cfg.eval_every > 0 && step % cfg.eval_every == 0) {
      const EvalRecord rec = run_eval(step);
      result.final_eval_success = rec.eval_success_rate;
      result.final_eval_mean_max_pitch = rec.eval_mean_max_pitch;
      if (rec.eval_success_rate >= cfg.early_stop_success && step >= cfg.early_stop_min_steps) {
        result.stopped_early = true;
        break;
      }
    }
    if (hooks.should_stop && hooks.should_stop()) break;
  }

  // Final evaluation/record unless the loop just produced one.
  if (cfg.total_env_steps == 0 ||
      result.records.empty() ||
      (result.records.back().env_steps != result.env_steps && !result.stopped_early)) {
    const EvalRecord rec = run_eval(result.env_steps);
    result.final_eval_success = rec.eval_success_rate;
    result.final_eval_mean_max_pitch = rec.eval_mean_max_pitch;
  }
  if (hooks.on_checkpoint) hooks.on_checkpoint(result.networks, result.env_steps, true);
  return result;
}

}  // namespace pregrasp::sac
