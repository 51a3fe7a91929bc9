#include "pregrasp/eval/harness.hpp"

#include <algorithm>
#include <cmath>

namespace pregrasp::eval {

EpisodeResult play_out(env::PregraspEnv& e, const nn::MlpParams& actor,
                       const CompletionCriterion& criterion) {
  EpisodeResult result;
  env::Observation obs = e.observe();
  env::StepResult last{};
  while (e.episode_active()) {
    const env::Action a = sac::policy_mean(actor, obs);
    last = e.step(a);
    obs = last.observation;
  }
  result.max_pitch = e.max_pitch();
  result.reason = last.reason;
  result.steps_used = e.steps_taken();
  result.final_d = last.observation.d;
  result.success = task_success(e.world_config().box.length, result.max_pitch, criterion);
  return result;
}

EvalSummary evaluate_policy(const env::EnvConfig& cfg, const nn::MlpParams& actor, int episodes,
                            std::uint64_t seed, const CompletionCriterion& criterion) {
  env::EnvConfig eval_cfg = cfg;
  eval_cfg.allow_reference_init = false;
  env::PregraspEnv e(eval_cfg, seed);
  EvalSummary summary;
  summary.episodes.reserve(static_cast<std::size_t>(episodes));
  double pitch_sum = 0.0;
  int successes = 0;
  for (int i = 0; i < episodes; ++i) {
    EpisodeResult r;
    try {
      e.reset();
      r = play_out(e, actor, criterion);
    } catch (const std::runtime_error&) {
      r = EpisodeResult{};  // physics failure counts as an unsuccessful episode
    }
    successes += r.success ? 1 : 0;
    pitch_sum += r.max_pitch;
    summary.episodes.push_back(r);
  }
  if (episodes > 0) {
    summary.success_rate = static_cast<double>(successes) / episodes;
    summary.mean_max_pitch = pitch_sum / episodes;
  }
  return summary;
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Width: return "width";
    case SweepAxis::Height: return "height";
    case SweepAxis::Mass: return "mass";
    case SweepAxis::Friction: return "friction";
    case SweepAxis::InitialY: return "initial_y";
    case SweepAxis::SupportInclination: return "support_inclination";
  }
  return "mass";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  for (auto a : {SweepAxis::Width, SweepAxis::Height, SweepAxis::Mass, SweepAxis::Friction,
                 SweepAxis::InitialY, SweepAxis::SupportInclination}) {
    if (s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown sweep axis: " + s);
}

namespace {

env::EnvConfig apply_axis(const env::EnvConfig& base, SweepAxis axis, double value,
                          bool randomize_others) {
  env::EnvConfig cfg = base;
  cfg.allow_reference_init = false;
  if (!randomize_others) {
    for (env::RandomizationRow* row : {&cfg.table.mass, &cfg.table.friction, &cfg.table.object_y,
                                       &cfg.table.support_y, &cfg.table.eff_y, &cfg.table.eff_z,
                                       &cfg.table.eff_pitch}) {
      row->probability = 0.0;
    }
  }
  auto pin = [](env::RandomizationRow& row, double v) {
    row.value = v;
    row.probability = 0.0;
  };
  auto& g = cfg.defaults.box_geometry;
  switch (axis) {
    case SweepAxis::Width:
      g = phys::BoxGeometry::make(value, g.height, g.mass);
      break;
    case SweepAxis::Height:
      g = phys::BoxGeometry::make(g.length, value, g.mass);
      break;
    case SweepAxis::Mass:
      cfg.defaults.box_mass = value;
      pin(cfg.table.mass, value);
      break;
    case SweepAxis::Friction:
      cfg.defaults.friction = value;
      pin(cfg.table.friction, value);
      break;
    case SweepAxis::InitialY:
      cfg.defaults.box_position_y = value;
      pin(cfg.table.object_y, value);
      break;
    case SweepAxis::SupportInclination:
      cfg.defaults.support_inclination = value;
      break;
  }
  return cfg;
}

}  // namespace

std::vector<SweepPoint> run_sweep(const env::EnvConfig& base, const nn::MlpParams& actor,
                                  const SweepSpec& spec, const CompletionCriterion& criterion) {
  if (spec.grid.empty()) throw std::invalid_argument("sweep grid must not be empty");
  std::vector<SweepPoint> table;
  table.reserve(spec.grid.size());
  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    const double value = spec.grid[gi];
    const env::EnvConfig cfg = apply_axis(base, spec.axis, value, spec.randomize_others);
    env::PregraspEnv e(cfg, Rng::derive_stream(spec.seed, gi));
    SweepPoint pt;
    pt.value = value;
    pt.episodes = spec.episodes_per_point;
    std::vector<double> pitches;
    int successes = 0;
    for (int ep = 0; ep < spec.episodes_per_point; ++ep) {
      EpisodeResult r;
      try {
        e.reset();
        r = play_out(e, actor, criterion);
      } catch (const std::runtime_error&) {
        r = EpisodeResult{};
      }
      successes += r.success ? 1 : 0;
      pitches.push_back(r.max_pitch);
    }
    if (!pitches.empty()) {
      pt.success_rate = static_cast<double>(successes) / static_cast<double>(pitches.size());
      double mean = 0.0;
      for (double p : pitches) mean += p;
      mean /= static_cast<double>(pitches.size());
      double var = 0.0;
      for (double p : pitches) var += (p - mean) * (p - mean);
      pt.mean_max_pitch = mean;
      pt.std_max_pitch = std::sqrt(var / static_cast<double>(pitches.size()));
    }
    table.push_back(pt);
  }
  return table;
}

double standing_momentum_budget(const phys::BoxGeometry& box, double tilt, double gravity) {
  const double l = 0.5 * box.length, c = 0.5 * box.height;
  const double pivot_inertia = box.moment_of_inertia + box.mass * (l * l + c * c);
  const double dh = (l * std::sin(tilt) + c * std::cos(tilt)) - c;
  if (dh <= 0.0) return 0.0;
  return std::sqrt(2.0 * pivot_inertia * box.mass * gravity * dh);
}

DisturbanceOutcome disturbance_trial(const env::EnvConfig& cfg, const nn::MlpParams& actor,
                                     const env::ScenarioParams& scenario, double momentum,
                                     double hold_seconds) {
  env::EnvConfig trial_cfg = cfg;
  trial_cfg.allow_reference_init = false;
  env::PregraspEnv e(trial_cfg, /*seed=*/0);
  env::ScenarioParams sc = scenario;
  sc.used_reference_init = false;
  env::Observation obs = e.reset(sc);

  const double threshold = lift_threshold_angle(e.world_config().box.length);
  bool lifted = false;
  const int plateau_window = 5;
  std::vector<double> history;
  for (int k = 0; k < trial_cfg.horizon; ++k) {
    if (!e.episode_active()) e.continue_episode();
    const env::StepResult r = e.step(sac::policy_mean(actor, obs));
    obs = r.observation;
    const double pitch = obs.target_pitch;
    history.push_back(pitch);
    if (r.reason == env::TerminationReason::PitchLimit) {
      lifted = true;
      break;
    }
    if (pitch >= threshold && history.size() > static_cast<std::size_t>(plateau_window)) {
      const double prior = history[history.size() - 1 - plateau_window];
      if (pitch - prior < 1e-3) {
        lifted = true;
        break;
      }
    }
    if (r.reason != env::TerminationReason::None &&
        r.reason != env::TerminationReason::HorizonReached &&
        r.reason != env::TerminationReason::PitchLimit) {
      break;  // collided or failed; no lift from here
    }
  }
  if (!lifted) {
    throw NoLiftAchieved("policy did not reach the lift threshold");
  }

  DisturbanceOutcome out;
  out.momentum = momentum;
  out.lift_pitch = e.world().box.pitch;
  phys::apply_angular_impulse(e.world_config(), e.world_mutable(), momentum);

  const int hold_actions = static_cast<int>(hold_seconds * 25.0);
  double min_pitch = e.world().box.pitch;
  for (int k = 0; k < hold_actions; ++k) {
    if (!e.episode_active()) e.continue_episode();
    const env::StepResult r = e.step(sac::policy_mean(actor, obs));
    obs = r.observation;
    min_pitch = std::min(min_pitch, obs.target_pitch);
    if (r.reason == env::TerminationReason::SolverFailure) {
      min_pitch = 0.0;
      break;
    }
  }
  out.min_pitch_after = min_pitch;
  out.withstood = min_pitch > 0.05;
  return out;
}

double robustness_disturbance_test(const env::EnvConfig& cfg, const nn::MlpParams& actor,
                                   const env::ScenarioParams& scenario,
                                   const std::vector<double>& momentum_grid) {
  double best = -1.0;
  bool any = false;
  for (double m : momentum_grid) {
    const DisturbanceOutcome out = disturbance_trial(cfg, actor, scenario, m);
    any = true;
    if (out.withstood) best = std::max(best, m);
  }
  if (!any) throw std::invalid_argument("momentum grid must not be empty");
  return best;
}

}  // namespace pregrasp::eval
