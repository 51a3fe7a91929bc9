#pragma once

#include <string>
#include <vector>

#include "pregrasp/env/env.hpp"
#include "pregrasp/eval/metrics.hpp"
#include "pregrasp/sac/policy.hpp"

namespace pregrasp::eval {

struct NoLiftAchieved : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EpisodeResult {
  double max_pitch = 0.0;
  bool success = false;
  env::TerminationReason reason = env::TerminationReason::None;
  int steps_used = 0;
  double final_d = 0.0;
};

// Plays the active episode to termination (or horizon) with the mean policy.
EpisodeResult play_out(env::PregraspEnv& e, const nn::MlpParams& actor,
                       const CompletionCriterion& criterion = {});

struct EvalSummary {
  double success_rate = 0.0;
  double mean_max_pitch = 0.0;
  std::vector<EpisodeResult> episodes;
};

// n randomized episodes (reference starts disabled) with the mean policy.
EvalSummary evaluate_policy(const env::EnvConfig& cfg, const nn::MlpParams& actor, int episodes,
                            std::uint64_t seed, const CompletionCriterion& criterion = {});

enum class SweepAxis { Width, Height, Mass, Friction, InitialY, SupportInclination };

const char* to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Mass;
  std::vector<double> grid;
  int episodes_per_point = 10;
  std::uint64_t seed = 0;
  // Keep the Table-II randomization on the non-swept rows; the swept row is
  // pinned to the grid value.
  bool randomize_others = true;
};

struct SweepPoint {
  double value = 0.0;
  int episodes = 0;
  double success_rate = 0.0;
  double mean_max_pitch = 0.0;
  double std_max_pitch = 0.0;
};

// Per-episode physics failures count as unsuccessful episodes; the sweep
// itself never aborts.
std::vector<SweepPoint> run_sweep(const env::EnvConfig& base, const nn::MlpParams& actor,
                                  const SweepSpec& spec, const CompletionCriterion& criterion = {});

// Angular momentum that would carry the free box from a lift angle of `tilt`
// back to flat, pivoting on its table corner: sqrt(2 * I_pivot * m * g * dh).
// The holding policy must absorb kicks of this scale.
double standing_momentum_budget(const phys::BoxGeometry& box, double tilt, double gravity = 9.81);

struct DisturbanceOutcome {
  double momentum = 0.0;
  bool withstood = false;
  double lift_pitch = 0.0;   // pitch when the kick was applied
  double min_pitch_after = 0.0;
};

// Lifts with the mean policy, kicks the box with `momentum`, then keeps the
// policy running for `hold_seconds`. Withstood iff pitch stays above 0.05 rad.
// Throws NoLiftAchieved when the policy never lifts past the threshold.
DisturbanceOutcome disturbance_trial(const env::EnvConfig& cfg, const nn::MlpParams& actor,
                                     const env::ScenarioParams& scenario, double momentum,
                                     double hold_seconds = 2.0);

// Largest grid value the policy withstands on the given scenario.
double robustness_disturbance_test(const env::EnvConfig& cfg, const nn::MlpParams& actor,
                                   const env::ScenarioParams& scenario,
                                   const std::vector<double>& momentum_grid);

}  // namespace pregrasp::eval
