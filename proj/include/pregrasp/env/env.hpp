#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pregrasp/env/scenario.hpp"
#include "pregrasp/physics/world.hpp"

namespace pregrasp::env {

struct InfeasibleScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EpisodeFinished : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The 7-dimensional policy input: clearance, effector pose, box pose.
struct Observation {
  double d = 0.0;
  double eff_y = 0.0;
  double eff_z = 0.0;
  double eff_pitch = 0.0;
  double target_y = 0.0;
  double target_z = 0.0;
  double target_pitch = 0.0;

  std::array<double, 7> as_array() const {
    return {d, eff_y, eff_z, eff_pitch, target_y, target_z, target_pitch};
  }
  static Observation from_array(const std::array<double, 7>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }
  bool finite() const {
    for (double v : as_array())
      if (!std::isfinite(v)) return false;
    return true;
  }
};

// Incremental end-effector command. Bounds are part of the action space.
struct Action {
  double dy = 0.0;
  double dz = 0.0;
  double dpitch = 0.0;

  std::array<double, 3> as_array() const { return {dy, dz, dpitch}; }
  static Action from_array(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
};

inline constexpr std::array<double, 3> kActionBounds = {0.025, 0.025, 0.01};

struct RewardConfig {
  double lambda1 = 1.0;  // weight on the pitch reward
  double lambda2 = 1.0;  // weight on the clearance penalty

  bool valid() const { return lambda1 > 0.0 && lambda2 > 0.0; }
};

enum class TerminationReason : std::uint8_t {
  None,
  PitchLimit,
  WorkspaceViolation,
  SupportCollision,
  SolverFailure,
  HorizonReached,
};

const char* to_string(TerminationReason r);
std::optional<TerminationReason> termination_from_string(const std::string& s);

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool terminated = false;
  TerminationReason reason = TerminationReason::None;
  double max_pitch_so_far = 0.0;
};

// Axis-aligned command workspace for the effector.
struct Workspace {
  double y_min = -0.35, y_max = 0.34;
  double z_min = 0.02, z_max = 0.45;
  double pitch_min = -3.0, pitch_max = -2.0;

  bool contains(const Vec2& p, double pitch, double tol = 0.0) const {
    return p.y >= y_min - tol && p.y <= y_max + tol && p.z >= z_min - tol &&
           p.z <= z_max + tol && pitch >= pitch_min - tol && pitch <= pitch_max + tol;
  }
};

struct CommandPose {
  Vec2 position;
  double pitch = 0.0;
};

// Componentwise increment followed by the workspace clamp.
CommandPose integrate_command(const CommandPose& current, const Action& action,
                              const Workspace& workspace);

double compute_reward(const Observation& obs, const RewardConfig& cfg);

struct EnvConfig {
  RandomizationTable table;
  ScenarioParams defaults;  // geometry + default values mirroring the table
  RewardConfig reward;
  Workspace workspace;

  phys::MaterialParams material;   // friction_box_effector etc.; the per-pair
                                   // table/support values come from the scenario
  double support_height = 0.5;
  double effector_radius = 0.02;
  double effector_mass = 1.0;
  double tracker_omega = 90.0;
  double tracker_force_limit = 50.0;

  int horizon = 100;
  int physics_per_action = 40;  // 1 kHz physics, 25 Hz actions
  double pitch_limit = 0.785;
  double workspace_violation_tol = 5e-3;

  double settle_velocity_eps = 1e-4;
  int settle_max_steps = 2000;

  bool allow_reference_init = true;
  std::size_t reference_capacity = 64;
};

// Stored high-value restart state.
struct ReferenceState {
  ScenarioParams scenario;
  phys::RigidBodyState2D box;
  phys::EffectorState effector;
};

phys::WorldConfig make_world_config(const EnvConfig& cfg, const ScenarioParams& scenario);

// The pregrasp MDP. One instance is single-threaded; instances are
// independent, with rng streams derived from (root seed, instance index).
class PregraspEnv {
 public:
  PregraspEnv(EnvConfig cfg, std::uint64_t seed);

  // Samples a scenario (and possibly a reference start) and resets.
  Observation reset();
  // Resets to an explicit scenario. Throws InfeasibleScenario when the box
  // overlaps the support or the effector at initialization.
  Observation reset(const ScenarioParams& scenario);
  // Restores an explicit world snapshot (used by reference starts, traces).
  Observation reset_from_snapshot(const ScenarioParams& scenario,
                                  const phys::RigidBodyState2D& box,
                                  const phys::EffectorState& effector);

  // One 25 Hz action: integrate the command, run physics_per_action physics
  // steps, observe, reward, check termination. Throws EpisodeFinished when
  // called on a finished episode.
  StepResult step(const Action& action);

  Observation observe() const;
  TerminationReason check_termination(int step_index) const;

  // Evaluation protocols that deliberately step past a termination (e.g. the
  // disturbance test) re-arm the episode with this.
  void continue_episode() { active_ = true; }
  phys::WorldState& world_mutable() { return world_; }

  bool episode_active() const { return active_; }
  int steps_taken() const { return steps_; }
  double max_pitch() const { return max_pitch_; }
  const ScenarioParams& scenario() const { return scenario_; }
  const phys::WorldState& world() const { return world_; }
  const phys::WorldConfig& world_config() const { return world_cfg_; }
  const EnvConfig& config() const { return cfg_; }
  const CommandPose& command() const { return command_; }
  Rng& rng() { return rng_; }

  const std::vector<ReferenceState>& reference_library() const { return library_; }
  // Mid-trajectory snapshots of lift episodes feed back into the library.
  void note_episode_end(TerminationReason reason);

 private:
  void build_world(const ScenarioParams& scenario, const Vec2& box_pos, double box_pitch,
                   const phys::EffectorState* effector_override);
  void settle();
  void seed_reference_library();

  EnvConfig cfg_;
  Rng rng_;
  phys::WorldConfig world_cfg_;
  phys::WorldState world_;
  ScenarioParams scenario_;
  CommandPose command_;
  bool active_ = false;
  int steps_ = 0;
  double max_pitch_ = 0.0;
  std::vector<ReferenceState> library_;
  std::size_t library_seed_count_ = 0;
  std::vector<ReferenceState> episode_snapshots_;
};

}  // namespace pregrasp::env
