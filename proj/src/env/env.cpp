#include "pregrasp/env/env.hpp"

#include <algorithm>
#include <cmath>

namespace pregrasp::env {

const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::None: return "none";
    case TerminationReason::PitchLimit: return "pitch_limit";
    case TerminationReason::WorkspaceViolation: return "workspace_violation";
    case TerminationReason::SupportCollision: return "support_collision";
    case TerminationReason::SolverFailure: return "solver_failure";
    case TerminationReason::HorizonReached: return "horizon_reached";
  }
  return "none";
}

std::optional<TerminationReason> termination_from_string(const std::string& s) {
  for (auto r : {TerminationReason::None, TerminationReason::PitchLimit,
                 TerminationReason::WorkspaceViolation, TerminationReason::SupportCollision,
                 TerminationReason::SolverFailure, TerminationReason::HorizonReached}) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

CommandPose integrate_command(const CommandPose& current, const Action& action,
                              const Workspace& ws) {
  CommandPose next;
  next.position.y = clamp(current.position.y + action.dy, ws.y_min, ws.y_max);
  next.position.z = clamp(current.position.z + action.dz, ws.z_min, ws.z_max);
  next.pitch = clamp(current.pitch + action.dpitch, ws.pitch_min, ws.pitch_max);
  return next;
}

double compute_reward(const Observation& obs, const RewardConfig& cfg) {
  return cfg.lambda1 * obs.target_pitch - cfg.lambda2 * obs.d;
}

phys::WorldConfig make_world_config(const EnvConfig& cfg, const ScenarioParams& scenario) {
  phys::WorldConfig w;
  w.box = phys::BoxGeometry::make(scenario.box_geometry.length, scenario.box_geometry.height,
                                  scenario.box_mass);
  w.material = cfg.material;
  w.material.friction_box_table = scenario.friction;
  w.material.friction_box_support = scenario.friction;
  w.support.base_y = scenario.support_position_y;
  w.support.inclination = scenario.support_inclination;
  w.support.height = cfg.support_height;
  w.effector_radius = cfg.effector_radius;
  w.effector_mass = cfg.effector_mass;
  w.tracker_omega = cfg.tracker_omega;
  w.tracker_force_limit = cfg.tracker_force_limit;
  return w;
}

namespace {

// Raw overlap checks for reset feasibility (unlike the contact query these
// have no depth cutoff).
bool box_overlaps_support(const phys::WorldConfig& w, const phys::RigidBodyState2D& box) {
  const Vec2 base = w.support.base();
  const Vec2 dir = w.support.direction();
  const Vec2 n = w.support.normal();
  for (const Vec2& corner : phys::box_corners(w.box, box)) {
    const Vec2 rel = corner - base;
    const double depth = -rel.dot(n);
    const double along = rel.dot(dir);
    if (depth > 0.0 && along > -w.box.height && along < w.support.height + w.box.height) {
      return true;
    }
  }
  return false;
}

bool box_overlaps_effector(const phys::WorldConfig& w, const phys::RigidBodyState2D& box,
                           const phys::EffectorState& eff) {
  const double hl = 0.5 * w.box.length, hh = 0.5 * w.box.height;
  const Vec2 local = rotate_pitch(eff.center - box.position, -box.pitch);
  const Vec2 closest{clamp(local.y, -hl, hl), clamp(local.z, -hh, hh)};
  return (local - closest).norm() < eff.radius;
}

}  // namespace

PregraspEnv::PregraspEnv(EnvConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {
  cfg_.table.validate();
  if (!cfg_.reward.valid()) {
    throw std::invalid_argument("reward weights must be positive");
  }
  world_cfg_ = make_world_config(cfg_, cfg_.defaults);
  seed_reference_library();
}

void PregraspEnv::seed_reference_library() {
  library_.clear();
  const ScenarioParams& sc = cfg_.defaults;
  const phys::WorldConfig w = make_world_config(cfg_, sc);
  const double hl = 0.5 * w.box.length, hh = 0.5 * w.box.height;

  auto make_effector = [&](const Vec2& center, const Vec2& commanded) {
    phys::EffectorState e;
    e.center = center;
    e.commanded = commanded;
    e.pitch = sc.eff_init.pitch;
    e.commanded_pitch = sc.eff_init.pitch;
    e.radius = w.effector_radius;
    return e;
  };

  // Flat box with the effector touching the front face at mid-height,
  // command pressed slightly into the face.
  {
    ReferenceState ref;
    ref.scenario = sc;
    ref.box.position = {sc.box_position_y, hh};
    const double face_y = sc.box_position_y - hl;
    ref.effector = make_effector({face_y - w.effector_radius, hh},
                                 {face_y - w.effector_radius + 5e-4, hh});
    library_.push_back(ref);
  }

  // Box tilted against the support with the effector supporting the face.
  for (double tilt : {0.1, 0.2, 0.4}) {
    ReferenceState ref;
    ref.scenario = sc;
    const double s = std::sin(tilt), c = std::cos(tilt);
    const Vec2 corner{sc.support_position_y - w.box.height * s, 0.0};
    ref.box.position = corner + Vec2{-hl * c + hh * s, hl * s + hh * c};
    ref.box.pitch = tilt;
    const auto [a, b] = phys::front_face(w.box, ref.box);
    const Vec2 contact = a + (b - a) * 0.7;
    const Vec2 outward = rotate_pitch({-1.0, 0.0}, tilt);
    const Vec2 center = contact + outward * w.effector_radius;
    ref.effector = make_effector(center, center - outward * 1e-3);
    library_.push_back(ref);
  }
  library_seed_count_ = library_.size();
}

void PregraspEnv::build_world(const ScenarioParams& scenario, const Vec2& box_pos,
                              double box_pitch, const phys::EffectorState* effector_override) {
  world_cfg_ = make_world_config(cfg_, scenario);
  world_ = phys::make_world(world_cfg_, box_pos, box_pitch,
                            {scenario.eff_init.y, scenario.eff_init.z}, scenario.eff_init.pitch);
  if (effector_override) world_.effector = *effector_override;
  scenario_ = scenario;
}

Observation PregraspEnv::reset() { return reset(sample_scenario(cfg_.table, cfg_.defaults, rng_,
                                                                cfg_.allow_reference_init)); }

Observation PregraspEnv::reset(const ScenarioParams& scenario) {
  if (scenario.used_reference_init) {
    if (library_.empty()) throw std::logic_error("reference init drawn with empty library");
    const auto& ref = library_[rng_.uniform_index(library_.size())];
    return reset_from_snapshot(ref.scenario, ref.box, ref.effector);
  }
  build_world(scenario, {scenario.box_position_y, 0.5 * scenario.box_geometry.height}, 0.0,
              nullptr);
  if (box_overlaps_support(world_cfg_, world_.box)) {
    throw InfeasibleScenario("box overlaps the support surface at reset");
  }
  if (box_overlaps_effector(world_cfg_, world_.box, world_.effector)) {
    throw InfeasibleScenario("box overlaps the effector at reset");
  }
  settle();
  world_.tick = 0;  // tracker phase restarts with the episode
  command_ = {world_.effector.commanded, world_.effector.commanded_pitch};
  active_ = true;
  steps_ = 0;
  max_pitch_ = std::min(world_.box.pitch, cfg_.pitch_limit);
  episode_snapshots_.clear();
  return observe();
}

Observation PregraspEnv::reset_from_snapshot(const ScenarioParams& scenario,
                                             const phys::RigidBodyState2D& box,
                                             const phys::EffectorState& effector) {
  ScenarioParams sc = scenario;
  sc.used_reference_init = true;
  build_world(sc, box.position, box.pitch, &effector);
  world_.box = box;
  command_ = {world_.effector.commanded, world_.effector.commanded_pitch};
  command_ = integrate_command(command_, {}, cfg_.workspace);  // clamp
  world_.effector.commanded = command_.position;
  world_.effector.commanded_pitch = command_.pitch;
  active_ = true;
  steps_ = 0;
  max_pitch_ = std::min(std::max(0.0, world_.box.pitch), cfg_.pitch_limit);
  episode_snapshots_.clear();
  return observe();
}

void PregraspEnv::settle() {
  for (int i = 0; i < cfg_.settle_max_steps; ++i) {
    const auto& b = world_.box;
    if (b.linear_velocity.norm() < cfg_.settle_velocity_eps &&
        std::abs(b.angular_velocity) < cfg_.settle_velocity_eps) {
      break;
    }
    phys::step(world_cfg_, world_);
  }
}

Observation PregraspEnv::observe() const {
  Observation o;
  o.d = phys::signed_clearance(world_cfg_.box, world_.effector, world_.box);
  o.eff_y = world_.effector.center.y;
  o.eff_z = world_.effector.center.z;
  o.eff_pitch = world_.effector.pitch;
  o.target_y = world_.box.position.y;
  o.target_z = world_.box.position.z;
  o.target_pitch = world_.box.pitch;
  return o;
}

TerminationReason PregraspEnv::check_termination(int step_index) const {
  if (world_.box.pitch > cfg_.pitch_limit) return TerminationReason::PitchLimit;
  if (!cfg_.workspace.contains(world_.effector.center, world_.effector.pitch,
                               cfg_.workspace_violation_tol)) {
    return TerminationReason::WorkspaceViolation;
  }
  for (const auto& c : phys::detect_contacts(world_cfg_, world_)) {
    if (c.pair_id == phys::ContactPair::EffectorSupport) {
      return TerminationReason::SupportCollision;
    }
  }
  if (step_index >= cfg_.horizon) return TerminationReason::HorizonReached;
  return TerminationReason::None;
}

StepResult PregraspEnv::step(const Action& action) {
  if (!active_) throw EpisodeFinished("step() called on a finished episode");

  command_ = integrate_command(command_, action, cfg_.workspace);
  world_.effector.commanded = command_.position;
  world_.effector.commanded_pitch = command_.pitch;

  StepResult result;
  try {
    for (int i = 0; i < cfg_.physics_per_action; ++i) {
      phys::step(world_cfg_, world_);
      max_pitch_ = std::max(max_pitch_, std::min(world_.box.pitch, cfg_.pitch_limit));
    }
  } catch (const phys::NonFiniteState&) {
    active_ = false;
    steps_ += 1;
    result.reward = 0.0;
    result.terminated = true;
    result.reason = TerminationReason::SolverFailure;
    result.max_pitch_so_far = max_pitch_;
    return result;
  }

  steps_ += 1;
  result.observation = observe();
  result.reward = compute_reward(result.observation, cfg_.reward);
  result.reason = check_termination(steps_);
  result.terminated = result.reason != TerminationReason::None;
  result.max_pitch_so_far = max_pitch_;

  episode_snapshots_.push_back({scenario_, world_.box, world_.effector});
  if (result.terminated) {
    active_ = false;
    note_episode_end(result.reason);
  }
  return result;
}

void PregraspEnv::note_episode_end(TerminationReason reason) {
  if (reason != TerminationReason::PitchLimit) return;
  if (!cfg_.allow_reference_init || episode_snapshots_.empty()) return;
  const ReferenceState& mid = episode_snapshots_[episode_snapshots_.size() / 2];
  if (library_.size() >= cfg_.reference_capacity && library_.size() > library_seed_count_) {
    library_.erase(library_.begin() + static_cast<std::ptrdiff_t>(library_seed_count_));
  }
  library_.push_back(mid);
}

}  // namespace pregrasp::env
