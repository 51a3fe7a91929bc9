#pragma once

// Shared helpers for the unit and acceptance suites.

#include <cmath>
#include <vector>

#include "pregrasp/env/env.hpp"
#include "pregrasp/physics/world.hpp"

namespace testutil {

using namespace pregrasp;

inline phys::WorldConfig default_world_config() {
  phys::WorldConfig cfg;
  return cfg;
}

// Box flat on the table at the default position, effector at the default
// initial pose, commands matching poses.
inline phys::WorldState settled_world(const phys::WorldConfig& cfg, double box_y = 0.21,
                                      Vec2 eff = {0.0, 0.18}) {
  return phys::make_world(cfg, {box_y, 0.5 * cfg.box.height}, 0.0, eff, -2.75);
}

// Two-contact pose of a box tilted against the support: bottom-back corner
// on the table, top-back corner on the support surface plane (vertical wall).
// `bias` < 0 sinks the bottom corner into the table and the top corner into
// the support by |bias| so both contacts register robustly.
inline phys::RigidBodyState2D tilted_pose(const phys::WorldConfig& cfg, double tilt,
                                          double bias = 0.0) {
  const double hl = 0.5 * cfg.box.length, hh = 0.5 * cfg.box.height;
  const double s = std::sin(tilt), c = std::cos(tilt);
  phys::RigidBodyState2D box;
  const Vec2 corner{cfg.support.base_y - cfg.box.height * s - bias, bias};
  box.position = corner + Vec2{-hl * c + hh * s, hl * s + hh * c};
  box.pitch = tilt;
  return box;
}

struct OnsetMeasurement {
  bool tipped = false;
  double horizontal_force = 0.0;  // on the box, at onset
  double slide_distance = 0.0;
};

// Pushes the box horizontally at `push_height` with a slow command ramp and
// reports the horizontal contact force when the pitch first rises. The onset
// threshold sits above the solver's slop-scale seating noise (~1e-3 rad).
inline OnsetMeasurement measure_tilt_onset(const phys::WorldConfig& cfg, double push_height,
                                           double speed = 2.5e-4, double onset_pitch = 2.5e-3) {
  phys::WorldConfig wc = cfg;
  wc.material.friction_box_effector = 0.0;  // pure normal (horizontal) push

  // Bottom-back corner 4 mm short of the support base: enough rotation
  // clearance to detect the free pivot before the wall catches it.
  const double hl = 0.5 * wc.box.length;
  const double box_y = wc.support.base_y - 4e-3 - hl;
  phys::WorldState w = phys::make_world(wc, {box_y, 0.5 * wc.box.height}, 0.0,
                                        {box_y - hl - wc.effector_radius - 5e-4, push_height},
                                        -2.75);
  const double start_y = w.box.position.y;

  OnsetMeasurement m;
  const int max_steps = 120000;
  for (int i = 0; i < max_steps; ++i) {
    w.effector.commanded.y += speed * phys::kPhysicsDt;
    phys::step(wc, w);
    if (w.box.pitch > onset_pitch && w.box.angular_velocity > 0.0) {
      double fy = 0.0;
      for (const auto& cpt : w.last_contacts) {
        if (cpt.pair_id == phys::ContactPair::BoxEffector) {
          fy += (cpt.normal.y * cpt.normal_impulse - cpt.normal.z * cpt.tangent_impulse) /
                phys::kPhysicsDt;
        }
      }
      m.tipped = true;
      m.horizontal_force = fy;
      m.slide_distance = w.box.position.y - start_y;
      return m;
    }
  }
  m.slide_distance = w.box.position.y - start_y;
  return m;
}

// Deterministic hand-written pregrasp routine: approach the front face, push
// the box onto the support, then slide up the face while pressing. Returns
// the episode's max pitch.
inline double scripted_pivot_lift(env::PregraspEnv& e) {
  env::Observation obs = e.reset(e.config().defaults);
  const double radius = e.world_config().effector_radius;
  double max_pitch = 0.0;
  auto clamp_step = [](double delta, double bound) {
    return pregrasp::clamp(delta, -bound, bound);
  };
  for (int k = 0; k < e.config().horizon && e.episode_active(); ++k) {
    const auto face = phys::front_face(e.world_config().box, e.world().box);
    const Vec2 lo = face.first, hi = face.second;
    env::Action a{};
    const Vec2 cmd = e.command().position;
    if (obs.target_pitch < 0.02 && obs.d > 1e-4) {
      // approach a point just in front of the face at 45% face height
      const Vec2 target = lo + (hi - lo) * 0.45 +
                          rotate_pitch({-1.0, 0.0}, obs.target_pitch) * (radius - 2e-3);
      a.dy = clamp_step(target.y - cmd.y, env::kActionBounds[0]);
      a.dz = clamp_step(target.z - cmd.z, env::kActionBounds[1]);
    } else {
      // press in and climb the face
      const Vec2 inward = rotate_pitch({1.0, 0.0}, obs.target_pitch);
      const Vec2 up_face = rotate_pitch({0.0, 1.0}, obs.target_pitch);
      const Vec2 target = cmd + inward * 0.012 + up_face * 0.018;
      a.dy = clamp_step(target.y - cmd.y, env::kActionBounds[0]);
      a.dz = clamp_step(target.z - cmd.z, env::kActionBounds[1]);
    }
    const env::StepResult r = e.step(a);
    obs = r.observation;
    max_pitch = r.max_pitch_so_far;
    if (r.terminated) break;
  }
  return max_pitch;
}

}  // namespace testutil
