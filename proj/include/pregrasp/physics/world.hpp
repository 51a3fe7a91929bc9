#pragma once

#include "pregrasp/physics/types.hpp"

namespace pregrasp::phys {

inline constexpr double kPhysicsDt = 1e-3;  // 1 kHz fixed step

// Builds a world with the box resting pose and effector pose given; the
// effector command is initialized to its actual pose.
WorldState make_world(const WorldConfig& cfg, const Vec2& box_position, double box_pitch,
                      const Vec2& effector_center, double effector_pitch);

// Advances the world by one fixed 1 kHz step: tracker update (every
// cfg.tracker_divisor ticks), gravity, contact detection, sequential-impulse
// velocity solve, integration, and position projection down to the slop.
// Throws NonFiniteState if the state stops being finite.
void step(const WorldConfig& cfg, WorldState& state);

// Geometric contact query at the current positions (impulse fields zero).
// At most two points per overlapping pair; empty when all clearances > 0.
std::vector<ContactPoint> detect_contacts(const WorldConfig& cfg, const WorldState& state);

// Distance from the effector sphere surface to the box front face, clamped
// to >= 0 (exactly 0 at or beyond touch).
double signed_clearance(const BoxGeometry& geom, const EffectorState& eff,
                        const RigidBodyState2D& box);

// Removes `momentum` of angular momentum from the box in the toppling
// (negative pitch) direction. Requires an active box-support contact.
void apply_angular_impulse(const WorldConfig& cfg, WorldState& state, double momentum);

}  // namespace pregrasp::phys
