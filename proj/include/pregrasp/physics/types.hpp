#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pregrasp/geom.hpp"

namespace pregrasp::phys {

struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Target box: a rectangle of `length` (horizontal extent when flat) by
// `height`, uniform density.
struct BoxGeometry {
  double length = 0.17;
  double height = 0.06;
  double mass = 0.08;
  double moment_of_inertia = 0.08 * (0.17 * 0.17 + 0.06 * 0.06) / 12.0;

  static BoxGeometry make(double length, double height, double mass) {
    BoxGeometry g;
    g.length = length;
    g.height = height;
    g.mass = mass;
    g.moment_of_inertia = mass * (length * length + height * height) / 12.0;
    return g;
  }
  bool valid() const {
    if (!(length > 0.0 && height > 0.0 && mass > 0.0)) return false;
    const double expect = mass * (length * length + height * height) / 12.0;
    return std::abs(moment_of_inertia - expect) <= 1e-12 * expect;
  }
};

// Planar pose and twist of the box. `pitch` follows the lifting-positive
// convention of geom.hpp and is kept in (-pi, pi].
struct RigidBodyState2D {
  Vec2 position;            // center of mass (y, z)
  double pitch = 0.0;
  Vec2 linear_velocity;
  double angular_velocity = 0.0;

  bool finite() const {
    return position.finite() && linear_velocity.finite() &&
           std::isfinite(pitch) && std::isfinite(angular_velocity);
  }
};

// Kinematically commanded spherical end-effector (a circle in the plane).
// The actual pose chases `commanded` through a critically damped tracker;
// contact impulses act on it through its (large, finite) mass.
struct EffectorState {
  Vec2 center;
  double pitch = 0.0;
  double radius = 0.02;
  Vec2 velocity;
  double pitch_velocity = 0.0;
  Vec2 commanded;
  double commanded_pitch = 0.0;
  // Zero-order-held tracker outputs, refreshed at the tracker rate.
  Vec2 hold_force;
  double hold_pitch_accel = 0.0;

  bool finite() const {
    return center.finite() && velocity.finite() && commanded.finite() &&
           hold_force.finite() && std::isfinite(pitch) &&
           std::isfinite(pitch_velocity) && std::isfinite(commanded_pitch) &&
           std::isfinite(hold_pitch_accel);
  }
};

struct MaterialParams {
  double friction_box_table = 0.40;
  double friction_box_support = 0.40;
  double friction_box_effector = 1.40;
  double restitution = 0.0;  // quasi-static task, fixed
};

enum class ContactPair : std::uint8_t {
  BoxTable,
  BoxSupport,
  BoxEffector,
  EffectorTable,
  EffectorSupport,
};

struct ContactPoint {
  Vec2 point;
  Vec2 normal;  // pushes the first body of the pair out of the second
  double penetration_depth = 0.0;
  double normal_impulse = 0.0;
  double tangent_impulse = 0.0;
  ContactPair pair_id = ContactPair::BoxTable;
  int feature = 0;  // corner index for box contacts, 0 otherwise
};

// Static support surface: a segment anchored at (base_y, 0) rising at
// `inclination` from the table plane (pi/2 = vertical wall). Inclinations
// below pi/2 lean away from the box.
struct SupportSurface {
  double base_y = 0.35;
  double inclination = M_PI / 2.0;
  double height = 0.5;

  Vec2 base() const { return {base_y, 0.0}; }
  Vec2 direction() const { return {std::cos(inclination), std::sin(inclination)}; }
  Vec2 top() const { return base() + direction() * height; }
  // Unit normal pointing toward the box side (smaller y).
  Vec2 normal() const { return {-std::sin(inclination), std::cos(inclination)}; }
};

struct WorldConfig {
  BoxGeometry box;
  MaterialParams material;
  SupportSurface support;
  double gravity = 9.81;

  double effector_radius = 0.02;
  double effector_mass = 1.0;         // heavy relative to the box
  double tracker_omega = 90.0;        // critically damped, ~0.05 s settle
  double tracker_force_limit = 50.0;  // N, caps commanded push
  double tracker_torque_limit = 5.0;  // N·m equivalent on pitch
  int tracker_divisor = 2;            // tracker ticks once per 2 physics ticks

  int solver_iterations = 10;
  double baumgarte_beta = 0.2;
  // Projection target sits below the tolerance so the force-dependent
  // residual of the iterative solve stays inside the hard bound.
  double slop = 9e-5;
  double penetration_tolerance = 1e-4;
  int position_iterations = 40;
  double support_contact_cutoff = 0.03;  // ignore corners this far behind
};

struct StepDiagnostics {
  double max_penetration_pre = 0.0;   // before position correction
  double max_penetration_post = 0.0;  // after position correction
  double box_correction = 0.0;        // total projection distance on the box
};

struct WorldState {
  RigidBodyState2D box;
  EffectorState effector;
  std::uint64_t tick = 0;
  // Contacts solved during the most recent step, with impulses.
  std::vector<ContactPoint> last_contacts;
  StepDiagnostics diag;
};

// World-space corners of the box: [bottom-front, bottom-back, top-back,
// top-front], where "front" is the low-y face (the one opposing the support).
inline std::array<Vec2, 4> box_corners(const BoxGeometry& g, const RigidBodyState2D& s) {
  const double hl = 0.5 * g.length, hh = 0.5 * g.height;
  return {
      s.position + rotate_pitch({-hl, -hh}, s.pitch),
      s.position + rotate_pitch({+hl, -hh}, s.pitch),
      s.position + rotate_pitch({+hl, +hh}, s.pitch),
      s.position + rotate_pitch({-hl, +hh}, s.pitch),
  };
}

// Front face of the box (the face opposing the support surface), as a
// world-space segment from the bottom-front to the top-front corner.
inline std::pair<Vec2, Vec2> front_face(const BoxGeometry& g, const RigidBodyState2D& s) {
  const auto c = box_corners(g, s);
  return {c[0], c[3]};
}

}  // namespace pregrasp::phys
