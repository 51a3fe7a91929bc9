#include "pregrasp/physics/world.hpp"

#include <algorithm>
#include <cmath>

namespace pregrasp::phys {
namespace {

// Solver-facing view of a body: box and effector are dynamic, statics have
// zero inverse mass. The effector never rotates from contact (inv_inertia 0).
struct BodyRef {
  Vec2* velocity = nullptr;
  double* angular_velocity = nullptr;
  Vec2 position;  // center, for lever arms
  double inv_mass = 0.0;
  double inv_inertia = 0.0;
};

struct SolverContact {
  ContactPoint geom;
  int body_a = -1;  // 0 = box, 1 = effector, -1 = static
  int body_b = -1;
};

double pair_friction(const MaterialParams& m, ContactPair pair) {
  switch (pair) {
    case ContactPair::BoxTable: return m.friction_box_table;
    case ContactPair::BoxSupport: return m.friction_box_support;
    case ContactPair::BoxEffector: return m.friction_box_effector;
    // The effector is not the manipulated object; give its static contacts
    // the table/support coefficients of the box pair.
    case ContactPair::EffectorTable: return m.friction_box_table;
    case ContactPair::EffectorSupport: return m.friction_box_support;
  }
  return 0.0;
}

void keep_deepest_two(std::vector<ContactPoint>& pts, std::size_t first) {
  if (pts.size() - first <= 2) return;
  std::sort(pts.begin() + first, pts.end(), [](const ContactPoint& a, const ContactPoint& b) {
    if (a.penetration_depth != b.penetration_depth)
      return a.penetration_depth > b.penetration_depth;
    return a.feature < b.feature;
  });
  pts.resize(first + 2);
}

// Corner-vs-table contacts for the box (table = half plane z <= 0).
void box_table_contacts(const WorldConfig& cfg, const WorldState& s,
                        std::vector<ContactPoint>& out) {
  const std::size_t first = out.size();
  const auto corners = box_corners(cfg.box, s.box);
  for (int i = 0; i < 4; ++i) {
    if (corners[i].z <= 0.0) {
      ContactPoint c;
      c.point = corners[i];
      c.normal = {0.0, 1.0};
      c.penetration_depth = -corners[i].z;
      c.pair_id = ContactPair::BoxTable;
      c.feature = i;
      out.push_back(c);
    }
  }
  keep_deepest_two(out, first);
}

// Corner-vs-segment contacts for the box against the support surface.
// One-sided: only corners on the front side within a cutoff depth count.
void box_support_contacts(const WorldConfig& cfg, const WorldState& s,
                          std::vector<ContactPoint>& out) {
  const std::size_t first = out.size();
  const auto corners = box_corners(cfg.box, s.box);
  const Vec2 base = cfg.support.base();
  const Vec2 dir = cfg.support.direction();
  const Vec2 n = cfg.support.normal();
  for (int i = 0; i < 4; ++i) {
    const Vec2 rel = corners[i] - base;
    const double depth = -rel.dot(n);  // >0 once past the surface plane
    const double along = rel.dot(dir);
    if (depth >= 0.0 && depth <= cfg.support_contact_cutoff &&
        along >= 0.0 && along <= cfg.support.height) {
      ContactPoint c;
      c.point = corners[i];
      c.normal = n;
      c.penetration_depth = depth;
      c.pair_id = ContactPair::BoxSupport;
      c.feature = i;
      out.push_back(c);
    }
  }
  keep_deepest_two(out, first);
}

// Circle-vs-box contact (single point).
void box_effector_contact(const WorldConfig& cfg, const WorldState& s,
                          std::vector<ContactPoint>& out) {
  const double hl = 0.5 * cfg.box.length, hh = 0.5 * cfg.box.height;
  const double r = s.effector.radius;
  // Effector center in box frame.
  const Vec2 d = s.effector.center - s.box.position;
  const Vec2 local = rotate_pitch(d, -s.box.pitch);
  const Vec2 clamped{clamp(local.y, -hl, hl), clamp(local.z, -hh, hh)};
  ContactPoint c;
  c.pair_id = ContactPair::BoxEffector;
  if (local.y != clamped.y || local.z != clamped.z) {
    // Center outside the box: closest surface point.
    const Vec2 delta = local - clamped;
    const double dist = delta.norm();
    if (dist > r) return;
    const Vec2 world_closest = s.box.position + rotate_pitch(clamped, s.box.pitch);
    Vec2 n = (world_closest - s.effector.center) * (1.0 / dist);
    c.point = world_closest;
    c.normal = n;
    c.penetration_depth = r - dist;
  } else {
    // Center inside the box: exit through the nearest face.
    const double dists[4] = {hl - local.y, local.y + hl, hh - local.z, local.z + hh};
    int k = 0;
    for (int i = 1; i < 4; ++i)
      if (dists[i] < dists[k]) k = i;
    // Push the box away from the nearest face so the effector exits there.
    Vec2 local_n;
    switch (k) {
      case 0: local_n = {-1.0, 0.0}; break;
      case 1: local_n = {1.0, 0.0}; break;
      case 2: local_n = {0.0, -1.0}; break;
      default: local_n = {0.0, 1.0}; break;
    }
    c.normal = rotate_pitch(local_n, s.box.pitch);
    c.point = s.effector.center;
    c.penetration_depth = r + dists[k];
  }
  out.push_back(c);
}

void effector_table_contact(const WorldState& s, std::vector<ContactPoint>& out) {
  const double pen = s.effector.radius - s.effector.center.z;
  if (pen >= 0.0) {
    ContactPoint c;
    c.point = {s.effector.center.y, 0.0};
    c.normal = {0.0, 1.0};
    c.penetration_depth = pen;
    c.pair_id = ContactPair::EffectorTable;
    out.push_back(c);
  }
}

void effector_support_contact(const WorldConfig& cfg, const WorldState& s,
                              std::vector<ContactPoint>& out) {
  const Vec2 base = cfg.support.base();
  const Vec2 closest = closest_point_on_segment(s.effector.center, base, cfg.support.top());
  const Vec2 delta = s.effector.center - closest;
  const double dist = delta.norm();
  const double pen = s.effector.radius - dist;
  if (pen < 0.0) return;
  // One-sided: ignore once fully behind the surface plane.
  if ((s.effector.center - base).dot(cfg.support.normal()) < 0.0) return;
  ContactPoint c;
  c.point = closest;
  c.normal = dist > 1e-12 ? delta * (1.0 / dist) : cfg.support.normal();
  c.penetration_depth = pen;
  c.pair_id = ContactPair::EffectorSupport;
  out.push_back(c);
}

void assign_bodies(SolverContact& sc) {
  switch (sc.geom.pair_id) {
    case ContactPair::BoxTable:
    case ContactPair::BoxSupport: sc.body_a = 0; sc.body_b = -1; break;
    case ContactPair::BoxEffector: sc.body_a = 0; sc.body_b = 1; break;
    case ContactPair::EffectorTable:
    case ContactPair::EffectorSupport: sc.body_a = 1; sc.body_b = -1; break;
  }
}

Vec2 point_velocity(const BodyRef& b, const Vec2& r) {
  return *b.velocity + angular_velocity_arm(r) * (*b.angular_velocity);
}

void apply_impulse(BodyRef& b, const Vec2& j, const Vec2& r) {
  *b.velocity += j * b.inv_mass;
  *b.angular_velocity += b.inv_inertia * cross_pitch(r, j);
}

// Sequential-impulse velocity solve with accumulated clamping. Restitution is
// zero and there is no velocity bias; penetration is handled positionally.
// Each iteration runs every normal solve before any friction solve, so
// velocity injected through one contact is still damped by the friction of
// the others within the same pass.
void solve_velocities(const WorldConfig& cfg, std::array<BodyRef, 2>& bodies,
                      std::vector<SolverContact>& contacts) {
  auto body_pair = [&](SolverContact& sc) {
    return std::pair{sc.body_a >= 0 ? &bodies[sc.body_a] : nullptr,
                     sc.body_b >= 0 ? &bodies[sc.body_b] : nullptr};
  };
  auto rel_velocity = [](BodyRef* a, BodyRef* b, const Vec2& ra, const Vec2& rb) {
    Vec2 v{};
    if (a) v += point_velocity(*a, ra);
    if (b) v -= point_velocity(*b, rb);
    return v;
  };
  auto effective_mass = [](BodyRef* a, BodyRef* b, const Vec2& ra, const Vec2& rb,
                           const Vec2& dir) {
    double k = 0.0;
    if (a) {
      const double cn = cross_pitch(ra, dir);
      k += a->inv_mass + a->inv_inertia * cn * cn;
    }
    if (b) {
      const double cn = cross_pitch(rb, dir);
      k += b->inv_mass + b->inv_inertia * cn * cn;
    }
    return k;
  };

  for (int iter = 0; iter < cfg.solver_iterations; ++iter) {
    for (auto& sc : contacts) {
      auto [a, b] = body_pair(sc);
      const Vec2 ra = a ? sc.geom.point - a->position : Vec2{};
      const Vec2 rb = b ? sc.geom.point - b->position : Vec2{};
      const Vec2 n = sc.geom.normal;
      const double vn = rel_velocity(a, b, ra, rb).dot(n);
      const double k = effective_mass(a, b, ra, rb, n);
      if (k <= 0.0) continue;
      const double dj = -vn / k;
      const double old = sc.geom.normal_impulse;
      sc.geom.normal_impulse = std::max(0.0, old + dj);
      const Vec2 j = n * (sc.geom.normal_impulse - old);
      if (a) apply_impulse(*a, j, ra);
      if (b) apply_impulse(*b, -j, rb);
    }
    for (auto& sc : contacts) {
      auto [a, b] = body_pair(sc);
      const Vec2 ra = a ? sc.geom.point - a->position : Vec2{};
      const Vec2 rb = b ? sc.geom.point - b->position : Vec2{};
      const Vec2 n = sc.geom.normal;
      const Vec2 t{-n.z, n.y};
      const double mu = pair_friction(cfg.material, sc.geom.pair_id);
      const double vt = rel_velocity(a, b, ra, rb).dot(t);
      const double k = effective_mass(a, b, ra, rb, t);
      if (k <= 0.0) continue;
      const double dj = -vt / k;
      const double limit = mu * sc.geom.normal_impulse;
      const double old = sc.geom.tangent_impulse;
      sc.geom.tangent_impulse = clamp(old + dj, -limit, limit);
      const Vec2 j = t * (sc.geom.tangent_impulse - old);
      if (a) apply_impulse(*a, j, ra);
      if (b) apply_impulse(*b, -j, rb);
    }
  }
}

// Translation-only position projection (nonlinear Gauss-Seidel) pushing
// penetrations down to the slop. Box-vs-static overlaps move the box;
// everything involving the effector moves the effector. The box is never
// dragged sideways by projection, so static friction cannot be bypassed.
void solve_positions(const WorldConfig& cfg, WorldState& s) {
  double first_pass_max = 0.0;
  double total_box_corr = 0.0;
  double max_pen = 0.0;
  for (int iter = 0; iter <= cfg.position_iterations; ++iter) {
    auto contacts = detect_contacts(cfg, s);
    max_pen = 0.0;
    for (const auto& c : contacts) max_pen = std::max(max_pen, c.penetration_depth);
    if (iter == 0) first_pass_max = max_pen;
    if (max_pen <= cfg.slop * (1.0 + 1e-9) || iter == cfg.position_iterations) break;
    for (const auto& c : contacts) {
      const double excess = c.penetration_depth - cfg.slop;
      if (excess <= 0.0) continue;
      const Vec2 push = c.normal * (cfg.baumgarte_beta * excess);
      switch (c.pair_id) {
        case ContactPair::BoxTable:
        case ContactPair::BoxSupport:
          s.box.position += push;
          total_box_corr += cfg.baumgarte_beta * excess;
          break;
        case ContactPair::BoxEffector:
          s.effector.center -= push;  // normal points effector -> box
          break;
        case ContactPair::EffectorTable:
        case ContactPair::EffectorSupport:
          s.effector.center += push;
          break;
      }
    }
  }
  s.diag.max_penetration_pre = first_pass_max;
  s.diag.max_penetration_post = max_pen;
  s.diag.box_correction = total_box_corr;
}

void update_tracker(const WorldConfig& cfg, EffectorState& eff) {
  const double w = cfg.tracker_omega;
  // Critically damped PD toward the commanded pose, force-capped.
  Vec2 accel = (eff.commanded - eff.center) * (w * w) - eff.velocity * (2.0 * w);
  Vec2 force = accel * cfg.effector_mass;
  const double mag = force.norm();
  if (mag > cfg.tracker_force_limit) force = force * (cfg.tracker_force_limit / mag);
  eff.hold_force = force;

  double pitch_acc = (eff.commanded_pitch - eff.pitch) * (w * w) - eff.pitch_velocity * (2.0 * w);
  const double torque_cap = cfg.tracker_torque_limit / cfg.effector_mass;
  eff.hold_pitch_accel = clamp(pitch_acc, -torque_cap, torque_cap);
}

}  // namespace

WorldState make_world(const WorldConfig& cfg, const Vec2& box_position, double box_pitch,
                      const Vec2& effector_center, double effector_pitch) {
  WorldState s;
  s.box.position = box_position;
  s.box.pitch = box_pitch;
  s.effector.center = effector_center;
  s.effector.pitch = effector_pitch;
  s.effector.commanded = effector_center;
  s.effector.commanded_pitch = effector_pitch;
  s.effector.radius = cfg.effector_radius;
  return s;
}

std::vector<ContactPoint> detect_contacts(const WorldConfig& cfg, const WorldState& state) {
  std::vector<ContactPoint> out;
  out.reserve(6);
  box_table_contacts(cfg, state, out);
  box_support_contacts(cfg, state, out);
  box_effector_contact(cfg, state, out);
  effector_table_contact(state, out);
  effector_support_contact(cfg, state, out);
  return out;
}

double signed_clearance(const BoxGeometry& geom, const EffectorState& eff,
                        const RigidBodyState2D& box) {
  const auto [a, b] = front_face(geom, box);
  const Vec2 closest = closest_point_on_segment(eff.center, a, b);
  const double d = (eff.center - closest).norm() - eff.radius;
  return d > 1e-12 ? d : 0.0;  // exact zero at (numerical) touch
}

void step(const WorldConfig& cfg, WorldState& s) {
  const double dt = kPhysicsDt;

  if (s.tick % static_cast<std::uint64_t>(cfg.tracker_divisor) == 0) {
    update_tracker(cfg, s.effector);
  }

  // Integrate forces into velocities (semi-implicit Euler).
  s.box.linear_velocity.z -= cfg.gravity * dt;
  s.effector.velocity += s.effector.hold_force * (dt / cfg.effector_mass);
  s.effector.pitch_velocity += s.effector.hold_pitch_accel * dt;

  // Contact solve at current positions.
  auto geom_contacts = detect_contacts(cfg, s);
  std::vector<SolverContact> contacts;
  contacts.reserve(geom_contacts.size());
  for (const auto& c : geom_contacts) {
    SolverContact sc{c, -1, -1};
    assign_bodies(sc);
    contacts.push_back(sc);
  }
  std::array<BodyRef, 2> bodies;
  bodies[0] = {&s.box.linear_velocity, &s.box.angular_velocity, s.box.position,
               1.0 / cfg.box.mass, 1.0 / cfg.box.moment_of_inertia};
  bodies[1] = {&s.effector.velocity, &s.effector.pitch_velocity, s.effector.center,
               1.0 / cfg.effector_mass, 0.0};
  solve_velocities(cfg, bodies, contacts);

  // Integrate positions.
  s.box.position += s.box.linear_velocity * dt;
  s.box.pitch = wrap_angle(s.box.pitch + s.box.angular_velocity * dt);
  s.effector.center += s.effector.velocity * dt;
  s.effector.pitch += s.effector.pitch_velocity * dt;

  solve_positions(cfg, s);

  s.last_contacts.clear();
  for (const auto& sc : contacts) s.last_contacts.push_back(sc.geom);
  s.tick += 1;

  if (!s.box.finite() || !s.effector.finite()) {
    throw NonFiniteState("physics state became non-finite at tick " + std::to_string(s.tick));
  }
}

void apply_angular_impulse(const WorldConfig& cfg, WorldState& s, double momentum) {
  auto contacts = detect_contacts(cfg, s);
  const bool on_support = std::any_of(contacts.begin(), contacts.end(), [](const ContactPoint& c) {
    return c.pair_id == ContactPair::BoxSupport;
  });
  if (!on_support) {
    throw InvalidState("angular impulse requires the box to rest against the support");
  }
  s.box.angular_velocity -= momentum / cfg.box.moment_of_inertia;
}

}  // namespace pregrasp::phys
