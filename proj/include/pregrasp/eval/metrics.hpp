#pragma once

#include <cmath>
#include <stdexcept>

namespace pregrasp::eval {

struct NonPositiveLength : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Task-completion criterion: the pregrasp succeeds when the clearance opened
// at the grasp point exceeds w, i.e. lambda * L * tan(pitch) > w.
struct CompletionCriterion {
  double lambda = 0.9;  // grasp point at this fraction of the length
  double w = 0.05;      // required clearance, meters
};

// Minimal lift angle for a box of length L: arctan(w / (lambda * L)).
inline double lift_threshold_angle(double length, const CompletionCriterion& c = {}) {
  if (!(length > 0.0)) throw NonPositiveLength("box length must be positive");
  return std::atan(c.w / (c.lambda * length));
}

// Strict inequality: exactly at the threshold is a failure.
inline bool task_success(double length, double max_pitch, const CompletionCriterion& c = {}) {
  if (!(length > 0.0)) throw NonPositiveLength("box length must be positive");
  return c.lambda * length * std::tan(max_pitch) > c.w;
}

// Falling-object disturbance: mass m dropped from height h at moment arm r.
struct DisturbanceSpec {
  double drop_mass = 0.028;
  double moment_arm = 0.16;
  double drop_height = 0.5;
  double gravity = 9.81;
};

// Angular momentum delivered by the drop: m * r * sqrt(2 g h).
inline double disturbance_momentum(const DisturbanceSpec& s) {
  return s.drop_mass * s.moment_arm * std::sqrt(2.0 * s.gravity * s.drop_height);
}

}  // namespace pregrasp::eval
