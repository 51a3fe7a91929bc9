#include "pregrasp/eval/tilt_oracle.hpp"

#include <cmath>

namespace pregrasp::eval {

double quasi_static_tilt_oracle(const phys::BoxGeometry& box,
                                const phys::MaterialParams& material, double tilt,
                                double push_height, double gravity) {
  if (!(tilt >= 0.0 && tilt < M_PI / 2.0)) {
    throw InfeasiblePivot("tilt must lie in [0, pi/2)");
  }
  const double l = 0.5 * box.length;
  const double c = 0.5 * box.height;
  const double sin_t = std::sin(tilt);
  const double cos_t = std::cos(tilt);

  // The front face spans these world heights while the box pivots on its
  // support-side bottom corner.
  const double face_lo = box.length * sin_t;
  const double face_hi = box.length * sin_t + box.height * cos_t;
  if (!(push_height > face_lo && push_height <= face_hi)) {
    throw InfeasiblePivot("push point lies off the front face");
  }

  // A horizontal force on the face tilted by `tilt` needs a tangential
  // component f = N*tan(tilt); outside the contact cone the pusher slips
  // down the face instead of sustaining the pivot.
  if (std::tan(tilt) > material.friction_box_effector) {
    throw InfeasiblePivot("contact friction cone cannot hold a horizontal push at this tilt");
  }

  // Moment balance about the pivot corner (all corner reactions pass through
  // it): push lever is the push height, gravity lever the horizontal COM
  // offset. See docs/tilt_oracle.md for the full static analysis.
  const double weight = box.mass * gravity;
  const double gravity_lever = l * cos_t - c * sin_t;
  if (gravity_lever <= 0.0) return 0.0;  // past the balance point
  return weight * gravity_lever / push_height;
}

}  // namespace pregrasp::eval
