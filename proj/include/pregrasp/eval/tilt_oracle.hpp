#pragma once

#include <stdexcept>

#include "pregrasp/physics/types.hpp"

namespace pregrasp::eval {

struct InfeasiblePivot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Horizontal push force required to hold the box at the margin of pivoting
// about its support-side bottom corner, applied on the front face at
// `push_height` above the table. Moment balance about the pivot corner plus
// a friction-cone feasibility check at that corner; the closed-form
// derivation is in docs/tilt_oracle.md.
//
// Throws InfeasiblePivot when table friction cannot anchor the corner (the
// box would slide instead of pivoting) or when the push point lies off the
// face.
double quasi_static_tilt_oracle(const phys::BoxGeometry& box,
                                const phys::MaterialParams& material, double tilt,
                                double push_height, double gravity = 9.81);

}  // namespace pregrasp::eval
