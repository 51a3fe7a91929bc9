#pragma once

#include <stdexcept>

#include "pregrasp/physics/types.hpp"
#include "pregrasp/rng.hpp"

namespace pregrasp::env {

struct InvalidTable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One physics-randomization row: with `probability` the default is replaced
// by a uniform draw in [lo, hi].
struct RandomizationRow {
  double value = 0.0;  // default
  double lo = 0.0;
  double hi = 0.0;
  double probability = 0.0;
};

struct RandomizationTable {
  RandomizationRow mass{0.08, 0.02, 0.10, 0.30};
  RandomizationRow friction{0.40, 0.20, 0.80, 0.25};
  RandomizationRow object_y{0.21, 0.16, 0.23, 0.20};
  RandomizationRow support_y{0.35, 0.32, 0.38, 0.05};
  RandomizationRow eff_y{0.00, -0.30, 0.10, 0.40};
  RandomizationRow eff_z{0.18, 0.17, 0.25, 0.40};
  RandomizationRow eff_pitch{-2.75, -2.80, -2.40, 0.40};
  double reference_probability = 0.05;

  void validate() const;
};

struct EffectorInit {
  double y = 0.0;
  double z = 0.18;
  double pitch = -2.75;
};

// One sampled draw of the randomization table plus geometry.
struct ScenarioParams {
  double box_mass = 0.08;
  double friction = 0.40;
  double box_position_y = 0.21;
  double support_position_y = 0.35;
  EffectorInit eff_init;
  phys::BoxGeometry box_geometry;
  double support_inclination = M_PI / 2.0;
  bool used_reference_init = false;
};

// Draws each row independently (fixed row order: mass, friction, object_y,
// support_y, eff_y, eff_z, eff_pitch, then the reference-init coin).
// `base` supplies geometry and any non-randomized values; set
// `allow_reference` false for evaluation episodes.
ScenarioParams sample_scenario(const RandomizationTable& table, const ScenarioParams& base,
                               Rng& rng, bool allow_reference = true);

}  // namespace pregrasp::env
