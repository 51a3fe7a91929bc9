#include "pregrasp/env/scenario.hpp"

namespace pregrasp::env {
namespace {

void check_row(const char* name, const RandomizationRow& row) {
  if (row.lo > row.hi) {
    throw InvalidTable(std::string("randomization row ") + name + ": min > max");
  }
  if (!(row.probability >= 0.0 && row.probability <= 1.0)) {
    throw InvalidTable(std::string("randomization row ") + name +
                       ": probability outside [0, 1]");
  }
}

double draw(const RandomizationRow& row, Rng& rng) {
  if (row.probability > 0.0 && rng.bernoulli(row.probability)) {
    return rng.uniform(row.lo, row.hi);
  }
  return row.value;
}

}  // namespace

void RandomizationTable::validate() const {
  check_row("mass", mass);
  check_row("friction", friction);
  check_row("object_y", object_y);
  check_row("support_y", support_y);
  check_row("eff_y", eff_y);
  check_row("eff_z", eff_z);
  check_row("eff_pitch", eff_pitch);
  if (!(reference_probability >= 0.0 && reference_probability <= 1.0)) {
    throw InvalidTable("reference initialisation probability outside [0, 1]");
  }
}

ScenarioParams sample_scenario(const RandomizationTable& table, const ScenarioParams& base,
                               Rng& rng, bool allow_reference) {
  table.validate();
  ScenarioParams p = base;
  p.box_mass = draw(table.mass, rng);
  p.friction = draw(table.friction, rng);
  p.box_position_y = draw(table.object_y, rng);
  p.support_position_y = draw(table.support_y, rng);
  p.eff_init.y = draw(table.eff_y, rng);
  p.eff_init.z = draw(table.eff_z, rng);
  p.eff_init.pitch = draw(table.eff_pitch, rng);
  p.box_geometry = phys::BoxGeometry::make(base.box_geometry.length, base.box_geometry.height,
                                           p.box_mass);
  p.used_reference_init =
      allow_reference && table.reference_probability > 0.0 && rng.bernoulli(table.reference_probability);
  return p;
}

}  // namespace pregrasp::env
