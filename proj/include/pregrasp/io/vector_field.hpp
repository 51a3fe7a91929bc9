#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pregrasp/io/config.hpp"
#include "pregrasp/sac/policy.hpp"

namespace pregrasp::io {

struct FieldOutsideWorkspace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid over effector positions at a fixed pitch, against a frozen scene.
struct VectorFieldSpec {
  double y_min = -0.30, y_max = 0.33;
  int ny = 22;
  double z_min = 0.02, z_max = 0.44;
  int nz = 22;
  double fixed_pitch = -2.75;
  env::ScenarioParams scene;          // support pose, geometry, friction
  phys::RigidBodyState2D box_state;   // frozen box pose for the observations
};

struct FieldSample {
  double y = 0.0, z = 0.0;
  double dy = 0.0, dz = 0.0;
};

// Evaluates the mean policy on every grid point. Throws
// FieldOutsideWorkspace when the grid leaves the command workspace.
std::vector<FieldSample> sample_vector_field(const env::EnvConfig& cfg,
                                             const nn::MlpParams& actor,
                                             const VectorFieldSpec& spec);

// CSV (canonical) plus an optional self-contained SVG rendering.
void export_vector_field(const env::EnvConfig& cfg, const nn::MlpParams& actor,
                         const VectorFieldSpec& spec, const std::string& csv_path,
                         const std::optional<std::string>& svg_path,
                         const std::string& config_hash, std::uint64_t seed);

// Fraction of grid points in front of the box face (at box heights) whose
// action points toward the object; the trained policy's attractor check.
double toward_object_fraction(const std::vector<FieldSample>& samples,
                              const phys::BoxGeometry& geom,
                              const phys::RigidBodyState2D& box_state);

// Builds the default spec from a settled default-scenario scene.
VectorFieldSpec default_field_spec(const env::EnvConfig& cfg);

}  // namespace pregrasp::io
