#pragma once

#include <ostream>
#include <string>

#include "pregrasp/env/env.hpp"
#include "pregrasp/sac/networks.hpp"

namespace pregrasp::io {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full run configuration: seed + SAC + reward + randomization table +
// geometry/env settings. Parsed from a flat sectioned key-value file.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "runs/default";

  sac::SacConfig sac;
  env::RewardConfig reward;
  env::RandomizationTable table;

  double box_length = 0.17;
  double box_height = 0.06;
  double support_inclination = M_PI / 2.0;
  double support_height = 0.5;
  double effector_radius = 0.02;
  double effector_mass = 1.0;
  double tracker_omega = 90.0;
  double tracker_force_limit = 50.0;
  double friction_box_effector = 1.40;

  int horizon = 100;
  double pitch_limit = 0.785;
  bool allow_reference_init = true;
  env::Workspace workspace;
};

// Parses and validates; defaults applied for omitted keys are logged to
// `default_log` (one line per key) when given. Unknown keys are rejected.
RunConfig parse_config(const std::string& path, std::ostream* default_log = nullptr);
RunConfig parse_config_text(const std::string& text, std::ostream* default_log = nullptr);

// Canonical emission; parse_config_text(emit_config(c)) reproduces c.
std::string emit_config(const RunConfig& cfg);

// FNV-1a hash of the canonical emission with seed and out_dir excluded.
std::string config_hash(const RunConfig& cfg);

env::EnvConfig make_env_config(const RunConfig& cfg);

}  // namespace pregrasp::io
