#pragma once

#include <string>
#include <vector>

#include "pregrasp/env/env.hpp"
#include "pregrasp/io/config.hpp"

namespace pregrasp::io {

struct ReplayMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TraceStep {
  int t = 0;
  std::array<double, 7> observation{};
  std::array<double, 3> action{};
  double reward = 0.0;
  env::TerminationReason reason = env::TerminationReason::None;
};

// One dumped episode: provenance, the exact initial world snapshot, and the
// per-action records. Line format is plain text with %.17g doubles, so
// parsing back reproduces the exact bits.
struct EpisodeTrace {
  std::string config_hash;
  std::uint64_t seed = 0;
  env::ScenarioParams scenario;
  phys::RigidBodyState2D box0;
  phys::EffectorState effector0;
  std::vector<TraceStep> steps;
};

void write_trace(const std::string& path, const EpisodeTrace& trace);
EpisodeTrace read_trace(const std::string& path);

// Re-simulates the dumped episode under `cfg` and verifies bitwise equality
// of every observation, reward, and termination reason. Throws
// ReplayMismatch (or ValidationError when the config hash differs).
void replay_trace(const RunConfig& cfg, const std::string& path);

// Runs one episode with the mean policy and records it.
EpisodeTrace record_episode(const RunConfig& cfg, const nn::MlpParams& actor,
                            std::uint64_t env_seed);

}  // namespace pregrasp::io
