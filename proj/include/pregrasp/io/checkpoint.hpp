#pragma once

#include <string>

#include "pregrasp/sac/networks.hpp"

namespace pregrasp::io {

struct CheckpointVersionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckpointCorrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::string config_hash;
};

// Versioned flat file: text header (magic, version, meta, layer shapes,
// Adam step counts) followed by all parameters as little-endian IEEE-754
// doubles in declared order. Round-trips are bit-exact. Written atomically.
void save_checkpoint(const std::string& path, const sac::Networks& nets,
                     const CheckpointMeta& meta);

sac::Networks load_checkpoint(const std::string& path, CheckpointMeta* meta = nullptr);

}  // namespace pregrasp::io
