#pragma once

#include <fstream>
#include <string>

#include "pregrasp/sac/trainer.hpp"

namespace pregrasp::io {

// One JSON-object-shaped record per line with a fixed field order
// (env_steps, critic1_loss, critic2_loss, actor_loss, alpha,
// eval_success_rate, eval_mean_max_pitch). Lines are written whole and
// flushed, so an interrupted run still parses.
std::string metrics_line(const sac::EvalRecord& rec);

class MetricsWriter {
 public:
  MetricsWriter(const std::string& path, const std::string& config_hash, std::uint64_t seed);
  void add(const sac::EvalRecord& rec);

 private:
  std::ofstream out_;
};

}  // namespace pregrasp::io
