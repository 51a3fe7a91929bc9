#include "pregrasp/io/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace pregrasp::io {

std::string metrics_line(const sac::EvalRecord& rec) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "{\"env_steps\": %" PRId64
                ", \"critic1_loss\": %.17g, \"critic2_loss\": %.17g, \"actor_loss\": %.17g, "
                "\"alpha\": %.17g, \"eval_success_rate\": %.17g, \"eval_mean_max_pitch\": %.17g}",
                rec.env_steps, rec.critic1_loss, rec.critic2_loss, rec.actor_loss, rec.alpha,
                rec.eval_success_rate, rec.eval_mean_max_pitch);
  return buf;
}

MetricsWriter::MetricsWriter(const std::string& path, const std::string& config_hash,
                             std::uint64_t seed) {
  out_.open(path, std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot open metrics log: " + path);
  out_ << "# config_hash=" << config_hash << " seed=" << seed << "\n";
  out_.flush();
}

void MetricsWriter::add(const sac::EvalRecord& rec) {
  out_ << metrics_line(rec) << "\n";
  out_.flush();
}

}  // namespace pregrasp::io
