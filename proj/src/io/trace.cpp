#include "pregrasp/io/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pregrasp/io/atomic_file.hpp"
#include "pregrasp/sac/policy.hpp"

namespace pregrasp::io {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_kv(std::ostream& out, const char* key, double v) {
  out << key << " " << fmt(v) << "\n";
}

double parse_double(std::istringstream& in, const std::string& line) {
  double v;
  if (!(in >> v)) throw ReplayMismatch("malformed trace line: " + line);
  return v;
}

}  // namespace

void write_trace(const std::string& path, const EpisodeTrace& tr) {
  std::ostringstream out;
  out << "# config_hash=" << tr.config_hash << " seed=" << tr.seed << "\n";
  out << "trace 1\n";
  emit_kv(out, "scenario.box_mass", tr.scenario.box_mass);
  emit_kv(out, "scenario.friction", tr.scenario.friction);
  emit_kv(out, "scenario.box_position_y", tr.scenario.box_position_y);
  emit_kv(out, "scenario.support_position_y", tr.scenario.support_position_y);
  emit_kv(out, "scenario.eff_y", tr.scenario.eff_init.y);
  emit_kv(out, "scenario.eff_z", tr.scenario.eff_init.z);
  emit_kv(out, "scenario.eff_pitch", tr.scenario.eff_init.pitch);
  emit_kv(out, "scenario.box_length", tr.scenario.box_geometry.length);
  emit_kv(out, "scenario.box_height", tr.scenario.box_geometry.height);
  emit_kv(out, "scenario.support_inclination", tr.scenario.support_inclination);
  out << "scenario.reference_init " << (tr.scenario.used_reference_init ? 1 : 0) << "\n";

  const auto& b = tr.box0;
  out << "box0 " << fmt(b.position.y) << " " << fmt(b.position.z) << " " << fmt(b.pitch) << " "
      << fmt(b.linear_velocity.y) << " " << fmt(b.linear_velocity.z) << " "
      << fmt(b.angular_velocity) << "\n";
  const auto& e = tr.effector0;
  out << "effector0 " << fmt(e.center.y) << " " << fmt(e.center.z) << " " << fmt(e.pitch) << " "
      << fmt(e.radius) << " " << fmt(e.velocity.y) << " " << fmt(e.velocity.z) << " "
      << fmt(e.pitch_velocity) << " " << fmt(e.commanded.y) << " " << fmt(e.commanded.z) << " "
      << fmt(e.commanded_pitch) << " " << fmt(e.hold_force.y) << " " << fmt(e.hold_force.z) << " "
      << fmt(e.hold_pitch_accel) << "\n";
  out << "steps " << tr.steps.size() << "\n";
  for (const TraceStep& s : tr.steps) {
    out << "step " << s.t;
    for (double v : s.observation) out << " " << fmt(v);
    for (double v : s.action) out << " " << fmt(v);
    out << " " << fmt(s.reward) << " " << env::to_string(s.reason) << "\n";
  }
  atomic_write(path, out.str());
}

EpisodeTrace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ReplayMismatch("cannot open trace: " + path);
  EpisodeTrace tr;
  std::string line;

  if (!std::getline(in, line) || line.rfind("# config_hash=", 0) != 0) {
    throw ReplayMismatch("trace missing provenance header");
  }
  {
    std::istringstream hdr(line.substr(2));
    std::string tok;
    while (hdr >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "config_hash") tr.config_hash = value;
      if (key == "seed") tr.seed = std::stoull(value);
    }
  }
  if (!std::getline(in, line) || line != "trace 1") {
    throw ReplayMismatch("unsupported trace version: " + line);
  }

  auto expect_kv = [&](const char* key) {
    if (!std::getline(in, line)) throw ReplayMismatch(std::string("trace truncated before ") + key);
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) throw ReplayMismatch(std::string("expected ") + key + ", got: " + line);
    return parse_double(ls, line);
  };

  tr.scenario.box_mass = expect_kv("scenario.box_mass");
  tr.scenario.friction = expect_kv("scenario.friction");
  tr.scenario.box_position_y = expect_kv("scenario.box_position_y");
  tr.scenario.support_position_y = expect_kv("scenario.support_position_y");
  tr.scenario.eff_init.y = expect_kv("scenario.eff_y");
  tr.scenario.eff_init.z = expect_kv("scenario.eff_z");
  tr.scenario.eff_init.pitch = expect_kv("scenario.eff_pitch");
  const double length = expect_kv("scenario.box_length");
  const double height = expect_kv("scenario.box_height");
  tr.scenario.box_geometry = phys::BoxGeometry::make(length, height, tr.scenario.box_mass);
  tr.scenario.support_inclination = expect_kv("scenario.support_inclination");
  tr.scenario.used_reference_init = expect_kv("scenario.reference_init") != 0.0;

  if (!std::getline(in, line)) throw ReplayMismatch("trace truncated before box0");
  {
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != "box0") throw ReplayMismatch("expected box0: " + line);
    tr.box0.position.y = parse_double(ls, line);
    tr.box0.position.z = parse_double(ls, line);
    tr.box0.pitch = parse_double(ls, line);
    tr.box0.linear_velocity.y = parse_double(ls, line);
    tr.box0.linear_velocity.z = parse_double(ls, line);
    tr.box0.angular_velocity = parse_double(ls, line);
  }
  if (!std::getline(in, line)) throw ReplayMismatch("trace truncated before effector0");
  {
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != "effector0") throw ReplayMismatch("expected effector0: " + line);
    auto& e = tr.effector0;
    e.center.y = parse_double(ls, line);
    e.center.z = parse_double(ls, line);
    e.pitch = parse_double(ls, line);
    e.radius = parse_double(ls, line);
    e.velocity.y = parse_double(ls, line);
    e.velocity.z = parse_double(ls, line);
    e.pitch_velocity = parse_double(ls, line);
    e.commanded.y = parse_double(ls, line);
    e.commanded.z = parse_double(ls, line);
    e.commanded_pitch = parse_double(ls, line);
    e.hold_force.y = parse_double(ls, line);
    e.hold_force.z = parse_double(ls, line);
    e.hold_pitch_accel = parse_double(ls, line);
  }

  if (!std::getline(in, line)) throw ReplayMismatch("trace truncated before steps");
  std::size_t n = 0;
  {
    std::istringstream ls(line);
    std::string k;
    ls >> k >> n;
    if (k != "steps") throw ReplayMismatch("expected steps count: " + line);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ReplayMismatch("trace truncated in steps");
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != "step") throw ReplayMismatch("expected step line: " + line);
    TraceStep s;
    if (!(ls >> s.t)) throw ReplayMismatch("bad step index: " + line);
    for (double& v : s.observation) v = parse_double(ls, line);
    for (double& v : s.action) v = parse_double(ls, line);
    s.reward = parse_double(ls, line);
    std::string reason;
    ls >> reason;
    const auto r = env::termination_from_string(reason);
    if (!r) throw ReplayMismatch("bad termination reason: " + line);
    s.reason = *r;
    tr.steps.push_back(s);
  }
  return tr;
}

EpisodeTrace record_episode(const RunConfig& cfg, const nn::MlpParams& actor,
                            std::uint64_t env_seed) {
  const env::EnvConfig env_cfg = make_env_config(cfg);
  env::PregraspEnv e(env_cfg, env_seed);
  EpisodeTrace tr;
  tr.config_hash = config_hash(cfg);
  tr.seed = env_seed;

  env::Observation obs = e.reset();
  tr.scenario = e.scenario();
  tr.box0 = e.world().box;
  tr.effector0 = e.world().effector;

  int t = 0;
  while (e.episode_active()) {
    const env::Action a = sac::policy_mean(actor, obs);
    const env::StepResult r = e.step(a);
    TraceStep s;
    s.t = ++t;
    s.observation = r.observation.as_array();
    s.action = a.as_array();
    s.reward = r.reward;
    s.reason = r.reason;
    tr.steps.push_back(s);
    obs = r.observation;
  }
  return tr;
}

void replay_trace(const RunConfig& cfg, const std::string& path) {
  const EpisodeTrace tr = read_trace(path);
  const std::string expected_hash = config_hash(cfg);
  if (tr.config_hash != expected_hash) {
    throw ValidationError("trace was recorded under config hash " + tr.config_hash +
                          " but the current config hashes to " + expected_hash);
  }
  const env::EnvConfig env_cfg = make_env_config(cfg);
  env::PregraspEnv e(env_cfg, /*seed=*/tr.seed);
  e.reset_from_snapshot(tr.scenario, tr.box0, tr.effector0);

  for (const TraceStep& s : tr.steps) {
    if (!e.episode_active()) {
      throw ReplayMismatch("episode ended before step " + std::to_string(s.t));
    }
    const env::StepResult r = e.step(env::Action::from_array(s.action));
    const auto obs = r.observation.as_array();
    for (std::size_t i = 0; i < obs.size(); ++i) {
      if (obs[i] != s.observation[i]) {
        throw ReplayMismatch("observation mismatch at step " + std::to_string(s.t) +
                             " component " + std::to_string(i));
      }
    }
    if (r.reward != s.reward) {
      throw ReplayMismatch("reward mismatch at step " + std::to_string(s.t));
    }
    if (r.reason != s.reason) {
      throw ReplayMismatch("termination mismatch at step " + std::to_string(s.t));
    }
  }
}

}  // namespace pregrasp::io
