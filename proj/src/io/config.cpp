#include "pregrasp/io/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace pregrasp::io {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_doubles(const std::string& value, std::size_t expect, int line) {
  std::istringstream in(value);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  std::string rest;
  in.clear();
  in >> rest;
  if (!rest.empty() || out.size() != expect) {
    throw ParseError("line " + std::to_string(line) + ": expected " + std::to_string(expect) +
                     " numeric value(s), got '" + value + "'");
  }
  return out;
}

struct KeyBinding {
  std::function<void(const std::string& value, int line)> set;
  std::function<std::string()> get;  // canonical emission
};

struct Schema {
  // section -> key -> binding, with deterministic iteration order
  std::map<std::string, std::map<std::string, KeyBinding>> sections;
  std::vector<std::pair<std::string, std::string>> order;

  void add(const std::string& sec, const std::string& key, KeyBinding b) {
    sections[sec][key] = std::move(b);
    order.emplace_back(sec, key);
  }
};

Schema make_schema(RunConfig& c) {
  Schema s;
  auto num = [&s](const std::string& sec, const std::string& key, double* p) {
    s.add(sec, key,
          {[p](const std::string& v, int line) { *p = parse_doubles(v, 1, line)[0]; },
           [p]() { return fmt(*p); }});
  };
  auto integer = [&s](const std::string& sec, const std::string& key, auto* p) {
    s.add(sec, key,
          {[p](const std::string& v, int line) {
             const double d = parse_doubles(v, 1, line)[0];
             *p = static_cast<std::decay_t<decltype(*p)>>(d);
             if (static_cast<double>(*p) != d) {
               throw ParseError("line " + std::to_string(line) + ": expected an integer");
             }
           },
           [p]() { return std::to_string(*p); }});
  };
  auto boolean = [&s](const std::string& sec, const std::string& key, bool* p) {
    s.add(sec, key,
          {[p](const std::string& v, int line) {
             if (v == "true") *p = true;
             else if (v == "false") *p = false;
             else throw ParseError("line " + std::to_string(line) + ": expected true/false");
           },
           [p]() { return *p ? std::string("true") : std::string("false"); }});
  };
  auto pair2 = [&s](const std::string& sec, const std::string& key, double* lo, double* hi) {
    s.add(sec, key,
          {[lo, hi](const std::string& v, int line) {
             const auto d = parse_doubles(v, 2, line);
             *lo = d[0];
             *hi = d[1];
           },
           [lo, hi]() { return fmt(*lo) + " " + fmt(*hi); }});
  };
  auto row = [&s](const std::string& key, env::RandomizationRow* r) {
    s.add("randomization", key,
          {[r](const std::string& v, int line) {
             const auto d = parse_doubles(v, 4, line);
             r->value = d[0];
             r->lo = d[1];
             r->hi = d[2];
             r->probability = d[3];
           },
           [r]() {
             return fmt(r->value) + " " + fmt(r->lo) + " " + fmt(r->hi) + " " +
                    fmt(r->probability);
           }});
  };

  s.add("run", "seed",
        {[&c](const std::string& v, int line) {
           try {
             c.seed = std::stoull(v);
           } catch (...) {
             throw ParseError("line " + std::to_string(line) + ": bad seed '" + v + "'");
           }
         },
         [&c]() { return std::to_string(c.seed); }});
  s.add("run", "out_dir",
        {[&c](const std::string& v, int) { c.out_dir = v; },
         [&c]() { return c.out_dir; }});

  num("sac", "gamma", &c.sac.gamma);
  num("sac", "tau", &c.sac.tau);
  num("sac", "learning_rate", &c.sac.learning_rate);
  integer("sac", "batch_size", &c.sac.batch_size);
  num("sac", "target_entropy", &c.sac.target_entropy);
  integer("sac", "replay_capacity", &c.sac.replay_capacity);
  integer("sac", "warmup_steps", &c.sac.warmup_steps);
  integer("sac", "updates_per_env_step", &c.sac.updates_per_env_step);
  integer("sac", "total_env_steps", &c.sac.total_env_steps);
  integer("sac", "eval_every", &c.sac.eval_every);
  integer("sac", "eval_episodes", &c.sac.eval_episodes);
  num("sac", "early_stop_success", &c.sac.early_stop_success);
  integer("sac", "early_stop_min_steps", &c.sac.early_stop_min_steps);

  num("reward", "lambda1", &c.reward.lambda1);
  num("reward", "lambda2", &c.reward.lambda2);

  integer("env", "horizon", &c.horizon);
  num("env", "pitch_limit", &c.pitch_limit);
  boolean("env", "allow_reference_init", &c.allow_reference_init);
  num("env", "support_height", &c.support_height);
  num("env", "effector_radius", &c.effector_radius);
  num("env", "effector_mass", &c.effector_mass);
  num("env", "tracker_omega", &c.tracker_omega);
  num("env", "tracker_force_limit", &c.tracker_force_limit);
  num("env", "friction_box_effector", &c.friction_box_effector);
  pair2("env", "workspace_y", &c.workspace.y_min, &c.workspace.y_max);
  pair2("env", "workspace_z", &c.workspace.z_min, &c.workspace.z_max);
  pair2("env", "workspace_pitch", &c.workspace.pitch_min, &c.workspace.pitch_max);

  num("geometry", "box_length", &c.box_length);
  num("geometry", "box_height", &c.box_height);
  num("geometry", "support_inclination", &c.support_inclination);

  row("mass", &c.table.mass);
  row("friction", &c.table.friction);
  row("object_y", &c.table.object_y);
  row("support_y", &c.table.support_y);
  row("eff_y", &c.table.eff_y);
  row("eff_z", &c.table.eff_z);
  row("eff_pitch", &c.table.eff_pitch);
  num("randomization", "reference_probability", &c.table.reference_probability);
  return s;
}

void validate(const RunConfig& c) {
  if (!c.sac.valid()) {
    throw ValidationError("sac settings violate an invariant (gamma/tau in (0,1), batch >= 1)");
  }
  if (!c.reward.valid()) throw ValidationError("reward weights must be positive");
  try {
    c.table.validate();
  } catch (const env::InvalidTable& e) {
    throw ValidationError(e.what());
  }
  if (!(c.box_length > 0.0 && c.box_height > 0.0)) {
    throw ValidationError("box dimensions must be positive");
  }
  if (!(c.effector_radius > 0.0 && c.effector_mass > 0.0)) {
    throw ValidationError("effector radius and mass must be positive");
  }
  if (!(c.horizon >= 1)) throw ValidationError("horizon must be at least 1");
  if (!(c.pitch_limit > 0.0)) throw ValidationError("pitch limit must be positive");
  if (!(c.workspace.y_min < c.workspace.y_max && c.workspace.z_min < c.workspace.z_max &&
        c.workspace.pitch_min < c.workspace.pitch_max)) {
    throw ValidationError("workspace bounds must satisfy min < max");
  }
  if (!(c.support_inclination > 0.0 && c.support_inclination <= M_PI / 2.0)) {
    throw ValidationError("support inclination must lie in (0, pi/2]");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, std::ostream* default_log) {
  RunConfig cfg;
  Schema schema = make_schema(cfg);
  std::set<std::pair<std::string, std::string>> seen;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("line " + std::to_string(line_no) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (schema.sections.find(section) == schema.sections.end()) {
        throw ParseError("line " + std::to_string(line_no) + ": unknown section [" + section +
                         "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": key '" + key +
                       "' outside any section");
    }
    auto& keys = schema.sections[section];
    auto it = keys.find(key);
    if (it == keys.end()) {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key +
                       "' in section [" + section + "]");
    }
    if (!seen.insert({section, key}).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    it->second.set(value, line_no);
  }

  if (default_log) {
    for (const auto& [sec, key] : schema.order) {
      if (!seen.count({sec, key})) {
        (*default_log) << "config: default applied [" << sec << "] " << key << " = "
                       << schema.sections[sec][key].get() << "\n";
      }
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::string& path, std::ostream* default_log) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), default_log);
}

std::string emit_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  Schema schema = make_schema(copy);
  std::ostringstream out;
  std::string current;
  for (const auto& [sec, key] : schema.order) {
    if (sec != current) {
      if (!current.empty()) out << "\n";
      out << "[" << sec << "]\n";
      current = sec;
    }
    out << key << " = " << schema.sections[sec][key].get() << "\n";
  }
  return out.str();
}

std::string config_hash(const RunConfig& cfg) {
  RunConfig canonical = cfg;
  canonical.seed = 0;
  canonical.out_dir = "";
  const std::string text = emit_config(canonical);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x00000100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

env::EnvConfig make_env_config(const RunConfig& cfg) {
  env::EnvConfig e;
  e.table = cfg.table;
  e.defaults.box_mass = cfg.table.mass.value;
  e.defaults.friction = cfg.table.friction.value;
  e.defaults.box_position_y = cfg.table.object_y.value;
  e.defaults.support_position_y = cfg.table.support_y.value;
  e.defaults.eff_init = {cfg.table.eff_y.value, cfg.table.eff_z.value, cfg.table.eff_pitch.value};
  e.defaults.box_geometry = phys::BoxGeometry::make(cfg.box_length, cfg.box_height,
                                                    cfg.table.mass.value);
  e.defaults.support_inclination = cfg.support_inclination;
  e.reward = cfg.reward;
  e.workspace = cfg.workspace;
  e.material.friction_box_effector = cfg.friction_box_effector;
  e.support_height = cfg.support_height;
  e.effector_radius = cfg.effector_radius;
  e.effector_mass = cfg.effector_mass;
  e.tracker_omega = cfg.tracker_omega;
  e.tracker_force_limit = cfg.tracker_force_limit;
  e.horizon = cfg.horizon;
  e.pitch_limit = cfg.pitch_limit;
  e.allow_reference_init = cfg.allow_reference_init;
  return e;
}

}  // namespace pregrasp::io
