// Command-line surface: train / eval / sweep / disturb / viz-field / replay.
// Exit codes: 0 success, 1 usage, 2 validation, 3 runtime failure.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "pregrasp/eval/harness.hpp"
#include "pregrasp/io/atomic_file.hpp"
#include "pregrasp/io/checkpoint.hpp"
#include "pregrasp/io/config.hpp"
#include "pregrasp/io/metrics.hpp"
#include "pregrasp/io/trace.hpp"
#include "pregrasp/io/vector_field.hpp"
#include "pregrasp/sac/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pregrasp;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string checkpoint;
  std::string out;
};

io::RunConfig load_config(const CommonArgs& args, bool log_defaults) {
  io::RunConfig cfg = io::parse_config(args.config_path, log_defaults ? &std::cerr : nullptr);
  if (args.seed_override) cfg.seed = *args.seed_override;
  if (!args.out.empty()) cfg.out_dir = args.out;
  return cfg;
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> grid;
  std::stringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    grid.push_back(std::stod(tok));
  }
  return grid;
}

int run_train(const CommonArgs& args) {
  const io::RunConfig cfg = load_config(args, true);
  const env::EnvConfig env_cfg = io::make_env_config(cfg);
  const std::string hash = io::config_hash(cfg);
  fs::create_directories(cfg.out_dir);

  io::atomic_write(cfg.out_dir + "/effective_config.cfg", io::emit_config(cfg));
  io::MetricsWriter metrics(cfg.out_dir + "/metrics.jsonl", hash, cfg.seed);

  sac::TrainHooks hooks;
  hooks.on_eval = [&](const sac::EvalRecord& rec) {
    metrics.add(rec);
    std::cerr << "train: " << io::metrics_line(rec) << "\n";
  };
  hooks.on_checkpoint = [&](const sac::Networks& nets, std::int64_t steps, bool final) {
    const io::CheckpointMeta meta{cfg.seed, hash};
    char name[64];
    std::snprintf(name, sizeof(name), "ckpt_%09lld.ckpt", static_cast<long long>(steps));
    io::save_checkpoint(cfg.out_dir + "/" + name, nets, meta);
    io::save_checkpoint(cfg.out_dir + "/latest.ckpt", nets, meta);
    if (final) io::save_checkpoint(cfg.out_dir + "/final.ckpt", nets, meta);
  };

  sac::TrainResult result = sac::train(env_cfg, cfg.sac, cfg.seed, hooks);
  double best_success = -1.0;
  for (const auto& rec : result.records) {
    best_success = std::max(best_success, rec.eval_success_rate);
  }
  std::cout << "env_steps=" << result.env_steps
            << " final_eval_success=" << result.final_eval_success
            << " best_eval_success=" << best_success
            << (result.stopped_early ? " (stopped early)" : "") << "\n";
  return 0;
}

int run_eval(const CommonArgs& args, int episodes, const std::string& traces_dir) {
  const io::RunConfig cfg = load_config(args, false);
  const env::EnvConfig env_cfg = io::make_env_config(cfg);
  const sac::Networks nets = io::load_checkpoint(args.checkpoint);

  const eval::EvalSummary summary =
      eval::evaluate_policy(env_cfg, nets.actor, episodes, Rng::derive_stream(cfg.seed, 77));
  std::cout << "episodes=" << episodes << " success_rate=" << summary.success_rate
            << " mean_max_pitch=" << summary.mean_max_pitch << "\n";

  if (!args.out.empty()) {
    std::ostringstream csv;
    csv << "# config_hash=" << io::config_hash(cfg) << " seed=" << cfg.seed << "\n";
    csv << "episode,max_pitch,success,reason,steps,final_d\n";
    for (std::size_t i = 0; i < summary.episodes.size(); ++i) {
      const auto& r = summary.episodes[i];
      csv << i << "," << r.max_pitch << "," << (r.success ? 1 : 0) << ","
          << env::to_string(r.reason) << "," << r.steps_used << "," << r.final_d << "\n";
    }
    io::atomic_write(args.out, csv.str());
  }
  if (!traces_dir.empty()) {
    fs::create_directories(traces_dir);
    for (int i = 0; i < episodes; ++i) {
      const io::EpisodeTrace tr =
          io::record_episode(cfg, nets.actor, Rng::derive_stream(cfg.seed, 5000 + i));
      char name[64];
      std::snprintf(name, sizeof(name), "episode_%03d.trace", i);
      io::write_trace(traces_dir + "/" + std::string(name), tr);
    }
  }
  return 0;
}

int run_sweep(const CommonArgs& args, const std::string& axis, const std::string& grid,
              int episodes_per_point) {
  const io::RunConfig cfg = load_config(args, false);
  const env::EnvConfig env_cfg = io::make_env_config(cfg);
  const sac::Networks nets = io::load_checkpoint(args.checkpoint);

  eval::SweepSpec spec;
  spec.axis = eval::sweep_axis_from_string(axis);
  spec.grid = parse_grid(grid);
  spec.episodes_per_point = episodes_per_point;
  spec.seed = cfg.seed;
  const auto table = eval::run_sweep(env_cfg, nets.actor, spec);

  std::ostringstream csv;
  csv << "# config_hash=" << io::config_hash(cfg) << " seed=" << cfg.seed << "\n";
  csv << "axis,value,episodes,success_rate,mean_max_pitch,std_max_pitch\n";
  for (const auto& pt : table) {
    csv << axis << "," << pt.value << "," << pt.episodes << "," << pt.success_rate << ","
        << pt.mean_max_pitch << "," << pt.std_max_pitch << "\n";
  }
  if (args.out.empty()) {
    std::cout << csv.str();
  } else {
    io::atomic_write(args.out, csv.str());
    std::cout << "sweep written to " << args.out << "\n";
  }
  return 0;
}

int run_disturb(const CommonArgs& args, const std::string& grid) {
  const io::RunConfig cfg = load_config(args, false);
  const env::EnvConfig env_cfg = io::make_env_config(cfg);
  const sac::Networks nets = io::load_checkpoint(args.checkpoint);

  std::vector<double> momenta = parse_grid(grid);
  if (momenta.empty()) {
    const double budget = eval::standing_momentum_budget(env_cfg.defaults.box_geometry, 0.7);
    for (double f : {0.25, 0.5, 0.75, 1.0, 1.5}) momenta.push_back(f * budget);
  }
  const double max_withstood =
      eval::robustness_disturbance_test(env_cfg, nets.actor, env_cfg.defaults, momenta);
  std::cout << "max_withstood_momentum=" << max_withstood << " kg*m^2/s (grid:";
  for (double m : momenta) std::cout << " " << m;
  std::cout << ")\n";
  return 0;
}

int run_viz(const CommonArgs& args, const std::string& svg, int ny, int nz) {
  const io::RunConfig cfg = load_config(args, false);
  const env::EnvConfig env_cfg = io::make_env_config(cfg);
  const sac::Networks nets = io::load_checkpoint(args.checkpoint);

  io::VectorFieldSpec spec = io::default_field_spec(env_cfg);
  spec.ny = ny;
  spec.nz = nz;
  const std::string csv = args.out.empty() ? "field.csv" : args.out;
  io::export_vector_field(env_cfg, nets.actor, spec, csv,
                          svg.empty() ? std::nullopt : std::optional<std::string>(svg),
                          io::config_hash(cfg), cfg.seed);
  std::cout << "vector field written to " << csv << "\n";
  return 0;
}

int run_replay(const CommonArgs& args, const std::string& trace_path) {
  const io::RunConfig cfg = load_config(args, false);
  io::replay_trace(cfg, trace_path);
  std::cout << "replay ok: " << trace_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pregrasp push-and-pivot-lift: training and evaluation"};
  app.require_subcommand(1);

  CommonArgs args;
  int episodes = 50;
  int episodes_per_point = 10;
  std::string axis = "mass";
  std::string grid;
  std::string traces_dir;
  std::string svg;
  std::string trace_path;
  int ny = 22, nz = 22;

  auto add_common = [&](CLI::App* cmd, bool needs_checkpoint) {
    cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--seed", args.seed_override, "override the config seed");
    cmd->add_option("--out", args.out, "output path");
    if (needs_checkpoint) {
      cmd->add_option("--checkpoint", args.checkpoint, "policy checkpoint")->required();
    }
  };

  CLI::App* train = app.add_subcommand("train", "train a policy");
  add_common(train, false);

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  add_common(eval_cmd, true);
  eval_cmd->add_option("--episodes", episodes, "number of evaluation episodes");
  eval_cmd->add_option("--dump-traces", traces_dir, "directory for episode traces");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep");
  add_common(sweep, true);
  sweep->add_option("--axis", axis, "width|height|mass|friction|initial_y|support_inclination");
  sweep->add_option("--grid", grid, "comma-separated grid values")->required();
  sweep->add_option("--episodes-per-point", episodes_per_point, "episodes per grid value");

  CLI::App* disturb = app.add_subcommand("disturb", "disturbance robustness test");
  add_common(disturb, true);
  disturb->add_option("--momentum-grid", grid, "comma-separated angular momenta");

  CLI::App* viz = app.add_subcommand("viz-field", "export the policy vector field");
  add_common(viz, true);
  viz->add_option("--svg", svg, "also render a static SVG");
  viz->add_option("--ny", ny, "grid count along y");
  viz->add_option("--nz", nz, "grid count along z");

  CLI::App* replay = app.add_subcommand("replay", "verify a dumped episode trace");
  add_common(replay, false);
  replay->add_option("trace", trace_path, "trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) return run_train(args);
    if (*eval_cmd) return run_eval(args, episodes, traces_dir);
    if (*sweep) return run_sweep(args, axis, grid, episodes_per_point);
    if (*disturb) return run_disturb(args, grid);
    if (*viz) return run_viz(args, svg, ny, nz);
    if (*replay) return run_replay(args, trace_path);
  } catch (const io::ParseError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const io::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const env::InvalidTable& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
