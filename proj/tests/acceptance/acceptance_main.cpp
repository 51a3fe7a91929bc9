// Acceptance suite: runs every criterion end to end and prints one
// PASS/FAIL line per criterion. Exit status is nonzero when any fails.
//
//   1  end-to-end training reaches 0.8 success in 2 of 3 seeds
//   2  mass and friction sweeps hold 0.8 success at every grid point
//   3  metric exactness (lift threshold angle, disturbance momentum)
//   4  gradient suite vs central finite differences
//   5  physics property suite (drift, friction cone, tilt-onset oracle)
//   6  disturbance robustness at half the standing momentum budget
//   7  determinism (byte-identical metrics, bitwise replay)
//   8  vector-field attractor structure
//
// Usage: acceptance [--only 3,4,5] [--out DIR]

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "pregrasp/eval/harness.hpp"
#include "pregrasp/eval/tilt_oracle.hpp"
#include "pregrasp/io/atomic_file.hpp"
#include "pregrasp/io/checkpoint.hpp"
#include "pregrasp/io/config.hpp"
#include "pregrasp/io/metrics.hpp"
#include "pregrasp/io/trace.hpp"
#include "pregrasp/io/vector_field.hpp"
#include "pregrasp/sac/trainer.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace pregrasp;

namespace {

struct Outcome {
  int id = 0;
  bool pass = false;
  std::string detail;
};

std::vector<Outcome> g_outcomes;

void report(int id, bool pass, const std::string& detail) {
  g_outcomes.push_back({id, pass, detail});
  std::printf("criterion %d: %s  (%s)\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

io::RunConfig base_config(const std::string& out_dir) {
  io::RunConfig cfg;
  cfg.out_dir = out_dir;
  return cfg;
}

struct SeedRun {
  std::uint64_t seed = 0;
  sac::TrainResult result;
  double final_50ep_success = 0.0;
  bool ok = false;
  std::string error;
};

// ---------------------------------------------------------------- criterion 1
// Also produces the accepted policy used by criteria 2, 6, and 8.
sac::Networks criterion_1_training(const std::string& out_dir, bool& pass) {
  const std::vector<std::uint64_t> seeds{101, 202, 303};
  std::vector<SeedRun> runs(seeds.size());

  auto run_one = [&](std::size_t idx) {
    SeedRun& run = runs[idx];
    run.seed = seeds[idx];
    io::RunConfig cfg = base_config(out_dir + "/train_seed" + std::to_string(run.seed));
    cfg.seed = run.seed;
    fs::create_directories(cfg.out_dir);
    const env::EnvConfig env_cfg = io::make_env_config(cfg);
    try {
      io::MetricsWriter metrics(cfg.out_dir + "/metrics.jsonl", io::config_hash(cfg), cfg.seed);
      sac::TrainHooks hooks;
      hooks.on_eval = [&](const sac::EvalRecord& rec) { metrics.add(rec); };
      hooks.on_checkpoint = [&](const sac::Networks& nets, std::int64_t, bool final) {
        if (final) {
          io::save_checkpoint(cfg.out_dir + "/final.ckpt", nets,
                              {cfg.seed, io::config_hash(cfg)});
        }
      };
      run.result = sac::train(env_cfg, cfg.sac, cfg.seed, hooks);
      const eval::EvalSummary summary = eval::evaluate_policy(
          env_cfg, run.result.networks.actor, 50, Rng::derive_stream(cfg.seed, 424242));
      run.final_50ep_success = summary.success_rate;
      run.ok = true;
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  };

  // Two seeds in parallel, then the third; each run is single-threaded.
  {
    std::thread t0(run_one, 0), t1(run_one, 1);
    t0.join();
    t1.join();
    run_one(2);
  }

  int passing = 0;
  std::ostringstream detail;
  std::size_t best = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SeedRun& r = runs[i];
    if (!r.ok) {
      detail << "seed " << r.seed << ": error " << r.error << "; ";
      continue;
    }
    if (r.final_50ep_success >= 0.8) passing += 1;
    if (r.final_50ep_success >= runs[best].final_50ep_success) best = i;
    detail << "seed " << r.seed << ": success " << r.final_50ep_success << " @"
           << r.result.env_steps << " steps; ";
  }
  pass = passing >= 2;
  report(1, pass, detail.str());

  const sac::Networks& accepted = runs[best].result.networks;
  io::save_checkpoint(out_dir + "/accepted.ckpt", accepted,
                      {runs[best].seed, io::config_hash(base_config(out_dir))});
  return accepted;
}

// ---------------------------------------------------------------- criterion 2
void criterion_2_sweeps(const sac::Networks& accepted, const std::string& out_dir) {
  const io::RunConfig cfg = base_config(out_dir);
  const env::EnvConfig env_cfg = io::make_env_config(cfg);

  eval::SweepSpec mass;
  mass.axis = eval::SweepAxis::Mass;
  mass.grid = {0.02, 0.04, 0.06, 0.08, 0.10};
  mass.episodes_per_point = 10;
  mass.seed = 5150;
  eval::SweepSpec friction;
  friction.axis = eval::SweepAxis::Friction;
  friction.grid = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  friction.episodes_per_point = 10;
  friction.seed = 5151;

  bool pass = true;
  std::ostringstream detail;
  for (const auto& spec : {mass, friction}) {
    const auto table = eval::run_sweep(env_cfg, accepted.actor, spec);
    detail << eval::to_string(spec.axis) << ": [";
    std::ostringstream csv;
    csv << "# config_hash=" << io::config_hash(cfg) << " seed=" << spec.seed << "\n";
    csv << "axis,value,episodes,success_rate,mean_max_pitch,std_max_pitch\n";
    for (const auto& pt : table) {
      pass = pass && pt.success_rate >= 0.8;
      detail << pt.success_rate << " ";
      csv << eval::to_string(spec.axis) << "," << pt.value << "," << pt.episodes << ","
          << pt.success_rate << "," << pt.mean_max_pitch << "," << pt.std_max_pitch << "\n";
    }
    detail << "] ";
    io::atomic_write(out_dir + "/sweep_" + eval::to_string(spec.axis) + ".csv", csv.str());
  }
  report(2, pass, detail.str());
}

// ---------------------------------------------------------------- criterion 3
void criterion_3_metric_exactness() {
  const double threshold = eval::lift_threshold_angle(0.17);
  const double momentum = eval::disturbance_momentum({0.028, 0.16, 0.5});
  const bool pass = std::abs(threshold - 0.316) <= 0.002 && std::abs(momentum - 0.014) <= 5e-4;
  std::ostringstream detail;
  detail << "lift_threshold_angle(0.17)=" << threshold << " (want 0.316+/-0.002), "
         << "disturbance_momentum(0.028,0.16,0.5)=" << momentum << " (want 0.014+/-0.0005)";
  report(3, pass, detail.str());
}

// ---------------------------------------------------------------- criterion 4
void criterion_4_gradients() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  const double h = 1e-5;

  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(1000 + static_cast<std::uint64_t>(seed));
    sac::Networks nets = sac::Networks::init(rng);

    const int n = 8;
    nn::Matrix states(sac::kObservationDim, n), actions(sac::kActionDim, n), eps(sac::kActionDim, n);
    Eigen::VectorXd targets(n);
    for (int c = 0; c < n; ++c) {
      states(0, c) = rng.uniform(0.0, 0.5);
      states(1, c) = rng.uniform(-0.35, 0.34);
      states(2, c) = rng.uniform(0.02, 0.45);
      states(3, c) = rng.uniform(-3.0, -2.0);
      states(4, c) = rng.uniform(0.1, 0.3);
      states(5, c) = rng.uniform(0.0, 0.2);
      states(6, c) = rng.uniform(0.0, 0.785);
      for (int r = 0; r < sac::kActionDim; ++r) {
        actions(r, c) = rng.uniform(-0.99, 0.99);
        eps(r, c) = rng.normal();
      }
      targets(c) = rng.uniform(-2.0, 2.0);
    }
    const double alpha = rng.uniform(0.05, 1.0);

    auto probe = [&](nn::Matrix& tensor, Eigen::Index i, auto&& value_fn, double analytic) {
      const double saved = tensor(i);
      tensor(i) = saved + h;
      const double up = value_fn();
      tensor(i) = saved - h;
      const double down = value_fn();
      tensor(i) = saved;
      const double fd = (up - down) / (2 * h);
      const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
      worst = std::max(worst, std::abs(fd - analytic) / denom);
    };

    // Actor (including the tanh-squash log-prob path).
    {
      const sac::ActorLossResult res = sac::actor_loss(nets, states, eps, alpha);
      auto tensors = nets.actor.tensors();
      const auto grads = res.gradients.tensors();
      auto value = [&] { return sac::actor_loss_value(nets, states, eps, alpha); };
      Rng pick(7u * static_cast<std::uint64_t>(seed) + 1);
      for (std::size_t ti = 0; ti < tensors.size(); ++ti) {
        for (int k = 0; k < 4; ++k) {
          const Eigen::Index i =
              static_cast<Eigen::Index>(pick.uniform_index(static_cast<std::uint64_t>(tensors[ti]->size())));
          probe(*tensors[ti], i, value, (*grads[ti])(i));
        }
      }
    }

    // Both critics against a frozen regression target.
    for (nn::MlpParams* critic : {&nets.critic1, &nets.critic2}) {
      nn::Matrix x(sac::kObservationDim + sac::kActionDim, n);
      x.topRows(sac::kObservationDim) = states;
      x.bottomRows(sac::kActionDim) = actions;
      auto value = [&] {
        const nn::Matrix q = nn::mlp_forward(*critic, x);
        double loss = 0.0;
        for (int c = 0; c < n; ++c) {
          const double err = q(0, c) - targets(c);
          loss += err * err;
        }
        return loss / n;
      };
      nn::MlpCache cache;
      const nn::Matrix q = nn::mlp_forward(*critic, x, &cache);
      nn::Matrix g(1, n);
      for (int c = 0; c < n; ++c) g(0, c) = 2.0 * (q(0, c) - targets(c)) / n;
      const nn::MlpGrads grads = nn::mlp_backward(*critic, cache, g);
      auto tensors = critic->tensors();
      const auto grad_tensors = grads.tensors();
      Rng pick(13u * static_cast<std::uint64_t>(seed) + 2);
      for (std::size_t ti = 0; ti < tensors.size(); ++ti) {
        for (int k = 0; k < 3; ++k) {
          const Eigen::Index i =
              static_cast<Eigen::Index>(pick.uniform_index(static_cast<std::uint64_t>(tensors[ti]->size())));
          probe(*tensors[ti], i, value, (*grad_tensors[ti])(i));
        }
      }
    }

    // Temperature: L(log_alpha) = exp(log_alpha) * (-mean_logpi - target).
    {
      const sac::ActorLossResult res = sac::actor_loss(nets, states, eps, nets.alpha());
      const double target_entropy = -3.0;
      const double analytic = nets.alpha() * (-res.mean_log_prob - target_entropy);
      const double saved = nets.log_alpha;
      auto value = [&] {
        return std::exp(nets.log_alpha) * (-res.mean_log_prob - target_entropy);
      };
      nets.log_alpha = saved + h;
      const double up = value();
      nets.log_alpha = saved - h;
      const double down = value();
      nets.log_alpha = saved;
      const double fd = (up - down) / (2 * h);
      const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
      worst = std::max(worst, std::abs(fd - analytic) / denom);
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << "max relative error " << worst << " over 100 seeds in " << seconds << " s";
  report(4, worst < 1e-4 && seconds < 60.0, detail.str());
}

// ---------------------------------------------------------------- criterion 5
void criterion_5_physics() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream detail;

  // Resting drift over 5 s.
  {
    const phys::WorldConfig cfg = testutil::default_world_config();
    phys::WorldState w = testutil::settled_world(cfg);
    const Vec2 p0 = w.box.position;
    for (int i = 0; i < 5000; ++i) phys::step(cfg, w);
    const double drift = std::max(std::abs(w.box.position.y - p0.y),
                                  std::abs(w.box.position.z - p0.z));
    pass = pass && drift <= 1e-3;
    detail << "drift " << drift << " m; ";
  }

  // Friction cone over 10,000 random pushing steps.
  {
    const phys::WorldConfig cfg = testutil::default_world_config();
    phys::WorldState w = testutil::settled_world(cfg);
    Rng rng(555);
    double worst_violation = 0.0;
    double worst_pen = 0.0;
    for (int i = 0; i < 10000; ++i) {
      if (i % 40 == 0) {
        w.effector.commanded.y = clamp(w.effector.commanded.y + rng.uniform(-0.02, 0.025),
                                       -0.3, 0.33);
        w.effector.commanded.z = clamp(w.effector.commanded.z + rng.uniform(-0.02, 0.02),
                                       0.02, 0.3);
      }
      phys::step(cfg, w);
      for (const auto& c : w.last_contacts) {
        double mu = cfg.material.friction_box_table;
        if (c.pair_id == phys::ContactPair::BoxEffector) mu = cfg.material.friction_box_effector;
        if (c.pair_id == phys::ContactPair::BoxSupport) mu = cfg.material.friction_box_support;
        worst_violation = std::max(worst_violation,
                                   std::abs(c.tangent_impulse) - mu * c.normal_impulse);
      }
      worst_pen = std::max(worst_pen, w.diag.max_penetration_post);
    }
    pass = pass && worst_violation <= 1e-9 && worst_pen <= cfg.penetration_tolerance * (1 + 1e-6);
    detail << "cone excess " << worst_violation << ", max pen " << worst_pen << "; ";
  }

  // Tilt onset vs the analytic oracle across 20 random configurations.
  {
    Rng rng(4321);
    double worst_rel = 0.0;
    int tipped = 0;
    for (int trial = 0; trial < 20; ++trial) {
      phys::WorldConfig cfg = testutil::default_world_config();
      const double length = rng.uniform(0.13, 0.21);
      const double height = rng.uniform(0.045, 0.08);
      const double mass = rng.uniform(0.04, 0.12);
      cfg.box = phys::BoxGeometry::make(length, height, mass);
      const double push_height = rng.uniform(0.6, 0.9) * height;
      cfg.material.friction_box_table = (0.5 * length / push_height) * rng.uniform(1.2, 1.6);

      phys::MaterialParams oracle_material = cfg.material;
      oracle_material.friction_box_effector = 0.0;
      const double expected =
          eval::quasi_static_tilt_oracle(cfg.box, oracle_material, 0.0, push_height);
      const testutil::OnsetMeasurement m = testutil::measure_tilt_onset(cfg, push_height);
      if (m.tipped) {
        tipped += 1;
        worst_rel = std::max(worst_rel, std::abs(m.horizontal_force - expected) / expected);
      }
    }
    pass = pass && tipped == 20 && worst_rel <= 0.05;
    detail << "onset " << tipped << "/20 tipped, worst rel err " << worst_rel << "; ";
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass = pass && seconds < 300.0;
  detail << seconds << " s";
  report(5, pass, detail.str());
}

// ---------------------------------------------------------------- criterion 6
void criterion_6_disturbance(const sac::Networks& accepted) {
  const io::RunConfig cfg = base_config("");
  const env::EnvConfig env_cfg = io::make_env_config(cfg);

  int withstood = 0, lifted = 0;
  const int trials = 10;
  double budget_used = 0.0;
  for (int i = 0; i < trials; ++i) {
    Rng rng(Rng::derive_stream(8800, static_cast<std::uint64_t>(i)));
    env::ScenarioParams sc =
        env::sample_scenario(env_cfg.table, env_cfg.defaults, rng, /*allow_reference=*/false);
    try {
      // First find the lift pose, then size the kick from its pitch.
      const eval::DisturbanceOutcome probe =
          eval::disturbance_trial(env_cfg, accepted.actor, sc, 0.0);
      const double budget = eval::standing_momentum_budget(
          phys::BoxGeometry::make(env_cfg.defaults.box_geometry.length,
                                  env_cfg.defaults.box_geometry.height, sc.box_mass),
          probe.lift_pitch);
      budget_used = 0.5 * budget;
      const eval::DisturbanceOutcome out =
          eval::disturbance_trial(env_cfg, accepted.actor, sc, budget_used);
      lifted += 1;
      withstood += out.withstood ? 1 : 0;
    } catch (const eval::NoLiftAchieved&) {
    } catch (const std::exception&) {
    }
  }

  // Report the max withstood grid value next to the real-world 0.028 figure.
  double max_withstood = -1.0;
  std::vector<double> grid;
  const double full = eval::standing_momentum_budget(env_cfg.defaults.box_geometry, 0.7);
  for (double f : {0.25, 0.5, 0.75, 1.0, 1.5}) grid.push_back(f * full);
  try {
    max_withstood =
        eval::robustness_disturbance_test(env_cfg, accepted.actor, env_cfg.defaults, grid);
  } catch (const std::exception&) {
  }

  std::ostringstream detail;
  detail << withstood << "/" << trials << " trials withstood 50% budget (~" << budget_used
         << " kg m^2/s); max withstood grid value " << max_withstood
         << " kg m^2/s vs paper real-box 0.028 (not directly transferable); lifted " << lifted;
  report(6, withstood >= 8, detail.str());
}

// ---------------------------------------------------------------- criterion 7
void criterion_7_determinism(const sac::Networks& accepted, const std::string& out_dir) {
  bool pass = true;
  std::ostringstream detail;

  // Two short but real training runs, byte-identical metrics logs.
  io::RunConfig cfg = base_config(out_dir);
  cfg.seed = 777;
  cfg.sac.total_env_steps = 4000;
  cfg.sac.warmup_steps = 500;
  cfg.sac.eval_every = 2000;
  cfg.sac.eval_episodes = 3;
  cfg.sac.early_stop_success = 2.0;
  const env::EnvConfig env_cfg = io::make_env_config(cfg);

  auto metrics_text = [&](const std::string& name) {
    std::ostringstream text;
    sac::TrainHooks hooks;
    hooks.on_eval = [&](const sac::EvalRecord& rec) { text << io::metrics_line(rec) << "\n"; };
    sac::train(env_cfg, cfg.sac, cfg.seed, hooks);
    io::atomic_write(out_dir + "/" + name, text.str());
    return text.str();
  };
  const std::string a = metrics_text("determinism_a.jsonl");
  const std::string b = metrics_text("determinism_b.jsonl");
  pass = pass && !a.empty() && a == b;
  detail << "metrics logs " << (a == b ? "identical" : "DIFFER") << " (" << a.size()
         << " bytes); ";

  // Ten dumped episodes replay bitwise.
  io::RunConfig replay_cfg = base_config(out_dir);
  int replayed = 0;
  for (int i = 0; i < 10; ++i) {
    const std::string path = out_dir + "/replay_" + std::to_string(i) + ".trace";
    const io::EpisodeTrace tr =
        io::record_episode(replay_cfg, accepted.actor, Rng::derive_stream(31337, i));
    io::write_trace(path, tr);
    try {
      io::replay_trace(replay_cfg, path);
      replayed += 1;
    } catch (const std::exception& e) {
      detail << "episode " << i << ": " << e.what() << "; ";
    }
  }
  pass = pass && replayed == 10;
  detail << replayed << "/10 traces replayed bitwise";
  report(7, pass, detail.str());
}

// ---------------------------------------------------------------- criterion 8
void criterion_8_vector_field(const sac::Networks& accepted, const std::string& out_dir) {
  const io::RunConfig cfg = base_config(out_dir);
  const env::EnvConfig env_cfg = io::make_env_config(cfg);
  io::VectorFieldSpec spec = io::default_field_spec(env_cfg);
  spec.ny = 24;
  spec.nz = 24;
  const auto samples = io::sample_vector_field(env_cfg, accepted.actor, spec);
  io::export_vector_field(env_cfg, accepted.actor, spec, out_dir + "/field.csv",
                          out_dir + "/field.svg", io::config_hash(cfg), cfg.seed);
  const phys::WorldConfig wc = env::make_world_config(env_cfg, env_cfg.defaults);
  const double fraction = io::toward_object_fraction(samples, wc.box, spec.box_state);
  std::ostringstream detail;
  detail << 100.0 * fraction << "% of grid points left of the front face at box height point "
         << "toward the object";
  report(8, fraction >= 0.9, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir = "acceptance_out";
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream in(argv[++i]);
      std::string tok;
      while (std::getline(in, tok, ',')) only.push_back(std::stoi(tok));
    }
  }
  fs::create_directories(out_dir);
  auto wanted = [&](int id) { return only.empty() || std::count(only.begin(), only.end(), id); };

  sac::Networks accepted;
  bool have_policy = false;
  const std::string accepted_path = out_dir + "/accepted.ckpt";

  if (wanted(1)) {
    bool pass = false;
    accepted = criterion_1_training(out_dir, pass);
    have_policy = true;
  } else if (fs::exists(accepted_path)) {
    accepted = io::load_checkpoint(accepted_path);
    have_policy = true;
    std::printf("criterion 1: skipped (--only); using %s\n", accepted_path.c_str());
  }

  if (wanted(3)) criterion_3_metric_exactness();
  if (wanted(4)) criterion_4_gradients();
  if (wanted(5)) criterion_5_physics();

  const bool policy_needed = wanted(2) || wanted(6) || wanted(8) || wanted(7);
  if (policy_needed && !have_policy) {
    std::printf("policy-dependent criteria need %s (run criterion 1 first)\n",
                accepted_path.c_str());
  }
  if (have_policy) {
    if (wanted(2)) criterion_2_sweeps(accepted, out_dir);
    if (wanted(6)) criterion_6_disturbance(accepted);
    if (wanted(7)) criterion_7_determinism(accepted, out_dir);
    if (wanted(8)) criterion_8_vector_field(accepted, out_dir);
  }

  int failed = 0;
  for (const Outcome& o : g_outcomes) failed += o.pass ? 0 : 1;
  std::printf("acceptance: %zu criteria run, %d failed\n", g_outcomes.size(), failed);
  return failed == 0 ? 0 : 1;
}
