#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pregrasp/eval/harness.hpp"
#include "pregrasp/eval/metrics.hpp"
#include "pregrasp/eval/tilt_oracle.hpp"
#include "test_util.hpp"

using namespace pregrasp;

TEST_CASE("lift threshold angle") {
  SUBCASE("published value for the trained box length") {
    CHECK(std::abs(eval::lift_threshold_angle(0.17) - 0.316) < 0.002);
  }
  SUBCASE("threshold vanishes with the required clearance") {
    CHECK(eval::lift_threshold_angle(0.17, {0.9, 1e-9}) < 1e-6);
  }
  SUBCASE("halving the length") {
    const double expect = std::atan(0.05 / (0.9 * 0.085));
    CHECK(eval::lift_threshold_angle(0.085) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.579).epsilon(0.01));
  }
  SUBCASE("non-positive length rejected") {
    CHECK_THROWS_AS(eval::lift_threshold_angle(0.0), eval::NonPositiveLength);
    CHECK_THROWS_AS(eval::task_success(-0.1, 0.3), eval::NonPositiveLength);
  }
}

TEST_CASE("task success is strict at the threshold") {
  SUBCASE("published lift angle clears the published threshold") {
    CHECK(eval::task_success(0.17, 0.838));
  }
  SUBCASE("flat box never succeeds") { CHECK_FALSE(eval::task_success(0.17, 0.0)); }
  SUBCASE("boundary bracketing") {
    const double threshold = eval::lift_threshold_angle(0.17);
    CHECK_FALSE(eval::task_success(0.17, threshold - 1e-9));
    CHECK_FALSE(eval::task_success(0.17, threshold));
    CHECK(eval::task_success(0.17, threshold + 1e-6));
  }
}

TEST_CASE("disturbance momentum") {
  SUBCASE("one plasticine cup from half a meter") {
    const double L = eval::disturbance_momentum({0.028, 0.16, 0.5});
    CHECK(std::abs(L - 0.014) < 0.0005);
  }
  SUBCASE("no mass, no momentum") {
    CHECK(eval::disturbance_momentum({0.0, 0.16, 0.5}) == 0.0);
  }
  SUBCASE("two cups") {
    const double L = eval::disturbance_momentum({0.056, 0.16, 0.5});
    CHECK(L == doctest::Approx(0.0281).epsilon(0.01));
  }
  SUBCASE("scales linearly in mass and arm, as sqrt in height") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      eval::DisturbanceSpec s;
      s.drop_mass = rng.uniform(0.01, 0.2);
      s.moment_arm = rng.uniform(0.05, 0.3);
      s.drop_height = rng.uniform(0.1, 1.0);
      const double base = eval::disturbance_momentum(s);
      eval::DisturbanceSpec m2 = s;
      m2.drop_mass *= 3.0;
      CHECK(eval::disturbance_momentum(m2) == doctest::Approx(3.0 * base).epsilon(1e-12));
      eval::DisturbanceSpec r2 = s;
      r2.moment_arm *= 2.0;
      CHECK(eval::disturbance_momentum(r2) == doctest::Approx(2.0 * base).epsilon(1e-12));
      eval::DisturbanceSpec h2 = s;
      h2.drop_height *= 4.0;
      CHECK(eval::disturbance_momentum(h2) == doctest::Approx(2.0 * base).epsilon(1e-12));
    }
  }
}

TEST_CASE("tilt oracle closed-form cases") {
  const phys::BoxGeometry box;  // 0.17 x 0.06, 0.08 kg
  const phys::MaterialParams material;

  SUBCASE("textbook statics at zero tilt, push at mid-height") {
    const double F = eval::quasi_static_tilt_oracle(box, material, 0.0, 0.03);
    CHECK(F == doctest::Approx(box.mass * 9.81 * (box.length / 2.0) / 0.03).epsilon(1e-12));
  }
  SUBCASE("square box balances at pi/4 where the force vanishes") {
    const phys::BoxGeometry cube = phys::BoxGeometry::make(0.06, 0.06, 0.08);
    const double balance = M_PI / 4.0;
    const double near = balance - 1e-3;
    const double push = cube.length * std::sin(near) + 0.5 * cube.height * std::cos(near);
    const double F = eval::quasi_static_tilt_oracle(cube, material, near, push);
    CHECK(F < 0.01);
    CHECK(F > 0.0);
    const double at = eval::quasi_static_tilt_oracle(cube, material, balance + 1e-3, push);
    CHECK(at == 0.0);
  }
  SUBCASE("horizontal push infeasible when the contact cone is too narrow") {
    phys::MaterialParams slippery = material;
    slippery.friction_box_effector = 0.3;
    const double tilt = 0.5;  // tan(0.5) = 0.546 > 0.3
    const double push = box.length * std::sin(tilt) + 0.5 * box.height * std::cos(tilt);
    CHECK_THROWS_AS(eval::quasi_static_tilt_oracle(box, slippery, tilt, push),
                    eval::InfeasiblePivot);
  }
  SUBCASE("push point must lie on the face") {
    CHECK_THROWS_AS(eval::quasi_static_tilt_oracle(box, material, 0.0, 0.07),
                    eval::InfeasiblePivot);
  }
}

TEST_CASE("standing momentum budget") {
  const phys::BoxGeometry box;
  CHECK(eval::standing_momentum_budget(box, 0.0) == 0.0);
  const double at03 = eval::standing_momentum_budget(box, 0.3);
  const double at06 = eval::standing_momentum_budget(box, 0.6);
  CHECK(at03 > 0.0);
  CHECK(at06 > at03);
  // hand evaluation at 0.5 rad
  const double l = 0.085, c = 0.03;
  const double pivot_inertia = box.moment_of_inertia + box.mass * (l * l + c * c);
  const double dh = l * std::sin(0.5) + c * std::cos(0.5) - c;
  const double expect = std::sqrt(2.0 * pivot_inertia * box.mass * 9.81 * dh);
  CHECK(eval::standing_momentum_budget(box, 0.5) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("single-point sweep equals plain evaluation") {
  env::EnvConfig cfg;
  for (env::RandomizationRow* row : {&cfg.table.mass, &cfg.table.friction, &cfg.table.object_y,
                                     &cfg.table.support_y, &cfg.table.eff_y, &cfg.table.eff_z,
                                     &cfg.table.eff_pitch}) {
    row->probability = 0.0;
  }
  cfg.table.reference_probability = 0.0;
  Rng net_rng(41);
  const sac::Networks nets = sac::Networks::init(net_rng);

  eval::SweepSpec spec;
  spec.axis = eval::SweepAxis::Mass;
  spec.grid = {0.08};
  spec.episodes_per_point = 3;
  spec.seed = 7;
  const auto table = eval::run_sweep(cfg, nets.actor, spec);
  REQUIRE(table.size() == 1);
  CHECK(table[0].episodes == 3);

  const eval::EvalSummary plain =
      eval::evaluate_policy(cfg, nets.actor, 3, Rng::derive_stream(7, 0));
  CHECK(table[0].success_rate == plain.success_rate);
  CHECK(table[0].mean_max_pitch == doctest::Approx(plain.mean_max_pitch).epsilon(1e-12));
}

TEST_CASE("sweep output is a pure function of checkpoint, spec, and seed") {
  env::EnvConfig cfg;
  Rng net_rng(42);
  const sac::Networks nets = sac::Networks::init(net_rng);
  eval::SweepSpec spec;
  spec.axis = eval::SweepAxis::Friction;
  spec.grid = {0.3, 0.6};
  spec.episodes_per_point = 2;
  spec.seed = 11;
  const auto a = eval::run_sweep(cfg, nets.actor, spec);
  const auto b = eval::run_sweep(cfg, nets.actor, spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].success_rate == b[i].success_rate);
    CHECK(a[i].mean_max_pitch == b[i].mean_max_pitch);
    CHECK(a[i].std_max_pitch == b[i].std_max_pitch);
  }
}

TEST_CASE("width sweep adapts the success threshold to the swept length") {
  // max_pitch 0.45 succeeds for the default length but not for a long box
  CHECK(eval::task_success(0.17, 0.45));
  CHECK_FALSE(eval::task_success(0.40, 0.12));
}

TEST_CASE("random policy never lifts") {
  env::EnvConfig cfg;
  Rng net_rng(43);
  sac::Networks nets = sac::Networks::init(net_rng);
  CHECK_THROWS_AS(
      eval::disturbance_trial(cfg, nets.actor, cfg.defaults, 0.001),
      eval::NoLiftAchieved);
}
