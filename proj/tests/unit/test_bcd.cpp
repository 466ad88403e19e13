/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/bcd.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace risd2d;

namespace {

ScenarioConfig with_seed(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  return cfg;
}

void expect_feasible(const Scenario& sc, const Solution& s) {
  const ConstraintAudit au = audit(sc.channels, sc.graph, sc.cfg, s);
  EXPECT_TRUE(au.ok()) << to_string(s.scheme) << " qos " << au.qos << " power " << au.power;
  const ChannelSet ch = s.scheme == Scheme::NoRis ? sc.channels.without_ris() : sc.channels;
  EXPECT_TRUE(oracle::qos_ok(ch, sc.graph, s.pw, s.a.a, s.phase.theta, sc.cfg.n0_watt(), sc.cfg.gamma0_d()));
  const double r = oracle::sum_rate(ch, sc.graph, s.pw, s.a.a, s.phase.theta, sc.cfg.n0_watt());
  EXPECT_NEAR(s.rate, r, 1e-9 * (1 + r));
}

}  // namespace

TEST(Optimize, TraceNondecreasingAndFeasible) {
  for (int s = 0; s < 20; ++s) {
    const Scenario sc = generate_scenario(with_seed(500 + s));
    const Solution sol = optimize(sc.channels, sc.graph, sc.cfg);
    ASSERT_TRUE(sol.ok()) << s;
    for (std::size_t i = 1; i < sol.trace.size(); ++i) EXPECT_GE(sol.trace[i], sol.trace[i - 1] - 1e-6) << s;
    EXPECT_LE(sol.outer_iters, sc.cfg.n_outer);
    expect_feasible(sc, sol);
  }
}

TEST(Optimize, NoD2dPairs) {
  ScenarioConfig cfg = with_seed(3);
  cfg.num_d2d = 0;
  const Scenario sc = generate_scenario(cfg);
  const Solution sol = optimize(sc.channels, sc.graph, cfg);
  ASSERT_TRUE(sol.ok());
  EXPECT_EQ(sol.a.num_pairs(), 0);
  for (const RbReport& r : sol.rb_reports) EXPECT_EQ(r.candidates, 1);
  expect_feasible(sc, sol);
}

TEST(Optimize, MicroInstanceNearBruteForce) {
  ScenarioConfig cfg = with_seed(9);
  cfg.num_cu = 2;
  cfg.num_rb = 2;
  cfg.rb_per_cu = 1;
  cfg.num_d2d = 1;
  cfg.num_ris = 1;
  for (int t = 0; t < 3; ++t) {
    cfg.seed = 90 + t;
    const Scenario sc = generate_scenario(cfg);
    const Solution sol = optimize(sc.channels, sc.graph, cfg);
    const oracle::JointBest o = oracle::joint_bruteforce(sc.channels, sc.graph, cfg.p0_c_watt(), cfg.p0_d_watt(),
                                                         cfg.n0_watt(), cfg.gamma0_d());
    ASSERT_EQ(sol.ok(), o.feasible) << t;
    if (o.feasible) EXPECT_GE(sol.rate, 0.98 * o.rate) << t;
  }
}

TEST(Baselines, NoRisIgnoresPhases) {
  const Scenario sc = generate_scenario(with_seed(12));
  const Solution sol = optimize_baseline(sc.channels, sc.graph, sc.cfg, Scheme::NoRis);
  ASSERT_TRUE(sol.ok());
  const ChannelSet bare = sc.channels.without_ris();
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const PhaseShift ph = PhaseShift::random(sc.cfg.num_ris, rng);
    EXPECT_DOUBLE_EQ(cellular_sum_rate(bare, sc.graph, sol.pw, sol.a, ph, sc.cfg.n0_watt()), sol.rate);
  }
  expect_feasible(sc, sol);
}

TEST(Baselines, AllSchemesFeasible) {
  for (int s = 0; s < 3; ++s) {
    const Scenario sc = generate_scenario(with_seed(700 + s));
    for (Scheme sch : all_schemes()) {
      const Solution sol = optimize_baseline(sc.channels, sc.graph, sc.cfg, sch);
      if (!sol.ok()) {
        EXPECT_TRUE(sch == Scheme::Rpo || sch == Scheme::Rrb) << to_string(sch);
        continue;
      }
      EXPECT_EQ(sol.scheme, sch);
      expect_feasible(sc, sol);
    }
  }
}

TEST(Baselines, ProposedBeatsRandomRb) {
  int wins = 0, n = 0;
  for (int t = 0; t < 100; ++t) {
    const Scenario sc = generate_scenario(with_seed(2000 + t));
    const Solution p = optimize(sc.channels, sc.graph, sc.cfg);
    const Solution r = optimize_baseline(sc.channels, sc.graph, sc.cfg, Scheme::Rrb);
    if (!p.ok()) continue;
    ++n;
    if (!r.ok() || p.rate >= r.rate) ++wins;
  }
  ASSERT_GT(n, 0);
  EXPECT_GE(wins, 0.9 * n) << wins << " / " << n;
}

TEST(Schemes, NamesRoundTrip) {
  for (Scheme s : all_schemes()) EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_THROW(parse_scheme("best"), std::invalid_argument);
}

TEST(Optimize, Deterministic) {
  const Scenario sc = generate_scenario(with_seed(77));
  const Solution a = optimize(sc.channels, sc.graph, sc.cfg);
  const Solution b = optimize(sc.channels, sc.graph, sc.cfg);
  EXPECT_EQ(a.rate, b.rate);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.phase.theta, b.phase.theta);
}
