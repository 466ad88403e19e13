/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/rballoc.hpp"

#include "risd2d/power.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace risd2d;

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_assignments(4, 1).size(), 4u);
  EXPECT_EQ(enumerate_assignments(4, 2).size(), 12u);
  EXPECT_EQ(enumerate_assignments(3, 3).size(), 6u);
  EXPECT_EQ(enumerate_assignments(4, 0).size(), 1u);
  EXPECT_THROW(enumerate_assignments(2, 3), std::invalid_argument);
  EXPECT_THROW(enumerate_assignments(-1, 0), std::invalid_argument);
}

TEST(Enumerate, SinglePairIsOneHotRows) {
  const auto c = enumerate_assignments(4, 1);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(c[k].rb_of(0), k);
    EXPECT_EQ(c[k].a.sum(), 1);
  }
}

TEST(Enumerate, DistinctValidAndOrdered) {
  const auto c = enumerate_assignments(5, 3);
  ASSERT_EQ(c.size(), 60u);
  std::set<std::vector<int>> seen;
  std::vector<int> prev;
  for (const RBAssignment& a : c) {
    EXPECT_TRUE(a.valid());
    std::vector<int> rbs;
    for (int l = 0; l < 3; ++l) rbs.push_back(a.rb_of(l));
    EXPECT_TRUE(seen.insert(rbs).second);
    std::vector<int> sorted = rbs;
    std::sort(sorted.begin(), sorted.end());
    if (!prev.empty()) {
      std::vector<int> ps = prev;
      std::sort(ps.begin(), ps.end());
      // subsets ascend; within a subset the permutations ascend
      EXPECT_TRUE(ps < sorted || (ps == sorted && prev < rbs));
    }
    prev = rbs;
  }
  const auto p = enumerate_assignments(3, 3);
  for (const RBAssignment& a : p) {
    EXPECT_EQ(a.a.rowwise().sum(), Eigen::VectorXi::Ones(3));
    EXPECT_EQ(a.a.colwise().sum(), Eigen::RowVectorXi::Ones(3));
  }
}

namespace {

struct Instance {
  ChannelSet ch;
  FactorGraph fg;
  PowerAllocation pw;
  PhaseShift phase;
};

Instance random_instance(int K, int JD, Rng& rng) {
  Instance in;
  in.fg = build_factor_graph(6, K, 2);
  in.ch = oracle::random_channels(6, K, JD, 2, 1.0, 0.3, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  in.pw.cellular = Eigen::MatrixXd::Zero(6, K);
  for (int j = 0; j < 6; ++j)
    for (int k : in.fg.rbs_of_user[j]) in.pw.cellular(j, k) = 0.5 * u(rng);
  in.pw.d2d = Eigen::VectorXd::Zero(JD);
  for (int l = 0; l < JD; ++l) in.pw.d2d(l) = u(rng);
  in.phase = PhaseShift::random(2, rng);
  return in;
}

PowerLimits limits(double gamma0) {
  PowerLimits lim;
  lim.n0 = 0.05;
  lim.gamma0 = gamma0;
  return lim;
}

}  // namespace

TEST(SolveRb, ZeroQosIsPlainArgmax) {
  Rng rng(2);
  const Instance in = random_instance(4, 2, rng);
  const EffectiveGains g = EffectiveGains::compute(in.ch, in.phase);
  const RbResult r = solve_rb(g, in.fg, in.pw, limits(0.0));
  ASSERT_EQ(r.report.status, StepStatus::Ok);
  EXPECT_EQ(r.report.feasible, 12);
  const auto cands = enumerate_assignments(4, 2);
  double best = -1;
  for (const auto& a : cands) best = std::max(best, oracle::sum_rate(in.ch, in.fg, in.pw, a.a, in.phase.theta, 0.05));
  EXPECT_NEAR(r.report.rate, best, 1e-12 * best);
}

TEST(SolveRb, InfeasibleQos) {
  Rng rng(3);
  Instance in = random_instance(4, 2, rng);
  in.pw.d2d *= 1e-6;
  const EffectiveGains g = EffectiveGains::compute(in.ch, in.phase);
  const RbResult r = solve_rb(g, in.fg, in.pw, limits(1e6));
  EXPECT_EQ(r.report.status, StepStatus::Infeasible);
  EXPECT_EQ(r.report.feasible, 0);
}

TEST(SolveRb, InterferenceFreePicksQuietestRb) {
  // One pair, every QoS satisfied, no CU->DR coupling: the best RB is the one
  // where the pair's interference at the BS hurts least.
  Rng rng(4);
  Instance in = random_instance(4, 1, rng);
  for (auto& c : in.ch.cd) {
    c.h = 0.0;
    c.f.setZero();
  }
  in.pw.d2d(0) = 1.0;
  const EffectiveGains g = EffectiveGains::compute(in.ch, in.phase);
  const RbResult r = solve_rb(g, in.fg, in.pw, limits(1.0));
  ASSERT_EQ(r.report.status, StepStatus::Ok);
  EXPECT_EQ(r.report.feasible, 4);
  int arg = -1;
  double best = -1;
  for (int k = 0; k < 4; ++k) {
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(1, 4);
    a(0, k) = 1;
    const double rate = oracle::sum_rate(in.ch, in.fg, in.pw, a, in.phase.theta, 0.05);
    if (rate > best) best = rate, arg = k;
  }
  EXPECT_EQ(r.a.rb_of(0), arg);
}

TEST(SolveRb, MatchesIndependentEnumeration) {
  for (int JD = 1; JD <= 3; ++JD) {
    for (int t = 0; t < 20; ++t) {
      Rng rng(1000 * JD + t);
      const Instance in = random_instance(4, JD, rng);
      const EffectiveGains g = EffectiveGains::compute(in.ch, in.phase);
      const double gamma0 = 0.5;
      const RbResult r = solve_rb(g, in.fg, in.pw, limits(gamma0));
      const oracle::RbBest o = oracle::exhaustive_rb(in.ch, in.fg, in.pw, in.phase.theta, 0.05, gamma0);
      ASSERT_EQ(r.report.status == StepStatus::Ok, o.feasible) << JD << ' ' << t;
      if (!o.feasible) continue;
      EXPECT_TRUE(r.a.valid());
      EXPECT_NEAR(r.report.rate, o.rate, 1e-10 * o.rate);
      if (o.ties == 0) EXPECT_EQ(r.a.a, o.a);
      EXPECT_EQ(solve_rb(g, in.fg, in.pw, limits(gamma0)).a, r.a);
    }
  }
}
