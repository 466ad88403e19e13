/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/ratecalc.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace risd2d;

namespace {

constexpr double kPi = std::numbers::pi;

struct Instance {
  ScenarioConfig cfg;
  Scenario sc;
  PowerAllocation pw;
  RBAssignment a;
  PhaseShift phase;
};

Instance random_instance(std::uint64_t seed, int num_d2d = 2) {
  Instance in;
  in.cfg.seed = seed;
  in.cfg.num_d2d = num_d2d;
  in.sc = generate_scenario(in.cfg);
  Rng rng(seed + 17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  in.pw.cellular = Eigen::MatrixXd::Zero(in.cfg.num_cu, in.cfg.num_rb);
  for (int j = 0; j < in.cfg.num_cu; ++j)
    for (int k : in.sc.graph.rbs_of_user[j]) in.pw.cellular(j, k) = 0.5 * u(rng);
  in.pw.d2d = Eigen::VectorXd::Constant(num_d2d, 0.3);
  std::vector<int> rbs;
  for (int l = 0; l < num_d2d; ++l) rbs.push_back((l + static_cast<int>(seed)) % in.cfg.num_rb);
  in.a = RBAssignment::from_rbs(rbs, in.cfg.num_rb);
  in.phase = PhaseShift::random(in.cfg.num_ris, rng);
  return in;
}

}  // namespace

TEST(PhaseShift, WrapsIntoHalfOpenInterval) {
  const PhaseShift p(Eigen::Vector4d(0.0, 2 * kPi, -kPi / 2, 5 * kPi));
  EXPECT_DOUBLE_EQ(p.theta(0), 2 * kPi);
  EXPECT_DOUBLE_EQ(p.theta(1), 2 * kPi);
  EXPECT_NEAR(p.theta(2), 1.5 * kPi, 1e-15);
  EXPECT_NEAR(p.theta(3), kPi, 1e-12);
  Rng rng(1);
  for (int i = 0; i < 100; ++i)
    for (double t : PhaseShift::random(4, rng).theta) {
      EXPECT_GT(t, 0.0);
      EXPECT_LE(t, 2 * kPi);
    }
}

TEST(EffectiveChannel, ZeroRisPath) {
  const Eigen::VectorXcd g = Eigen::VectorXcd::Zero(3), f = Eigen::VectorXcd::Ones(3);
  EXPECT_EQ(effective_channel(cplx(0.3, -1.0), g, f, PhaseShift(Eigen::Vector3d(1, 2, 3))), cplx(0.3, -1.0));
}

TEST(EffectiveChannel, PhasePi) {
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
  const cplx e = effective_channel(0.0, one, one, PhaseShift(Eigen::VectorXd::Constant(1, kPi)));
  EXPECT_NEAR(e.real(), -1.0, 1e-15);
  EXPECT_NEAR(e.imag(), 0.0, 1e-15);
}

TEST(EffectiveChannel, MatchesDirectSum) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const ChannelSet ch = oracle::random_channels(1, 1, 0, 4, 1.0, 1.0, rng);
    const PhaseShift p = PhaseShift::random(4, rng);
    const auto& l = ch.cb[0];
    EXPECT_LT(std::abs(effective_channel(l, p) - oracle::effective_channel_sum(l.h, l.g, l.f, p.theta)), 1e-12);
  }
  EXPECT_THROW(effective_channel(0.0, Eigen::VectorXcd::Ones(2), Eigen::VectorXcd::Ones(3), PhaseShift::random(2, rng)),
               std::invalid_argument);
}

TEST(SumRate, ZeroCellularPower) {
  Instance in = random_instance(1);
  in.pw.cellular.setZero();
  EXPECT_EQ(cellular_sum_rate(in.sc.channels, in.sc.graph, in.pw, in.a, in.phase, in.cfg.n0_watt()), 0.0);
}

TEST(SumRate, SingleRbLogTwoOfFour) {
  ChannelSet ch;
  ch.num_cu = 1;
  ch.num_rb = 1;
  ch.num_ris = 1;
  ch.cb.push_back({cplx(std::sqrt(3.0), 0.0), Eigen::VectorXcd::Zero(1), Eigen::VectorXcd::Zero(1)});
  FactorGraph fg;
  fg.num_users = 1;
  fg.num_rb = 1;
  fg.users_on_rb = {{0}};
  fg.rbs_of_user = {{0}};
  PowerAllocation pw{Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd()};
  const RBAssignment a(Eigen::MatrixXi::Zero(0, 1));
  Rng rng(1);
  EXPECT_NEAR(cellular_sum_rate(ch, fg, pw, a, PhaseShift::random(1, rng), 1.0), 2.0, 1e-15);
}

TEST(SumRate, MatchesIndependentRecomputation) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const Instance in = random_instance(s);
    const double n0 = in.cfg.n0_watt();
    const double lib = cellular_sum_rate(in.sc.channels, in.sc.graph, in.pw, in.a, in.phase, n0);
    const double ref = oracle::sum_rate(in.sc.channels, in.sc.graph, in.pw, in.a.a, in.phase.theta, n0);
    EXPECT_NEAR(lib, ref, 1e-10 * std::max(1.0, ref));
  }
}

TEST(SumRate, GammaIdentityAndCellularSinr) {
  const Instance in = random_instance(3);
  const RateContext ctx{in.sc.channels, in.sc.graph, in.cfg.n0_watt()};
  const EffectiveGains g = EffectiveGains::compute(in.sc.channels, in.phase);
  double s = 0.0;
  for (int k = 0; k < in.cfg.num_rb; ++k) {
    const double gk = gamma_k(k, ctx, in.pw, in.a, in.phase);
    EXPECT_DOUBLE_EQ(gk, gamma_k(k, g, in.sc.graph, in.pw, in.a, ctx.n0));
    s += std::log2(1.0 + gk);
    double sinr_sum = 0.0;
    for (int j : in.sc.graph.users_on_rb[k]) sinr_sum += cellular_sinr(j, k, ctx, in.pw, in.a, in.phase);
    EXPECT_NEAR(sinr_sum, gk, 1e-12 * gk);
  }
  EXPECT_NEAR(s, cellular_sum_rate(g, in.sc.graph, in.pw, in.a, ctx.n0), 1e-12 * s);
  EXPECT_THROW(cellular_sinr(0, 3, ctx, in.pw, in.a, in.phase), std::invalid_argument);
}

TEST(CellularSinr, NoD2dOnRb) {
  Instance in = random_instance(4, 0);
  const RateContext ctx{in.sc.channels, in.sc.graph, in.cfg.n0_watt()};
  const double h2 = std::norm(effective_channel(in.sc.channels.cell_bs(0, 0), in.phase));
  EXPECT_NEAR(cellular_sinr(0, 0, ctx, in.pw, in.a, in.phase), h2 * in.pw.cellular(0, 0) / ctx.n0,
              1e-12 * h2 * in.pw.cellular(0, 0) / ctx.n0);
  in.pw.cellular(0, 0) = 0.0;
  EXPECT_EQ(cellular_sinr(0, 0, ctx, in.pw, in.a, in.phase), 0.0);
}

TEST(D2dSinr, SumFormMatchesFixedForm) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const Instance in = random_instance(s);
    const RateContext ctx{in.sc.channels, in.sc.graph, in.cfg.n0_watt()};
    const EffectiveGains g = EffectiveGains::compute(in.sc.channels, in.phase);
    for (int l = 0; l < in.cfg.num_d2d; ++l) {
      const double sum_form = d2d_sinr(l, ctx, in.pw, in.a, in.phase);
      const double fixed = d2d_sinr_on(l, in.a.rb_of(l), g, in.sc.graph, in.pw, ctx.n0);
      const double ref = oracle::d2d_sinr_on(in.sc.channels, in.sc.graph, in.pw, l, in.a.rb_of(l), in.phase.theta,
                                             ctx.n0);
      EXPECT_NEAR(sum_form, fixed, 1e-12 * fixed);
      EXPECT_NEAR(sum_form, ref, 1e-10 * ref);
    }
  }
}

TEST(D2dSinr, ZeroPowers) {
  Instance in = random_instance(2);
  const RateContext ctx{in.sc.channels, in.sc.graph, in.cfg.n0_watt()};
  in.pw.cellular.setZero();
  const double h2 = std::norm(effective_channel(in.sc.channels.d2d_d2d(0, in.a.rb_of(0)), in.phase));
  EXPECT_NEAR(d2d_sinr(0, ctx, in.pw, in.a, in.phase), h2 * in.pw.d2d(0) / ctx.n0, 1e-12 * h2 * in.pw.d2d(0) / ctx.n0);
  in.pw.d2d(0) = 0.0;
  EXPECT_EQ(d2d_sinr(0, ctx, in.pw, in.a, in.phase), 0.0);
}

TEST(SumRate, MonotoneInPowers) {
  const Instance in = random_instance(6);
  const double n0 = in.cfg.n0_watt();
  const double base = cellular_sum_rate(in.sc.channels, in.sc.graph, in.pw, in.a, in.phase, n0);
  EXPECT_GE(base, 0.0);
  for (int j = 0; j < in.cfg.num_cu; ++j)
    for (int k : in.sc.graph.rbs_of_user[j]) {
      PowerAllocation up = in.pw;
      up.cellular(j, k) += 0.1;
      EXPECT_GE(cellular_sum_rate(in.sc.channels, in.sc.graph, up, in.a, in.phase, n0), base);
    }
  for (int l = 0; l < in.cfg.num_d2d; ++l) {
    PowerAllocation up = in.pw;
    up.d2d(l) += 0.1;
    EXPECT_LE(cellular_sum_rate(in.sc.channels, in.sc.graph, up, in.a, in.phase, n0), base);
  }
}

TEST(SumRate, PhaseIrrelevantWithoutRis) {
  const Instance in = random_instance(8);
  const ChannelSet z = in.sc.channels.without_ris();
  Rng rng(2);
  const double r0 = cellular_sum_rate(z, in.sc.graph, in.pw, in.a, in.phase, in.cfg.n0_watt());
  for (int t = 0; t < 10; ++t)
    EXPECT_EQ(cellular_sum_rate(z, in.sc.graph, in.pw, in.a, PhaseShift::random(4, rng), in.cfg.n0_watt()), r0);
}

TEST(RBAssignment, Validity) {
  EXPECT_TRUE(RBAssignment::from_rbs({2, 0}, 4).valid());
  Eigen::MatrixXi twice(2, 3);
  twice << 1, 0, 0, 1, 0, 0;
  EXPECT_FALSE(RBAssignment(twice).valid());
  Eigen::MatrixXi none(1, 3);
  none << 0, 0, 0;
  EXPECT_FALSE(RBAssignment(none).valid());
  const RBAssignment a = RBAssignment::from_rbs({3, 1}, 4);
  EXPECT_EQ(a.rb_of(0), 3);
  EXPECT_EQ(a.pair_on(1), 1);
  EXPECT_EQ(a.pair_on(0), -1);
}
