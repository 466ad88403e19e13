/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/power.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace risd2d;

namespace {

EffectiveGains random_gains(int J, int K, int JD, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EffectiveGains g;
  g.num_cu = J;
  g.num_rb = K;
  g.num_d2d = JD;
  g.cb.resize(J, K);
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k) g.cb(j, k) = 5.0 + 15.0 * u(rng);
  g.db.resize(JD, K);
  g.dd.resize(JD, K);
  for (int l = 0; l < JD; ++l)
    for (int k = 0; k < K; ++k) {
      g.db(l, k) = 0.5 + 2.5 * u(rng);
      g.dd(l, k) = 10.0 + 40.0 * u(rng);
    }
  for (int l = 0; l < JD; ++l) {
    Eigen::MatrixXd c(J, K);
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < K; ++k) c(j, k) = 1.0 + 4.0 * u(rng);
    g.cd.push_back(c);
  }
  return g;
}

PowerLimits unit_limits(double gamma0) {
  PowerLimits lim;
  lim.p0_c = 1.0;
  lim.p0_d = 1.0;
  lim.n0 = 1.0;
  lim.gamma0 = gamma0;
  return lim;
}

// C1, C4, C5 written out from the model, independent of power_feasible.
bool feasible_by_hand(const EffectiveGains& g, const FactorGraph& fg, const RBAssignment& a, const PowerLimits& lim,
                      const PowerAllocation& pw) {
  for (int j = 0; j < g.num_cu; ++j) {
    double t = 0.0;
    for (int k = 0; k < g.num_rb; ++k) {
      if (pw.cellular(j, k) < -1e-7) return false;
      t += pw.cellular(j, k);
    }
    if (t > lim.p0_c + 1e-7) return false;
  }
  for (int l = 0; l < g.num_d2d; ++l) {
    if (pw.d2d(l) < -1e-7 || pw.d2d(l) > lim.p0_d + 1e-7) return false;
    const int k = a.rb_of(l);
    double in = lim.n0;
    for (int j : fg.users_on_rb[k]) in += g.cd[l](j, k) * pw.cellular(j, k);
    if ((lim.gamma0 - g.dd(l, k) * pw.d2d(l) / in) / lim.gamma0 > 1e-6) return false;
  }
  return true;
}

}  // namespace

TEST(Cub, Examples) {
  EXPECT_DOUBLE_EQ(cub_upper(2, 3, 1.0), 6.5);
  EXPECT_NEAR(cub_upper(2, 3, 1.5), 6.0, 1e-12);
  EXPECT_THROW(cub_upper(2, 3, 0.0), std::invalid_argument);
  EXPECT_THROW(cub_upper(2, 3, -1.0), std::invalid_argument);
}

TEST(Cub, GradientMatchesAtTightAlpha) {
  const double x = 2.0, y = 3.0, al = y / x;
  const double gx = oracle::central_diff([&](double t) { return cub_upper(t, y, al); }, x, 1e-5);
  const double gy = oracle::central_diff([&](double t) { return cub_upper(x, t, al); }, y, 1e-5);
  EXPECT_NEAR(gx, y, 1e-6);
  EXPECT_NEAR(gy, x, 1e-6);
}

TEST(Cub, SandwichProperty) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng), y = u(rng), al = 1e-3 + u(rng);
    EXPECT_GE(cub_upper(x, y, al), x * y - 1e-12 * (1 + x * y));
    if (x > 1e-3) EXPECT_NEAR(cub_upper(x, y, y / x), x * y, 1e-12 * (1 + x * y));
  }
}

TEST(PowerModel, ProgramsAreConvex) {
  Rng rng(5);
  const FactorGraph fg = build_factor_graph(6, 4, 2);
  const EffectiveGains g = random_gains(6, 4, 2, rng);
  const RBAssignment a = RBAssignment::from_rbs({1, 3}, 4);
  const PowerModel m(g, fg, a, unit_limits(2.0), Eigen::VectorXd::Ones(4));
  const Eigen::MatrixXd al = Eigen::MatrixXd::Constant(2, 4, 0.7);
  EXPECT_TRUE(conic::check_convexity(m.build_p4(al)).empty());
  EXPECT_TRUE(conic::check_convexity(m.build_p5(al)).empty());
  EXPECT_THROW(m.build_p4(Eigen::MatrixXd::Zero(2, 4)), std::invalid_argument);
  EXPECT_THROW(m.build_p4(Eigen::MatrixXd::Ones(3, 4)), std::invalid_argument);
}

TEST(PowerModel, NoPairsMeansNoD2dTerms) {
  Rng rng(6);
  const FactorGraph fg = build_factor_graph(6, 4, 2);
  const EffectiveGains g = random_gains(6, 4, 0, rng);
  const RBAssignment a(Eigen::MatrixXi(0, 4));
  const PowerModel m(g, fg, a, unit_limits(2.0), Eigen::VectorXd::Ones(4));
  const conic::ConvexProgram p = m.build_p4(Eigen::MatrixXd(0, 4));
  EXPECT_TRUE(p.quadratic.empty());
  int bounds = 0;
  for (const auto& c : p.linear)
    if (c.name == "sinr bound") ++bounds;
  EXPECT_EQ(bounds, 4);
}

TEST(PowerModel, FeasibleInstanceGivesZeroZ) {
  Rng rng(7);
  const FactorGraph fg = build_factor_graph(6, 4, 2);
  const EffectiveGains g = random_gains(6, 4, 2, rng);
  const RBAssignment a = RBAssignment::from_rbs({0, 2}, 4);
  const PowerLimits lim = unit_limits(2.0);
  const PowerModel m(g, fg, a, lim, Eigen::VectorXd::Ones(4));
  const conic::ConvexProgram p = m.build_p5(Eigen::MatrixXd::Constant(2, 4, 1.0));
  const conic::SolverReport r = conic::solve(p);
  ASSERT_TRUE(r.ok());
  EXPECT_LE(r.x(m.var_z()), 1e-6);
  EXPECT_LE(r.max_violation, 1e-7);
}

TEST(PowerModel, HugeQosGivesPositiveZ) {
  Rng rng(8);
  const FactorGraph fg = build_factor_graph(6, 4, 2);
  const EffectiveGains g = random_gains(6, 4, 2, rng);
  const RBAssignment a = RBAssignment::from_rbs({0, 2}, 4);
  const PowerLimits lim = unit_limits(1e6);
  const PowerModel m(g, fg, a, lim, Eigen::VectorXd::Ones(4));
  const conic::SolverReport r = conic::solve(m.build_p5(Eigen::MatrixXd::Constant(2, 4, 1.0)));
  ASSERT_TRUE(r.ok());
  EXPECT_GT(r.x(m.var_z()), 1e-6);

  Rng r2(1);
  const PowerResult pr = solve_power(g, fg, a, lim, PowerOptions{}, r2);
  EXPECT_EQ(pr.report.status, StepStatus::Infeasible);
  ASSERT_FALSE(pr.report.z_trace.empty());
  EXPECT_GT(pr.report.z_trace.back(), 1e-6);
}

TEST(SolvePower, TracesAndFeasibility) {
  for (int s = 0; s < 10; ++s) {
    Rng rng(100 + s);
    const FactorGraph fg = build_factor_graph(6, 4, 2);
    const EffectiveGains g = random_gains(6, 4, 2, rng);
    const RBAssignment a = RBAssignment::from_rbs({s % 4, (s + 1) % 4}, 4);
    const PowerLimits lim = unit_limits(3.0);
    const PowerResult pr = solve_power(g, fg, a, lim, PowerOptions{}, rng);
    ASSERT_EQ(pr.report.status, StepStatus::Ok) << s;
    const auto& z = pr.report.z_trace;
    for (std::size_t i = 1; i < z.size(); ++i) EXPECT_LE(z[i], z[i - 1] + 1e-8) << s;
    for (double v : z) EXPECT_GE(v, -1e-9);
    const auto& o = pr.report.objective_trace;
    ASSERT_FALSE(o.empty());
    for (std::size_t i = 1; i < o.size(); ++i) EXPECT_GE(o[i], o[i - 1] - 1e-8) << s;
    EXPECT_TRUE(feasible_by_hand(g, fg, a, lim, pr.pw)) << s;
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 4; ++k)
        if (!fg.occupies(j, k)) EXPECT_EQ(pr.pw.cellular(j, k), 0.0);
    // the reported objective is the rate the powers actually achieve, or a lower bound of it
    EXPECT_GE(cellular_sum_rate(g, fg, pr.pw, a, lim.n0), o.back() - 1e-6) << s;
  }
}

TEST(SolvePower, WarmStartNeverLosesRate) {
  Rng rng(21);
  const FactorGraph fg = build_factor_graph(6, 4, 2);
  const EffectiveGains g = random_gains(6, 4, 2, rng);
  const RBAssignment a = RBAssignment::from_rbs({3, 1}, 4);
  const PowerLimits lim = unit_limits(3.0);
  const PowerResult first = solve_power(g, fg, a, lim, PowerOptions{}, rng);
  ASSERT_EQ(first.report.status, StepStatus::Ok);
  const PowerResult second = solve_power(g, fg, a, lim, PowerOptions{}, rng, &first.pw);
  ASSERT_EQ(second.report.status, StepStatus::Ok);
  EXPECT_TRUE(second.report.warm_started);
  EXPECT_GE(cellular_sum_rate(g, fg, second.pw, a, lim.n0), cellular_sum_rate(g, fg, first.pw, a, lim.n0) - 1e-8);
}

TEST(SolvePower, SingleUserTakesFullPower) {
  const FactorGraph fg = build_factor_graph(1, 1, 1);
  EffectiveGains g;
  g.num_cu = 1;
  g.num_rb = 1;
  g.num_d2d = 0;
  g.cb = Eigen::MatrixXd::Constant(1, 1, 3.0);
  g.db.resize(0, 1);
  g.dd.resize(0, 1);
  PowerLimits lim = unit_limits(0.0);
  lim.p0_c = 2.0;
  Rng rng(1);
  const PowerResult pr = solve_power(g, fg, RBAssignment(Eigen::MatrixXi(0, 1)), lim, PowerOptions{}, rng);
  ASSERT_EQ(pr.report.status, StepStatus::Ok);
  EXPECT_NEAR(pr.pw.cellular(0, 0), 2.0, 1e-6);
}

TEST(SolvePower, ConvergedPointIsTightAndAlphaFixed) {
  Rng rng(31);
  const FactorGraph fg = build_factor_graph(6, 4, 2);
  const EffectiveGains g = random_gains(6, 4, 2, rng);
  const RBAssignment a = RBAssignment::from_rbs({2, 0}, 4);
  const PowerLimits lim = unit_limits(3.0);
  PowerOptions opt;
  opt.t2 = 60;
  opt.change_tol = 1e-10;
  const PowerResult pr = solve_power(g, fg, a, lim, opt, rng);
  ASSERT_EQ(pr.report.status, StepStatus::Ok);

  Eigen::VectorXd gam(4);
  for (int k = 0; k < 4; ++k) gam(k) = gamma_k(k, g, fg, pr.pw, a, lim.n0);
  const PowerModel m(g, fg, a, lim, gam.cwiseMax(1.0));
  const Eigen::VectorXd x0 = m.pack(pr.pw, gam, false);
  conic::Start st{x0, {}};
  const conic::SolverReport r = conic::solve(m.build_p4(m.alpha_at(x0)), {}, &st);
  ASSERT_TRUE(r.ok());
  // one more refresh of alpha barely moves the objective
  EXPECT_NEAR(p4_objective(m.q_values(r.x)), p4_objective(gam), 1e-6);
  // Q_k meets the SINR it bounds
  const PowerAllocation pw = m.powers(r.x);
  const Eigen::VectorXd q = m.q_values(r.x);
  for (int k = 0; k < 4; ++k) {
    const double gk = gamma_k(k, g, fg, pw, a, lim.n0);
    EXPECT_NEAR(q(k), gk, 1e-5 * std::max(1.0, gk)) << k;
  }
}

namespace {

// J=2, K=2, N=1, J_D=1: user 0 on RB 0, user 1 on RB 1, pair on `rb`.
double tiny_rate(const EffectiveGains& g, int rb, double p0, double p1, double pd, double n0) {
  const double d0 = n0 + (rb == 0 ? g.db(0, 0) * pd : 0.0);
  const double d1 = n0 + (rb == 1 ? g.db(0, 1) * pd : 0.0);
  return std::log2(1 + g.cb(0, 0) * p0 / d0) + std::log2(1 + g.cb(1, 1) * p1 / d1);
}

bool tiny_ok(const EffectiveGains& g, int rb, double p0, double p1, double pd, const PowerLimits& lim) {
  const double pc = rb == 0 ? p0 : p1;
  const int j = rb;
  return (lim.gamma0 - g.dd(0, rb) * pd / (lim.n0 + g.cd[0](j, rb) * pc)) / lim.gamma0 <= 1e-9;
}

double tiny_grid(const EffectiveGains& g, int rb, const PowerLimits& lim) {
  const int n = 200;
  double best = -1, b0 = 0, b1 = 0, bd = 0;
  auto scan = [&](double lo0, double lo1, double lod, double h) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const double p0 = lo0 + i * h, p1 = lo1 + j * h, pd = lod + l * h;
          if (p0 < 0 || p1 < 0 || pd < 0 || p0 > lim.p0_c || p1 > lim.p0_c || pd > lim.p0_d) continue;
          if (!tiny_ok(g, rb, p0, p1, pd, lim)) continue;
          const double r = tiny_rate(g, rb, p0, p1, pd, lim.n0);
          if (r > best) best = r, b0 = p0, b1 = p1, bd = pd;
        }
  };
  const double h = lim.p0_c / (n - 1);
  scan(0, 0, 0, h);
  scan(b0 - 2 * h, b1 - 2 * h, bd - 2 * h, 4 * h / (n - 1));
  return best;
}

}  // namespace

TEST(SolvePower, TinyInstanceMatchesGrid) {
  const FactorGraph fg = build_factor_graph(2, 2, 1);
  for (int s = 0; s < 3; ++s) {
    Rng rng(50 + s);
    const EffectiveGains g = random_gains(2, 2, 1, rng);
    const PowerLimits lim = unit_limits(2.0);
    const int rb = s % 2;
    const RBAssignment a = RBAssignment::from_rbs({rb}, 2);
    const PowerResult pr = solve_power(g, fg, a, lim, PowerOptions{}, rng);
    ASSERT_EQ(pr.report.status, StepStatus::Ok);
    const double got = cellular_sum_rate(g, fg, pr.pw, a, lim.n0);
    EXPECT_NEAR(got, tiny_grid(g, rb, lim), 1e-3) << s;
  }
}
