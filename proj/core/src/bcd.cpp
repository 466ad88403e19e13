/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/bcd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace risd2d {

namespace {

// stream tag for the optimizer, offset from the scenario tags
constexpr std::uint64_t kTagBcd = 100;

RBAssignment random_assignment(int num_rb, int num_d2d, Rng& rng) {
  std::vector<int> rbs(num_rb);
  for (int k = 0; k < num_rb; ++k) rbs[k] = k;
  std::shuffle(rbs.begin(), rbs.end(), rng);
  rbs.resize(num_d2d);
  return RBAssignment::from_rbs(rbs, num_rb);
}

struct Blocks {
  bool power, rb, phase;
};

Blocks blocks_of(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return {true, true, true};
    case Scheme::Rps: return {true, true, false};
    case Scheme::Rpo: return {false, true, true};
    case Scheme::Rrb: return {true, false, true};
    case Scheme::NoRis: return {true, true, false};
  }
  return {true, true, true};
}

// Random powers drawn uniformly, scaled up as far as C4/C5 allow, then the
// cellular powers on each D2D RB scaled down until the pair's QoS holds.
bool random_feasible_powers(const EffectiveGains& gains, const FactorGraph& fg, const RBAssignment& a,
                            const PowerLimits& lim, Rng& rng, PowerAllocation& pw) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  pw.cellular = Eigen::MatrixXd::Zero(gains.num_cu, gains.num_rb);
  pw.d2d = Eigen::VectorXd::Zero(gains.num_d2d);
  for (int j = 0; j < gains.num_cu; ++j)
    for (int k : fg.rbs_of_user[j]) pw.cellular(j, k) = u01(rng) * lim.p0_c;
  for (int l = 0; l < gains.num_d2d; ++l) pw.d2d(l) = u01(rng) * lim.p0_d;

  double s = std::numeric_limits<double>::infinity();
  for (int j = 0; j < gains.num_cu; ++j)
    if (pw.user_total(j) > 0.0) s = std::min(s, lim.p0_c / pw.user_total(j));
  for (int l = 0; l < gains.num_d2d; ++l)
    if (pw.d2d(l) > 0.0) s = std::min(s, lim.p0_d / pw.d2d(l));
  if (std::isfinite(s)) {
    pw.cellular *= s;
    pw.d2d *= s;
    // guard the exact limits against rounding in the product
    for (int j = 0; j < gains.num_cu; ++j)
      if (pw.user_total(j) > lim.p0_c) pw.cellular.row(j) *= lim.p0_c / pw.user_total(j);
    for (int l = 0; l < gains.num_d2d; ++l) pw.d2d(l) = std::min(pw.d2d(l), lim.p0_d);
  }

  if (lim.gamma0 <= 0.0) return true;
  for (int l = 0; l < gains.num_d2d; ++l) {
    const int k = a.rb_of(l);
    const double budget = pw.d2d(l) * gains.dd(l, k) / lim.gamma0 - lim.n0;
    if (budget <= 0.0) return false;
    double interference = 0.0;
    for (int j : fg.users_on_rb[k]) interference += pw.cellular(j, k) * gains.cd[l](j, k);
    // small margin so the relative QoS check passes after rounding
    const double target = budget * (1.0 - 1e-9);
    if (interference > target)
      for (int j : fg.users_on_rb[k]) pw.cellular(j, k) *= target / interference;
  }
  return qos_violation(gains, fg, pw, a, lim.n0, lim.gamma0) <= 1e-9;
}

}  // namespace

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return "proposed";
    case Scheme::Rps: return "rps";
    case Scheme::Rpo: return "rpo";
    case Scheme::Rrb: return "rrb";
    case Scheme::NoRis: return "no_ris";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : all_schemes())
    if (name == to_string(s)) return s;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::vector<Scheme> all_schemes() { return {Scheme::Proposed, Scheme::Rps, Scheme::Rpo, Scheme::Rrb, Scheme::NoRis}; }

BcdOptions BcdOptions::from(const ScenarioConfig& cfg) {
  BcdOptions o;
  o.n_outer = cfg.n_outer;
  o.screen_initial = cfg.screen_initial_assignment;
  o.power = PowerOptions::from(cfg);
  o.phase = PhaseOptions::from(cfg);
  return o;
}

Solution optimize(const ChannelSet& ch, const FactorGraph& fg, const ScenarioConfig& cfg) {
  return optimize_baseline(ch, fg, cfg, Scheme::Proposed);
}

Solution optimize_baseline(const ChannelSet& ch, const FactorGraph& fg, const ScenarioConfig& cfg, Scheme scheme) {
  const auto t_start = std::chrono::steady_clock::now();
  const BcdOptions opt = BcdOptions::from(cfg);
  const PowerLimits lim = PowerLimits::from(cfg);
  const Blocks blocks = blocks_of(scheme);
  const ChannelSet without = scheme == Scheme::NoRis ? ch.without_ris() : ChannelSet{};
  const ChannelSet& chan = scheme == Scheme::NoRis ? without : ch;
  // One stream for every scheme, so schemes sharing an initialization rule
  // start from the same point.
  Rng rng = make_stream(cfg.seed, kTagBcd, 0);

  Solution sol;
  sol.scheme = scheme;
  auto finish = [&]() -> Solution& {
    sol.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
    return sol;
  };

  // Initialization: phases, assignment and powers, redrawn on infeasibility.
  EffectiveGains gains;
  bool started = false;
  const int draws = scheme == Scheme::Rpo || scheme == Scheme::Rrb ? opt.retry_cap : opt.max_redraws;
  for (int d = 0; d < draws && !started; ++d) {
    ++sol.init_draws;
    sol.phase = PhaseShift::random(cfg.num_ris, rng);
    gains = EffectiveGains::compute(chan, sol.phase);
    if (scheme == Scheme::Rpo) {
      sol.a = random_assignment(cfg.num_rb, cfg.num_d2d, rng);
      started = random_feasible_powers(gains, fg, sol.a, lim, rng, sol.pw);
      continue;
    }
    const bool screen = opt.screen_initial && scheme != Scheme::Rrb;
    const std::vector<RBAssignment> cands =
        screen ? enumerate_assignments(cfg.num_rb, cfg.num_d2d)
               : std::vector<RBAssignment>{random_assignment(cfg.num_rb, cfg.num_d2d, rng)};
    double best = -1.0;
    for (const RBAssignment& a : cands) {
      PowerResult pr = solve_power(gains, fg, a, lim, opt.power, rng);
      sol.power_reports.push_back(pr.report);
      if (pr.report.status != StepStatus::Ok) continue;
      const double r = cellular_sum_rate(gains, fg, pr.pw, a, lim.n0);
      if (r > best) {
        best = r;
        sol.a = a;
        sol.pw = std::move(pr.pw);
        started = true;
      }
    }
  }
  if (!started) {
    sol.status = StepStatus::Infeasible;
    return finish();
  }

  double rate = cellular_sum_rate(gains, fg, sol.pw, sol.a, lim.n0);
  sol.trace.push_back(rate);
  for (int n = 0; n < opt.n_outer; ++n) {
    const double before = rate;
    if (blocks.power) {
      PowerResult pr = solve_power(gains, fg, sol.a, lim, opt.power, rng, &sol.pw);
      sol.power_reports.push_back(pr.report);
      if (pr.report.status == StepStatus::Ok) {
        const double r = cellular_sum_rate(gains, fg, pr.pw, sol.a, lim.n0);
        if (r >= rate) {
          rate = r;
          sol.pw = std::move(pr.pw);
        }
      }
    }
    if (blocks.rb) {
      RbResult rr = solve_rb(gains, fg, sol.pw, lim);
      sol.rb_reports.push_back(rr.report);
      if (rr.report.status == StepStatus::Ok && rr.report.rate >= rate) {
        rate = rr.report.rate;
        sol.a = std::move(rr.a);
      }
    }
    if (blocks.phase) {
      PhaseResult ph = solve_phase(chan, fg, sol.pw, sol.a, lim, opt.phase, lifted_matrix(sol.phase));
      sol.phase_reports.push_back(ph.report);
      if (ph.report.status == StepStatus::Ok && ph.report.achieved_rate >= rate) {
        rate = ph.report.achieved_rate;
        sol.phase = ph.phase;
        gains = EffectiveGains::compute(chan, sol.phase);
      }
    }
    sol.trace.push_back(rate);
    ++sol.outer_iters;
    if (rate - before < opt.improve_tol) break;
  }

  sol.rate = cellular_sum_rate(chan, fg, sol.pw, sol.a, sol.phase, lim.n0);
  sol.status = StepStatus::Ok;
  return finish();
}

ConstraintAudit audit(const ChannelSet& ch, const FactorGraph& fg, const ScenarioConfig& cfg, const Solution& s) {
  ConstraintAudit r;
  const PowerLimits lim = PowerLimits::from(cfg);
  const ChannelSet chan = s.scheme == Scheme::NoRis ? ch.without_ris() : ch;

  r.assignment = s.a.num_pairs() == cfg.num_d2d && (cfg.num_d2d == 0 || s.a.num_rb() == cfg.num_rb) && s.a.valid();

  r.phases = s.phase.size() == cfg.num_ris;
  for (int m = 0; m < s.phase.size() && r.phases; ++m)
    r.phases = s.phase.theta(m) > 0.0 && s.phase.theta(m) <= 2.0 * std::numbers::pi;

  double pv = 0.0;
  if (s.pw.cellular.rows() != cfg.num_cu || s.pw.cellular.cols() != cfg.num_rb || s.pw.d2d.size() != cfg.num_d2d) {
    pv = std::numeric_limits<double>::infinity();
  } else {
    for (int j = 0; j < cfg.num_cu; ++j) {
      for (int k = 0; k < cfg.num_rb; ++k) {
        const double p = s.pw.cellular(j, k);
        pv = std::max(pv, fg.occupies(j, k) ? -p : std::abs(p));
      }
      pv = std::max(pv, s.pw.user_total(j) - lim.p0_c);
    }
    for (int l = 0; l < cfg.num_d2d; ++l) pv = std::max({pv, -s.pw.d2d(l), s.pw.d2d(l) - lim.p0_d});
  }
  r.power = pv;

  if (r.assignment && r.phases && std::isfinite(pv)) {
    const EffectiveGains gains = EffectiveGains::compute(chan, s.phase);
    r.qos = qos_violation(gains, fg, s.pw, s.a, lim.n0, lim.gamma0);
  } else {
    r.qos = std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace risd2d
