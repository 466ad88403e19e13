/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "risd2d/phase.hpp"
#include "risd2d/power.hpp"
#include "risd2d/rballoc.hpp"

#include <string>
#include <vector>

namespace risd2d {

enum class Scheme { Proposed, Rps, Rpo, Rrb, NoRis };

const char* to_string(Scheme s);
/// Accepts "proposed", "rps", "rpo", "rrb", "no_ris"; throws std::invalid_argument otherwise.
Scheme parse_scheme(const std::string& name);
std::vector<Scheme> all_schemes();

struct Solution {
  Scheme scheme = Scheme::Proposed;
  StepStatus status = StepStatus::Infeasible;
  PowerAllocation pw;
  RBAssignment a;
  PhaseShift phase;
  double rate = 0.0;          ///< cellular sum-rate at (pw, a, phase), bit/s/Hz
  std::vector<double> trace;  ///< rate after initialization and after each outer iteration
  int outer_iters = 0;
  int init_draws = 0;
  std::vector<PowerReport> power_reports;
  std::vector<RbReport> rb_reports;
  std::vector<PhaseReport> phase_reports;
  double wall_ms = 0.0;

  bool ok() const { return status == StepStatus::Ok; }
};

struct BcdOptions {
  int n_outer = 5;
  double improve_tol = 1e-4;  ///< outer stop once an iteration gains less than this
  int max_redraws = 10;       ///< initial (A, Theta) draws before giving up
  int retry_cap = 100;        ///< random-power and random-RB resampling cap of the baselines
  bool screen_initial = true;
  PowerOptions power;
  PhaseOptions phase;

  static BcdOptions from(const ScenarioConfig& cfg);
};

/// Alternating power, RB and phase steps from a feasible random start. Each
/// block update is kept only if it does not lower the sum-rate, so the trace
/// is nondecreasing. Randomness is drawn from streams of cfg.seed.
Solution optimize(const ChannelSet& ch, const FactorGraph& fg, const ScenarioConfig& cfg);

/// Benchmark schemes sharing the same block solvers: rps keeps random phases,
/// rpo keeps random feasible powers, rrb keeps a random feasible assignment
/// and no_ris removes the RIS path. Scheme::Proposed forwards to optimize.
Solution optimize_baseline(const ChannelSet& ch, const FactorGraph& fg, const ScenarioConfig& cfg, Scheme scheme);

/// Constraint residuals of a solution against the channels its scheme uses.
struct ConstraintAudit {
  double qos = 0.0;      ///< largest relative D2D SINR shortfall (C1)
  bool assignment = false;  ///< C2, C3
  double power = 0.0;    ///< largest power-limit or sign violation in watts (C4, C5)
  bool phases = false;   ///< C6
  bool ok(double qos_tol = 1e-6, double power_tol = 1e-7) const {
    return qos <= qos_tol && assignment && power <= power_tol && phases;
  }
};

ConstraintAudit audit(const ChannelSet& ch, const FactorGraph& fg, const ScenarioConfig& cfg, const Solution& s);

}  // namespace risd2d
