/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "risd2d/power.hpp"
#include "risd2d/ratecalc.hpp"
#include "risd2d/report.hpp"

#include <vector>

namespace risd2d {

/// Every valid J_D x K assignment: RB subsets of size J_D in lexicographic
/// order, and for each subset every permutation in lexicographic order.
/// J_D = 0 yields the single empty assignment. Throws std::invalid_argument
/// when J_D > K or either count is negative.
std::vector<RBAssignment> enumerate_assignments(int num_rb, int num_d2d);

struct RbReport {
  StepStatus status = StepStatus::Infeasible;
  int candidates = 0;
  int feasible = 0;
  int best_index = -1;  ///< position in enumeration order
  double rate = 0.0;
};

struct RbResult {
  RBAssignment a;
  RbReport report;
};

/// Exhaustive search for the QoS-feasible assignment with the largest
/// cellular sum-rate at fixed powers and phases. Ties keep the earliest
/// candidate.
RbResult solve_rb(const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                  const PowerLimits& lim, double qos_tol = 1e-6);

RbResult solve_rb(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw, const PhaseShift& phase,
                  const ScenarioConfig& cfg);

}  // namespace risd2d
