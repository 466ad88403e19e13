/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/rballoc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace risd2d {

std::vector<RBAssignment> enumerate_assignments(int num_rb, int num_d2d) {
  if (num_rb < 0 || num_d2d < 0) throw std::invalid_argument("counts must be nonnegative");
  if (num_d2d > num_rb) throw std::invalid_argument("more D2D pairs than RBs");
  std::vector<RBAssignment> out;
  if (num_d2d == 0) {
    out.emplace_back(Eigen::MatrixXi::Zero(0, num_rb));
    return out;
  }
  // Selection mask walked with prev_permutation gives lexicographic subsets.
  std::vector<bool> mask(num_rb, false);
  std::fill(mask.begin(), mask.begin() + num_d2d, true);
  do {
    std::vector<int> subset;
    for (int k = 0; k < num_rb; ++k)
      if (mask[k]) subset.push_back(k);
    do {
      out.push_back(RBAssignment::from_rbs(subset, num_rb));
    } while (std::next_permutation(subset.begin(), subset.end()));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

RbResult solve_rb(const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                  const PowerLimits& lim, double qos_tol) {
  RbResult res;
  const auto cands = enumerate_assignments(gains.num_rb, gains.num_d2d);
  res.report.candidates = static_cast<int>(cands.size());
  double best = -1.0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const RBAssignment& a = cands[i];
    bool ok = true;
    for (int l = 0; l < a.num_pairs() && ok; ++l) {
      const double sinr = d2d_sinr_on(l, a.rb_of(l), gains, fg, pw, lim.n0);
      ok = lim.gamma0 <= 0.0 || (lim.gamma0 - sinr) / lim.gamma0 <= qos_tol;
    }
    if (!ok) continue;
    ++res.report.feasible;
    const double r = cellular_sum_rate(gains, fg, pw, a, lim.n0);
    if (r > best) {
      best = r;
      res.a = a;
      res.report.best_index = static_cast<int>(i);
    }
  }
  if (res.report.best_index >= 0) {
    res.report.status = StepStatus::Ok;
    res.report.rate = best;
  }
  return res;
}

RbResult solve_rb(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw, const PhaseShift& phase,
                  const ScenarioConfig& cfg) {
  return solve_rb(EffectiveGains::compute(ch, phase), fg, pw, PowerLimits::from(cfg));
}

}  // namespace risd2d
