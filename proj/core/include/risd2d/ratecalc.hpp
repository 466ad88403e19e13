/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "risd2d/scenario.hpp"

#include <Eigen/Dense>

#include <vector>

namespace risd2d {

/// RIS phase angles, each in (0, 2*pi].
struct PhaseShift {
  Eigen::VectorXd theta;

  PhaseShift() = default;
  explicit PhaseShift(Eigen::VectorXd angles);

  int size() const { return static_cast<int>(theta.size()); }
  /// Diagonal of Theta, e^{j theta_m}.
  Eigen::VectorXcd reflection() const;

  /// Uniform on (0, 2*pi] per element.
  static PhaseShift random(int m, Rng& rng);
};

/// Maps any real angle into (0, 2*pi].
double wrap_phase(double angle);

/// Transmit powers in watts. `cellular(j, k)` is zero whenever user j does not
/// occupy RB k.
struct PowerAllocation {
  Eigen::MatrixXd cellular;  ///< J x K
  Eigen::VectorXd d2d;       ///< J_D

  double user_total(int j) const { return cellular.row(j).sum(); }
};

/// Binary J_D x K assignment of D2D pairs to RBs.
struct RBAssignment {
  Eigen::MatrixXi a;

  RBAssignment() = default;
  explicit RBAssignment(Eigen::MatrixXi matrix) : a(std::move(matrix)) {}
  /// Pair l on rbs[l].
  static RBAssignment from_rbs(const std::vector<int>& rbs, int num_rb);

  int num_pairs() const { return static_cast<int>(a.rows()); }
  int num_rb() const { return static_cast<int>(a.cols()); }
  /// RB used by pair l, or -1 when the row is empty.
  int rb_of(int l) const;
  /// Pair occupying RB k, or -1.
  int pair_on(int k) const;
  /// Every row sums to one and every column to at most one.
  bool valid() const;
  bool operator==(const RBAssignment& other) const { return a == other.a; }
};

/// h + g^H diag(e^{j theta}) f. Throws std::invalid_argument on length mismatch.
cplx effective_channel(cplx h, const Eigen::VectorXcd& g, const Eigen::VectorXcd& f,
                       const PhaseShift& phase);
cplx effective_channel(const LinkChannel& link, const PhaseShift& phase);

/// |effective channel|^2 of every link for one phase configuration.
struct EffectiveGains {
  int num_cu = 0, num_rb = 0, num_d2d = 0;
  Eigen::MatrixXd cb;               ///< J x K
  Eigen::MatrixXd db;               ///< J_D x K
  Eigen::MatrixXd dd;               ///< J_D x K
  std::vector<Eigen::MatrixXd> cd;  ///< per pair l: J x K, CU_j -> DR_l

  static EffectiveGains compute(const ChannelSet& ch, const PhaseShift& phase);
};

/// Everything a rate evaluation needs besides the decision variables.
struct RateContext {
  const ChannelSet& channels;
  const FactorGraph& graph;
  double n0;
};

/// Per-RB aggregate SINR: cellular power received on RB k over D2D
/// interference plus noise.
double gamma_k(int k, const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
               const RBAssignment& a, double n0);
double gamma_k(int k, const RateContext& ctx, const PowerAllocation& pw, const RBAssignment& a,
               const PhaseShift& phase);

/// Cellular sum-rate in bit/s/Hz: sum_k log2(1 + gamma_k).
double cellular_sum_rate(const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                         const RBAssignment& a, double n0);
double cellular_sum_rate(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw,
                         const RBAssignment& a, const PhaseShift& phase, double n0);

/// SINR of user j on RB k. Throws std::invalid_argument if j does not occupy k.
double cellular_sinr(int j, int k, const EffectiveGains& gains, const FactorGraph& fg,
                     const PowerAllocation& pw, const RBAssignment& a, double n0);
double cellular_sinr(int j, int k, const RateContext& ctx, const PowerAllocation& pw,
                     const RBAssignment& a, const PhaseShift& phase);

/// SINR at DR_l summed over the RBs selected by row l of the assignment.
double d2d_sinr(int l, const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                const RBAssignment& a, double n0);
double d2d_sinr(int l, const RateContext& ctx, const PowerAllocation& pw, const RBAssignment& a,
                const PhaseShift& phase);

/// SINR at DR_l when pair l sits on RB `rb` alone.
double d2d_sinr_on(int l, int rb, const EffectiveGains& gains, const FactorGraph& fg,
                   const PowerAllocation& pw, double n0);

/// Largest relative shortfall of the D2D QoS over all pairs,
/// max_l max(0, (gamma0 - sinr_l) / gamma0); zero when gamma0 == 0.
double qos_violation(const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                     const RBAssignment& a, double n0, double gamma0);

}  // namespace risd2d
