/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "risd2d/conic.hpp"
#include "risd2d/ratecalc.hpp"
#include "risd2d/report.hpp"

#include <vector>

namespace risd2d {

/// (alpha/2) x^2 + y^2 / (2 alpha), an upper bound of x*y that is tight at
/// alpha = y/x. Throws std::invalid_argument for alpha <= 0.
double cub_upper(double x, double y, double alpha);

struct PowerLimits {
  double p0_c = 1.0;  ///< W
  double p0_d = 1.0;  ///< W
  double n0 = 1.0;    ///< W
  double gamma0 = 0.0;

  static PowerLimits from(const ScenarioConfig& cfg);
};

/// Convex models of the power step for fixed A and Theta.
///
/// Variables are normalized: p_c = P0_c * pc_hat, p_d = P0_d * pd_hat and
/// Q_k = q_scale_k * q_k. The CUB parameters `alpha` act on the normalized
/// product pd_hat * q_k; this is the same bound as alpha' = p_d / Q_k on the
/// physical variables.
class PowerModel {
 public:
  PowerModel(const EffectiveGains& gains, const FactorGraph& fg, const RBAssignment& a, const PowerLimits& lim,
             Eigen::VectorXd q_scale);

  /// Maximize sum log2(1 + Q_k) under QoS, power limits and the CUB form of
  /// the per-RB SINR bound.
  conic::ConvexProgram build_p4(const Eigen::MatrixXd& alpha) const;
  /// Minimize z with every constraint of build_p4 relaxed by z >= 0.
  conic::ConvexProgram build_p5(const Eigen::MatrixXd& alpha) const;

  int var_pc(int j, int k) const { return pc_index_[j * num_rb_ + k]; }
  int var_pd(int l) const { return first_pd_ + l; }
  int var_q(int k) const { return first_q_ + k; }
  /// Index of z in build_p5 programs.
  int var_z() const { return first_q_ + num_rb_; }

  PowerAllocation powers(const Eigen::VectorXd& x) const;
  /// Physical Q_k from a solver vector.
  Eigen::VectorXd q_values(const Eigen::VectorXd& x) const;
  /// Solver vector for physical powers and Q (z appended when `with_z`).
  Eigen::VectorXd pack(const PowerAllocation& pw, const Eigen::VectorXd& q, bool with_z, double z = 0.0) const;
  /// alpha = pd_hat / q_k clamped to [1e-9, 1e9], J_D x K.
  Eigen::MatrixXd alpha_at(const Eigen::VectorXd& x) const;

  const Eigen::VectorXd& q_scale() const { return q_scale_; }

 private:
  conic::ConvexProgram build(const Eigen::MatrixXd& alpha, bool relaxed) const;

  const EffectiveGains& gains_;
  const FactorGraph& fg_;
  const RBAssignment& a_;
  PowerLimits lim_;
  Eigen::VectorXd q_scale_;
  int num_cu_, num_rb_, num_d2d_;
  std::vector<int> pc_index_;
  int first_pd_ = 0, first_q_ = 0;
};

/// sum_k log2(1 + Q_k)
double p4_objective(const Eigen::VectorXd& q);

struct PowerOptions {
  int t1 = 10;
  int t2 = 10;
  double z_tol = 1e-6;
  double change_tol = 1e-6;
  conic::Tolerances solver;

  static PowerOptions from(const ScenarioConfig& cfg);
};

struct PowerReport {
  StepStatus status = StepStatus::SolverFailure;
  std::vector<double> z_trace;          ///< P5 optimum per iteration
  std::vector<double> objective_trace;  ///< P4 optimum per iteration, bit/s/Hz
  bool warm_started = false;
  int solver_calls = 0;
  int newton_iters = 0;
  double wall_ms = 0.0;
};

struct PowerResult {
  PowerAllocation pw;
  PowerReport report;
};

/// Alternating CUB power optimization. With `warm` set and feasible, P5 is
/// skipped and P4 starts from `warm`, so the returned sum-rate is never below
/// the rate at `warm`. Otherwise P5 runs from a random start drawn from `rng`.
PowerResult solve_power(const EffectiveGains& gains, const FactorGraph& fg, const RBAssignment& a,
                        const PowerLimits& lim, const PowerOptions& opt, Rng& rng,
                        const PowerAllocation* warm = nullptr);

PowerResult solve_power(const ChannelSet& ch, const FactorGraph& fg, const RBAssignment& a,
                        const PhaseShift& phase, const ScenarioConfig& cfg, Rng& rng,
                        const PowerAllocation* warm = nullptr);

/// True when `pw` meets C1, C4 and C5: powers within [0, P0] up to
/// `abs_tol` watts and QoS violation at most `qos_tol` relative.
bool power_feasible(const EffectiveGains& gains, const FactorGraph& fg, const RBAssignment& a,
                    const PowerLimits& lim, const PowerAllocation& pw, double abs_tol = 1e-7,
                    double qos_tol = 1e-6);

}  // namespace risd2d
