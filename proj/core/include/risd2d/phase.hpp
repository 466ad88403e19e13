/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "risd2d/conic.hpp"
#include "risd2d/power.hpp"
#include "risd2d/ratecalc.hpp"
#include "risd2d/report.hpp"

#include <vector>

namespace risd2d {

/// |h + theta^H r|^2 written as Re Tr(Q V) + |h|^2 with V = tb tb^H,
/// r = conj(g) .* f and tb = [e^{-j theta}; 1].
struct LinkQuadratic {
  Eigen::MatrixXcd Q;
  double h_abs2 = 0.0;

  double eval(const Eigen::MatrixXcd& V) const { return (Q * V).trace().real() + h_abs2; }
};

LinkQuadratic build_link_quadratic(cplx h, const Eigen::VectorXcd& g, const Eigen::VectorXcd& f);
LinkQuadratic build_link_quadratic(const LinkChannel& link);

/// tb = [e^{-j theta_1}, ..., e^{-j theta_M}, 1]^T
Eigen::VectorXcd lift(const PhaseShift& phase);
/// tb tb^H
Eigen::MatrixXcd lifted_matrix(const PhaseShift& phase);

/// Unit eigenvector of the largest eigenvalue of a Hermitian matrix. Within
/// a degenerate top eigenspace the computed eigenvectors are rotated so their
/// first nonzero entry is real and positive, and the one with the
/// lexicographically largest entry magnitudes wins.
Eigen::VectorXcd leading_eigenvector(const Eigen::MatrixXcd& V);

/// ||V0||_2 + Tr(u u^H (V - V0)), the tangent lower bound of the spectral norm.
double spectral_lower(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0);

/// Phase shift from the leading eigenvector of V: divide by the last entry,
/// keep the angles of the first M entries.
PhaseShift extract_phase(const Eigen::MatrixXcd& V);

/// Tr(V) - lambda_max(V)
double penalty_residual(const Eigen::MatrixXcd& V);

/// Re Tr(A V) + c
struct LinearForm {
  Eigen::MatrixXcd A;
  double c = 0.0;
  double eval(const Eigen::MatrixXcd& V) const { return (A * V).trace().real() + c; }
};

/// Lifted view of the phase step for fixed powers and assignment.
class PhaseModel {
 public:
  PhaseModel(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw, const RBAssignment& a,
             const PowerLimits& lim);

  int dim() const { return dim_; }
  int num_rb() const { return static_cast<int>(den_.size()); }

  /// f_k = log2(D2D interference + noise + cellular signal), g_k =
  /// log2(D2D interference + noise), each as a function of V.
  void eval_f_g(const Eigen::MatrixXcd& V, Eigen::VectorXd& f, Eigen::VectorXd& g) const;
  /// Sum over k of f_k - g_k; equals the cellular sum-rate for rank-one V.
  double lifted_rate(const Eigen::MatrixXcd& V) const;

  /// Gradient of g_k at V0 in the sense g_k(V) ~ g_k(V0) + Re Tr(G (V - V0)).
  Eigen::MatrixXcd grad_g(int k, const Eigen::MatrixXcd& V0) const;
  double taylor_upper_g(int k, const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0) const;

  /// sum_k (g_k - f_k) + eta (Tr V - ||V||_2)
  double penalized_objective(const Eigen::MatrixXcd& V, double eta) const;
  /// sum_k (g_hat_k - f_k) + eta (Tr V - V_hat), the convex majorizer at V0.
  double surrogate(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0, double eta) const;

  /// Largest relative QoS shortfall of the lifted constraint over all pairs.
  double qos_violation(const Eigen::MatrixXcd& V) const;

  conic::ConvexProgram build_p10(const Eigen::MatrixXcd& V0, double eta) const;

  const LinearForm& interference_form(int k) const { return den_[k]; }
  const LinearForm& total_form(int k) const { return num_[k]; }

 private:
  int dim_ = 0;
  double gamma0_ = 0.0;
  double n0_ = 0.0;
  std::vector<LinearForm> den_;  // N0 + D2D interference at the BS, per RB
  std::vector<LinearForm> num_;  // den_ + cellular signal, per RB
  std::vector<LinearForm> qos_;  // per pair: signal - gamma0 (interference + N0), over gamma0 N0
  std::vector<LinearForm> qos_den_;  // per pair: interference + N0
};

struct PhaseOptions {
  int t3 = 10;
  int t4 = 5;
  double eta_init = 1.0;
  double eta_gain = 10.0;
  /// Penalty rounds stop once Tr V - ||V||_2 falls below this and the inner loop has settled.
  double residual_tol = 1e-7;
  /// Inner rounds stop once the penalized objective moves less than this.
  double change_tol = 1e-9;
  double qos_tol = 1e-6;
  /// Weight of the identity in the strictly feasible solver hint.
  double start_eps = 1e-3;
  conic::Tolerances solver;

  static PhaseOptions from(const ScenarioConfig& cfg);
};

struct PhaseReport {
  StepStatus status = StepStatus::SolverFailure;
  /// Per penalty round: optimum of the convex surrogate at each inner step.
  std::vector<std::vector<double>> surrogate_trace;
  /// Per penalty round: penalized objective at each inner iterate.
  std::vector<std::vector<double>> penalized_trace;
  std::vector<double> residual_trace;  ///< Tr V - ||V||_2 at the end of each round
  double lifted_rate = 0.0;            ///< sum (f_k - g_k) at the final V
  double achieved_rate = 0.0;          ///< cellular sum-rate at the returned phases
  double final_residual = 0.0;
  bool fallback_used = false;
  int solver_calls = 0;
  int newton_iters = 0;
  double wall_ms = 0.0;
};

struct PhaseResult {
  PhaseShift phase;
  Eigen::MatrixXcd V;
  PhaseReport report;
};

/// Penalized SCA over the lifted matrix starting from V_init (PSD with unit
/// diagonal), followed by rank-one extraction. If the extracted phases break
/// the D2D QoS, the best QoS-feasible extracted iterate is returned instead.
PhaseResult solve_phase(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw,
                        const RBAssignment& a, const PowerLimits& lim, const PhaseOptions& opt,
                        const Eigen::MatrixXcd& V_init);

PhaseResult solve_phase(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw,
                        const RBAssignment& a, const ScenarioConfig& cfg, const Eigen::MatrixXcd& V_init);

}  // namespace risd2d
