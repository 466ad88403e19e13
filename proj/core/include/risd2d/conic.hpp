/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace risd2d::conic {

/// sum_i coef_i x_i + Re Tr(trace * V) + constant, where V is the Hermitian
/// block of the program. `trace` is empty when the expression ignores V.
struct Affine {
  std::vector<std::pair<int, double>> terms;
  Eigen::MatrixXcd trace;
  double constant = 0.0;

  Affine& add(int var, double coef) {
    terms.emplace_back(var, coef);
    return *this;
  }
  Affine& add_const(double c) {
    constant += c;
    return *this;
  }
};

/// Minimization objective:
///   affine + sum q_i x_i^2 - sum w_j ln(arg_j)
struct Objective {
  Affine affine;
  std::vector<std::pair<int, double>> squares;  ///< (var, q), q >= 0
  struct NegLog {
    Affine arg;
    double weight = 1.0;  ///< >= 0
  };
  std::vector<NegLog> neglogs;
};

enum class Sense { GreaterEq, LessEq, Equal };

/// expr (sense) 0
struct LinearConstraint {
  Affine expr;
  Sense sense = Sense::GreaterEq;
  std::string name;
};

/// sum c_i x_i^2 <= rhs, every c_i >= 0.
struct QuadraticConstraint {
  std::vector<std::pair<int, double>> squares;
  Affine rhs;
  std::string name;
};

struct ConvexProgram {
  int num_scalars = 0;
  /// Dimension of the Hermitian PSD block V; 0 when absent.
  int matrix_dim = 0;
  /// Pinned diagonal of V (size matrix_dim), or empty for a free diagonal.
  Eigen::VectorXd fixed_diagonal;

  Objective objective;
  std::vector<LinearConstraint> linear;
  std::vector<QuadraticConstraint> quadratic;

  int add_scalar() { return num_scalars++; }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };
const char* to_string(Status s);

struct Tolerances {
  double feas_tol = 1e-7;
  double gap_tol = 1e-6;
  int max_newton = 400;  ///< total Newton steps over both phases
};

struct Start {
  Eigen::VectorXd x;
  Eigen::MatrixXcd V;
};

struct SolverReport {
  Status status = Status::NumericalFailure;
  Eigen::VectorXd x;
  Eigen::MatrixXcd V;
  double objective = 0.0;
  /// Largest violation over all constraints, including -lambda_min(V).
  double max_violation = 0.0;
  /// Duality-gap bound at return.
  double gap = 0.0;
  /// Phase-I optimum when infeasibility was declared.
  double infeasibility = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;

  bool ok() const { return status == Status::Optimal; }
};

/// Structural convexity violations; empty when the program is acceptable.
std::vector<std::string> check_convexity(const ConvexProgram& p);

/// Barrier interior-point solve. `start` is an optional hint; it need not be
/// feasible. Throws std::invalid_argument when check_convexity fails.
SolverReport solve(const ConvexProgram& p, const Tolerances& tol = {}, const Start* start = nullptr);

/// Objective value of `p` at (x, V). Returns +inf outside the log domain.
double evaluate_objective(const ConvexProgram& p, const Eigen::VectorXd& x, const Eigen::MatrixXcd& V);

/// Largest constraint violation of (x, V) for `p`.
double max_violation(const ConvexProgram& p, const Eigen::VectorXd& x, const Eigen::MatrixXcd& V);

}  // namespace risd2d::conic
