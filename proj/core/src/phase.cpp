/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/phase.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace risd2d {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& V) { return 0.5 * (V + V.adjoint()); }

double lambda_max(const Eigen::MatrixXcd& V) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(V), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

// Rotate so the first entry with nonnegligible magnitude is real positive.
Eigen::VectorXcd phase_normalize(const Eigen::VectorXcd& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double m = std::abs(u(i));
    if (m > 1e-12) return u * (std::conj(u(i)) / m);
  }
  return u;
}

bool lex_greater(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i)), b = std::abs(y(i));
    if (a > b + 1e-12) return true;
    if (b > a + 1e-12) return false;
  }
  return false;
}

void add_link(LinearForm& form, const LinkQuadratic& q, double weight) {
  form.A += weight * q.Q;
  form.c += weight * q.h_abs2;
}

}  // namespace

LinkQuadratic build_link_quadratic(cplx h, const Eigen::VectorXcd& g, const Eigen::VectorXcd& f) {
  if (g.size() != f.size()) throw std::invalid_argument("RIS vectors differ in length");
  const Eigen::Index m = g.size();
  const Eigen::VectorXcd r = g.conjugate().cwiseProduct(f);
  LinkQuadratic q;
  q.Q = Eigen::MatrixXcd::Zero(m + 1, m + 1);
  q.Q.topLeftCorner(m, m) = r * r.adjoint();
  q.Q.topRightCorner(m, 1) = std::conj(h) * r;
  q.Q.bottomLeftCorner(1, m) = h * r.adjoint();
  q.h_abs2 = std::norm(h);
  return q;
}

LinkQuadratic build_link_quadratic(const LinkChannel& link) { return build_link_quadratic(link.h, link.g, link.f); }

Eigen::VectorXcd lift(const PhaseShift& phase) {
  const int m = phase.size();
  Eigen::VectorXcd tb(m + 1);
  tb.head(m) = phase.reflection().conjugate();
  tb(m) = 1.0;
  return tb;
}

Eigen::MatrixXcd lifted_matrix(const PhaseShift& phase) {
  const Eigen::VectorXcd tb = lift(phase);
  return tb * tb.adjoint();
}

Eigen::VectorXcd leading_eigenvector(const Eigen::MatrixXcd& V) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(V));
  const Eigen::Index n = V.rows();
  const double top = es.eigenvalues()(n - 1);
  const double tol = 1e-10 * std::max(1.0, std::abs(top));
  Eigen::VectorXcd best = phase_normalize(es.eigenvectors().col(n - 1));
  for (Eigen::Index i = n - 2; i >= 0 && es.eigenvalues()(i) >= top - tol; --i) {
    const Eigen::VectorXcd c = phase_normalize(es.eigenvectors().col(i));
    if (lex_greater(c, best)) best = c;
  }
  return best;
}

double spectral_lower(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0) {
  const Eigen::VectorXcd u = leading_eigenvector(V0);
  return lambda_max(V0) + (u.adjoint() * (V - V0) * u)(0, 0).real();
}

PhaseShift extract_phase(const Eigen::MatrixXcd& V) {
  const Eigen::Index m = V.rows() - 1;
  if (m < 0) throw std::invalid_argument("empty lifted matrix");
  Eigen::VectorXcd u = leading_eigenvector(V);
  if (std::abs(u(m)) > 1e-14) u /= u(m);
  Eigen::VectorXd theta(m);
  // tb_m = e^{-j theta_m}
  for (Eigen::Index i = 0; i < m; ++i) theta(i) = -std::arg(u(i));
  return PhaseShift(theta);
}

double penalty_residual(const Eigen::MatrixXcd& V) { return V.trace().real() - lambda_max(V); }

PhaseModel::PhaseModel(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw, const RBAssignment& a,
                       const PowerLimits& lim)
    : dim_(ch.num_ris + 1), gamma0_(lim.gamma0), n0_(lim.n0) {
  if (fg.num_users != ch.num_cu || fg.num_rb != ch.num_rb) throw std::invalid_argument("factor graph dimensions");
  if (a.num_pairs() != ch.num_d2d || (ch.num_d2d > 0 && a.num_rb() != ch.num_rb))
    throw std::invalid_argument("RB assignment dimensions");
  if (pw.cellular.rows() != ch.num_cu || pw.cellular.cols() != ch.num_rb || pw.d2d.size() != ch.num_d2d)
    throw std::invalid_argument("power allocation dimensions");

  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(dim_, dim_);
  den_.assign(ch.num_rb, LinearForm{zero, lim.n0});
  for (int k = 0; k < ch.num_rb; ++k) {
    const int l = ch.num_d2d > 0 ? a.pair_on(k) : -1;
    if (l >= 0) add_link(den_[k], build_link_quadratic(ch.d2d_bs(l, k)), pw.d2d(l));
  }
  num_ = den_;
  for (int k = 0; k < ch.num_rb; ++k)
    for (int j : fg.users_on_rb[k]) add_link(num_[k], build_link_quadratic(ch.cell_bs(j, k)), pw.cellular(j, k));

  if (gamma0_ > 0.0) {
    const double s = 1.0 / (gamma0_ * lim.n0);
    for (int l = 0; l < ch.num_d2d; ++l) {
      const int k = a.rb_of(l);
      LinearForm q{zero, -1.0};
      LinearForm in{zero, lim.n0};
      add_link(q, build_link_quadratic(ch.d2d_d2d(l, k)), pw.d2d(l) * s);
      for (int j : fg.users_on_rb[k]) {
        const LinkQuadratic cd = build_link_quadratic(ch.cell_dr(j, l, k));
        add_link(q, cd, -gamma0_ * pw.cellular(j, k) * s);
        add_link(in, cd, pw.cellular(j, k));
      }
      qos_.push_back(std::move(q));
      qos_den_.push_back(std::move(in));
    }
  }
}

void PhaseModel::eval_f_g(const Eigen::MatrixXcd& V, Eigen::VectorXd& f, Eigen::VectorXd& g) const {
  f.resize(num_rb());
  g.resize(num_rb());
  for (int k = 0; k < num_rb(); ++k) {
    f(k) = std::log2(num_[k].eval(V));
    g(k) = std::log2(den_[k].eval(V));
  }
}

double PhaseModel::lifted_rate(const Eigen::MatrixXcd& V) const {
  Eigen::VectorXd f, g;
  eval_f_g(V, f, g);
  return (f - g).sum();
}

Eigen::MatrixXcd PhaseModel::grad_g(int k, const Eigen::MatrixXcd& V0) const {
  return den_[k].A * (kInvLn2 / den_[k].eval(V0));
}

double PhaseModel::taylor_upper_g(int k, const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0) const {
  return std::log2(den_[k].eval(V0)) + (grad_g(k, V0) * (V - V0)).trace().real();
}

double PhaseModel::penalized_objective(const Eigen::MatrixXcd& V, double eta) const {
  return -lifted_rate(V) + eta * penalty_residual(V);
}

double PhaseModel::surrogate(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& V0, double eta) const {
  double s = 0.0;
  for (int k = 0; k < num_rb(); ++k) s += taylor_upper_g(k, V, V0) - std::log2(num_[k].eval(V));
  return s + eta * (V.trace().real() - spectral_lower(V, V0));
}

double PhaseModel::qos_violation(const Eigen::MatrixXcd& V) const {
  double worst = 0.0;
  for (std::size_t l = 0; l < qos_.size(); ++l) {
    // (gamma0 - SINR) / gamma0 = -q N0 / (I + N0)
    const double v = qos_[l].eval(V);
    if (v < 0.0) worst = std::max(worst, -v * n0_ / qos_den_[l].eval(V));
  }
  return worst;
}

conic::ConvexProgram PhaseModel::build_p10(const Eigen::MatrixXcd& V0, double eta) const {
  if (V0.rows() != dim_ || V0.cols() != dim_) throw std::invalid_argument("V0 has the wrong size");
  conic::ConvexProgram p;
  p.matrix_dim = dim_;
  p.fixed_diagonal = Eigen::VectorXd::Ones(dim_);

  const Eigen::VectorXcd u = leading_eigenvector(V0);
  Eigen::MatrixXcd lin = eta * (Eigen::MatrixXcd::Identity(dim_, dim_) - u * u.adjoint());
  double constant = 0.0;
  for (int k = 0; k < num_rb(); ++k) {
    const Eigen::MatrixXcd G = grad_g(k, V0);
    lin += G;
    constant += std::log2(den_[k].eval(V0)) - (G * V0).trace().real();

    // -log2(num_k(V)) = -log2(S) - log2(num_k(V) / S) keeps the argument near 1.
    const double S = num_[k].eval(V0);
    constant -= std::log2(S);
    conic::Objective::NegLog nl;
    nl.arg.trace = num_[k].A / S;
    nl.arg.constant = num_[k].c / S;
    nl.weight = kInvLn2;
    p.objective.neglogs.push_back(std::move(nl));
  }
  p.objective.affine.trace = hermitize(lin);
  p.objective.affine.constant = constant;

  for (std::size_t l = 0; l < qos_.size(); ++l) {
    conic::LinearConstraint c;
    c.expr.trace = qos_[l].A;
    c.expr.constant = qos_[l].c;
    c.sense = conic::Sense::GreaterEq;
    c.name = "qos" + std::to_string(l);
    p.linear.push_back(std::move(c));
  }
  return p;
}

PhaseOptions PhaseOptions::from(const ScenarioConfig& cfg) {
  PhaseOptions o;
  o.t3 = cfg.t3;
  o.t4 = cfg.t4;
  o.eta_init = cfg.eta_init;
  o.eta_gain = cfg.eta_gain;
  o.solver.feas_tol = cfg.feas_tol;
  o.solver.gap_tol = cfg.gap_tol;
  return o;
}

PhaseResult solve_phase(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw,
                        const RBAssignment& a, const PowerLimits& lim, const PhaseOptions& opt,
                        const Eigen::MatrixXcd& V_init) {
  const auto t_start = std::chrono::steady_clock::now();
  const PhaseModel model(ch, fg, pw, a, lim);
  const int d = model.dim();
  if (V_init.rows() != d || V_init.cols() != d) throw std::invalid_argument("V_init has the wrong size");

  PhaseResult res;
  PhaseReport& rep = res.report;

  // QoS-feasible extracted iterate with the best cellular rate.
  bool have_best = false;
  PhaseShift best;
  double best_rate = 0.0;
  auto assess = [&](const PhaseShift& th, double& rate) {
    const EffectiveGains gains = EffectiveGains::compute(ch, th);
    rate = cellular_sum_rate(gains, fg, pw, a, lim.n0);
    return qos_violation(gains, fg, pw, a, lim.n0, lim.gamma0) <= opt.qos_tol;
  };
  auto consider = [&](const PhaseShift& th) {
    double rate = 0.0;
    if (assess(th, rate) && (!have_best || rate > best_rate)) {
      have_best = true;
      best = th;
      best_rate = rate;
    }
  };

  Eigen::MatrixXcd V = hermitize(V_init);
  consider(extract_phase(V));
  bool solved = false;
  bool failed = false;
  bool infeasible = false;
  double eta = opt.eta_init;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);

  for (int round = 0; round < opt.t3 && !failed; ++round) {
    std::vector<double> surr, pen;
    double prev = model.penalized_objective(V, eta);
    bool settled = false;
    for (int it = 0; it < opt.t4; ++it) {
      const conic::ConvexProgram prog = model.build_p10(V, eta);
      conic::Start start;
      start.V = (1.0 - opt.start_eps) * V + opt.start_eps * I;
      const conic::SolverReport sr = conic::solve(prog, opt.solver, &start);
      ++rep.solver_calls;
      rep.newton_iters += sr.iterations;
      if (!sr.ok()) {
        infeasible = sr.status == conic::Status::Infeasible;
        failed = true;
        break;
      }
      solved = true;
      V = hermitize(sr.V);
      surr.push_back(sr.objective);
      const double cur = model.penalized_objective(V, eta);
      pen.push_back(cur);
      consider(extract_phase(V));
      settled = std::abs(prev - cur) <= opt.change_tol * std::max(1.0, std::abs(cur));
      prev = cur;
      if (settled) break;
    }
    if (!surr.empty()) {
      rep.surrogate_trace.push_back(std::move(surr));
      rep.penalized_trace.push_back(std::move(pen));
      rep.residual_trace.push_back(penalty_residual(V));
    }
    // a rank-one V can still be mid-way through its SCA descent
    if (settled && penalty_residual(V) < opt.residual_tol) break;
    // A larger eta only serves the rank; once V is rank-one it just slows the SCA down.
    if (penalty_residual(V) >= opt.residual_tol) eta *= opt.eta_gain;
  }

  res.V = V;
  rep.lifted_rate = model.lifted_rate(V);
  rep.final_residual = penalty_residual(V);
  res.phase = extract_phase(V);

  if (!solved) {
    rep.status = infeasible ? StepStatus::Infeasible : StepStatus::SolverFailure;
  } else {
    double rate = 0.0;
    if (assess(res.phase, rate)) {
      rep.status = StepStatus::Ok;
      rep.achieved_rate = rate;
    } else if (have_best) {
      rep.status = StepStatus::Ok;
      rep.fallback_used = true;
      res.phase = best;
      rep.achieved_rate = best_rate;
    } else {
      rep.status = StepStatus::ExtractionInfeasible;
      rep.achieved_rate = rate;
    }
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

PhaseResult solve_phase(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw,
                        const RBAssignment& a, const ScenarioConfig& cfg, const Eigen::MatrixXcd& V_init) {
  return solve_phase(ch, fg, pw, a, PowerLimits::from(cfg), PhaseOptions::from(cfg), V_init);
}

}  // namespace risd2d
