/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/power.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace risd2d {

namespace {

constexpr double kAlphaMin = 1e-9;
constexpr double kAlphaMax = 1e9;
constexpr double kQFloor = 1e-6;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double cub_upper(double x, double y, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cub_upper needs alpha > 0");
  return 0.5 * alpha * x * x + y * y / (2.0 * alpha);
}

PowerLimits PowerLimits::from(const ScenarioConfig& cfg) {
  return {cfg.p0_c_watt(), cfg.p0_d_watt(), cfg.n0_watt(), cfg.gamma0_d()};
}

PowerOptions PowerOptions::from(const ScenarioConfig& cfg) {
  PowerOptions o;
  o.t1 = cfg.t1;
  o.t2 = cfg.t2;
  o.solver.feas_tol = cfg.feas_tol;
  o.solver.gap_tol = cfg.gap_tol;
  return o;
}

double p4_objective(const Eigen::VectorXd& q) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < q.size(); ++k) s += std::log2(1.0 + q(k));
  return s;
}

PowerModel::PowerModel(const EffectiveGains& gains, const FactorGraph& fg, const RBAssignment& a,
                       const PowerLimits& lim, Eigen::VectorXd q_scale)
    : gains_(gains), fg_(fg), a_(a), lim_(lim), q_scale_(std::move(q_scale)),
      num_cu_(gains.num_cu), num_rb_(gains.num_rb), num_d2d_(gains.num_d2d) {
  if (fg.num_users != num_cu_ || fg.num_rb != num_rb_) throw std::invalid_argument("factor graph dimensions");
  if (a.num_pairs() != num_d2d_ || (num_d2d_ > 0 && a.num_rb() != num_rb_))
    throw std::invalid_argument("RB assignment dimensions");
  if (q_scale_.size() != num_rb_) throw std::invalid_argument("q_scale needs one entry per RB");
  pc_index_.assign(static_cast<std::size_t>(num_cu_ * num_rb_), -1);
  int next = 0;
  for (int j = 0; j < num_cu_; ++j)
    for (int k : fg.rbs_of_user[j]) pc_index_[j * num_rb_ + k] = next++;
  first_pd_ = next;
  first_q_ = first_pd_ + num_d2d_;
}

conic::ConvexProgram PowerModel::build(const Eigen::MatrixXd& alpha, bool relaxed) const {
  using namespace conic;
  if (alpha.rows() != num_d2d_ || alpha.cols() != num_rb_) throw std::invalid_argument("alpha must be J_D x K");
  ConvexProgram p;
  p.num_scalars = first_q_ + num_rb_ + (relaxed ? 1 : 0);
  const int z = relaxed ? var_z() : -1;
  // Rows are scaled to unit largest coefficient before z is added, so z
  // measures the same relative slack in every constraint.
  auto relax = [&](Affine& e, const std::vector<std::pair<int, double>>* sq = nullptr) {
    double m = std::abs(e.constant);
    for (const auto& t : e.terms) m = std::max(m, std::abs(t.second));
    if (sq != nullptr)
      for (const auto& t : *sq) m = std::max(m, t.second);
    if (!(m > 0.0)) m = 1.0;
    for (auto& t : e.terms) t.second /= m;
    e.constant /= m;
    if (relaxed) e.add(z, 1.0);
    return m;
  };

  if (relaxed) {
    p.objective.affine.add(z, 1.0);
    p.linear.push_back({Affine().add(z, 1.0), Sense::GreaterEq, "z >= 0"});
  } else {
    // -log2(1 + Qs q) = -log2(Qs) - log2(1/Qs + q)
    for (int k = 0; k < num_rb_; ++k) {
      const double qs = q_scale_(k);
      p.objective.affine.add_const(-std::log2(qs));
      Objective::NegLog nl;
      nl.arg.add(var_q(k), 1.0).add_const(1.0 / qs);
      nl.weight = 1.0 / std::numbers::ln2;
      p.objective.neglogs.push_back(nl);
    }
  }

  for (int j = 0; j < num_cu_; ++j) {
    Affine budget;
    budget.add_const(1.0);
    for (int k : fg_.rbs_of_user[j]) {
      budget.add(var_pc(j, k), -1.0);
      p.linear.push_back({Affine().add(var_pc(j, k), 1.0), Sense::GreaterEq, "pc >= 0"});
    }
    relax(budget);
    p.linear.push_back({budget, Sense::GreaterEq, "user power budget"});
  }
  for (int l = 0; l < num_d2d_; ++l) {
    p.linear.push_back({Affine().add(var_pd(l), 1.0), Sense::GreaterEq, "pd >= 0"});
    Affine cap;
    cap.add(var_pd(l), -1.0).add_const(1.0);
    relax(cap);
    p.linear.push_back({cap, Sense::GreaterEq, "pd <= P0_d"});
  }
  for (int k = 0; k < num_rb_; ++k)
    p.linear.push_back({Affine().add(var_q(k), 1.0), Sense::GreaterEq, "q >= 0"});

  // QoS, divided through by gamma0 * N0.
  if (lim_.gamma0 > 0.0) {
    for (int l = 0; l < num_d2d_; ++l) {
      const int k = a_.rb_of(l);
      if (k < 0) continue;
      Affine qos;
      qos.add(var_pd(l), gains_.dd(l, k) * lim_.p0_d / (lim_.gamma0 * lim_.n0)).add_const(-1.0);
      for (int j : fg_.users_on_rb[k]) qos.add(var_pc(j, k), -gains_.cd[l](j, k) * lim_.p0_c / lim_.n0);
      relax(qos);
      p.linear.push_back({qos, Sense::GreaterEq, "d2d qos"});
    }
  }

  // CUB form of the SINR bound, divided through by N0 * Qs_k.
  for (int k = 0; k < num_rb_; ++k) {
    const double qs = q_scale_(k);
    QuadraticConstraint c;
    c.name = "sinr bound";
    for (int j : fg_.users_on_rb[k]) c.rhs.add(var_pc(j, k), gains_.cb(j, k) * lim_.p0_c / (lim_.n0 * qs));
    c.rhs.add(var_q(k), -1.0);
    double q2 = 0.0;
    for (int l = 0; l < num_d2d_; ++l) {
      if (a_.a(l, k) == 0) continue;
      const double w = gains_.db(l, k) * lim_.p0_d / lim_.n0;
      const double al = alpha(l, k);
      if (!(al > 0.0)) throw std::invalid_argument("alpha must be positive");
      q2 += w * al / 2.0;
      c.squares.emplace_back(var_pd(l), w / (2.0 * al));
    }
    if (q2 > 0.0) c.squares.emplace_back(var_q(k), q2);
    const double m = relax(c.rhs, &c.squares);
    for (auto& t : c.squares) t.second /= m;
    if (c.squares.empty()) {
      p.linear.push_back({c.rhs, Sense::GreaterEq, c.name});
    } else {
      p.quadratic.push_back(std::move(c));
    }
  }
  return p;
}

conic::ConvexProgram PowerModel::build_p4(const Eigen::MatrixXd& alpha) const { return build(alpha, false); }
conic::ConvexProgram PowerModel::build_p5(const Eigen::MatrixXd& alpha) const { return build(alpha, true); }

PowerAllocation PowerModel::powers(const Eigen::VectorXd& x) const {
  PowerAllocation pw;
  pw.cellular = Eigen::MatrixXd::Zero(num_cu_, num_rb_);
  pw.d2d = Eigen::VectorXd::Zero(num_d2d_);
  for (int j = 0; j < num_cu_; ++j) {
    for (int k : fg_.rbs_of_user[j]) pw.cellular(j, k) = lim_.p0_c * std::max(0.0, x(var_pc(j, k)));
    // Interior points can exceed the budget by rounding only.
    const double total = pw.cellular.row(j).sum();
    if (total > lim_.p0_c) pw.cellular.row(j) *= lim_.p0_c / total;
  }
  for (int l = 0; l < num_d2d_; ++l) pw.d2d(l) = lim_.p0_d * std::clamp(x(var_pd(l)), 0.0, 1.0);
  return pw;
}

Eigen::VectorXd PowerModel::q_values(const Eigen::VectorXd& x) const {
  Eigen::VectorXd q(num_rb_);
  for (int k = 0; k < num_rb_; ++k) q(k) = q_scale_(k) * std::max(0.0, x(var_q(k)));
  return q;
}

Eigen::VectorXd PowerModel::pack(const PowerAllocation& pw, const Eigen::VectorXd& q, bool with_z,
                                 double z) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(first_q_ + num_rb_ + (with_z ? 1 : 0));
  for (int j = 0; j < num_cu_; ++j)
    for (int k : fg_.rbs_of_user[j]) x(var_pc(j, k)) = pw.cellular(j, k) / lim_.p0_c;
  for (int l = 0; l < num_d2d_; ++l) x(var_pd(l)) = pw.d2d(l) / lim_.p0_d;
  for (int k = 0; k < num_rb_; ++k) x(var_q(k)) = q(k) / q_scale_(k);
  if (with_z) x(var_z()) = z;
  return x;
}

Eigen::MatrixXd PowerModel::alpha_at(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd al = Eigen::MatrixXd::Ones(num_d2d_, num_rb_);
  for (int l = 0; l < num_d2d_; ++l)
    for (int k = 0; k < num_rb_; ++k)
      al(l, k) = std::clamp(std::max(0.0, x(var_pd(l))) / std::max(x(var_q(k)), kQFloor), kAlphaMin, kAlphaMax);
  return al;
}

bool power_feasible(const EffectiveGains& gains, const FactorGraph& fg, const RBAssignment& a,
                    const PowerLimits& lim, const PowerAllocation& pw, double abs_tol, double qos_tol) {
  if (pw.cellular.rows() != gains.num_cu || pw.cellular.cols() != gains.num_rb) return false;
  if (pw.d2d.size() != gains.num_d2d) return false;
  if ((pw.cellular.array() < -abs_tol).any() || (pw.d2d.array() < -abs_tol).any()) return false;
  for (int j = 0; j < gains.num_cu; ++j) {
    if (pw.user_total(j) > lim.p0_c + abs_tol) return false;
    for (int k = 0; k < gains.num_rb; ++k)
      if (!fg.occupies(j, k) && pw.cellular(j, k) != 0.0) return false;
  }
  if ((pw.d2d.array() > lim.p0_d + abs_tol).any()) return false;
  return qos_violation(gains, fg, pw, a, lim.n0, lim.gamma0) <= qos_tol;
}

PowerResult solve_power(const EffectiveGains& gains, const FactorGraph& fg, const RBAssignment& a,
                        const PowerLimits& lim, const PowerOptions& opt, Rng& rng, const PowerAllocation* warm) {
  const auto t0 = std::chrono::steady_clock::now();
  PowerResult res;
  PowerReport& rep = res.report;

  const bool warm_ok = warm != nullptr && power_feasible(gains, fg, a, lim, *warm);
  PowerAllocation start;
  if (warm != nullptr) {
    start = *warm;
  } else {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    start.cellular = Eigen::MatrixXd::Zero(gains.num_cu, gains.num_rb);
    for (int j = 0; j < gains.num_cu; ++j)
      for (int k : fg.rbs_of_user[j]) start.cellular(j, k) = lim.p0_c * u(rng);
    start.d2d.resize(gains.num_d2d);
    for (int l = 0; l < gains.num_d2d; ++l) start.d2d(l) = lim.p0_d * u(rng);
  }
  Eigen::VectorXd gamma(gains.num_rb), q_scale(gains.num_rb);
  for (int k = 0; k < gains.num_rb; ++k) {
    gamma(k) = gamma_k(k, gains, fg, start, a, lim.n0);
    q_scale(k) = std::max(1.0, gamma(k));
  }
  const PowerModel model(gains, fg, a, lim, q_scale);
  Eigen::VectorXd x = model.pack(start, gamma, false);

  auto run = [&](const conic::ConvexProgram& prog, const Eigen::VectorXd& hint) {
    conic::Start st{hint, {}};
    auto r = conic::solve(prog, opt.solver, &st);
    ++rep.solver_calls;
    rep.newton_iters += r.iterations;
    return r;
  };

  if (!warm_ok) {
    double z = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opt.t1; ++it) {
      const auto prog = model.build_p5(model.alpha_at(x));
      // z above the worst violation makes the hint strictly feasible.
      Eigen::VectorXd hint(x.size() + 1);
      hint << x, 0.0;
      const double viol = conic::max_violation(prog, hint, {});
      hint(model.var_z()) = viol + std::max(1e-3, 0.1 * viol);
      auto r = run(prog, hint);
      if (!r.ok()) {
        rep.status = StepStatus::SolverFailure;
        rep.wall_ms = elapsed_ms(t0);
        return res;
      }
      const double zn = r.x(model.var_z());
      rep.z_trace.push_back(zn);
      x = r.x.head(x.size());
      const bool stalled = std::abs(z - zn) < opt.change_tol;
      z = zn;
      if (z <= opt.z_tol || stalled) break;
    }
    if (!(z <= opt.z_tol)) {
      rep.status = StepStatus::Infeasible;
      rep.wall_ms = elapsed_ms(t0);
      return res;
    }
  } else {
    rep.warm_started = true;
  }

  bool have = warm_ok;
  bool cub_empty = false;
  double prev = warm_ok ? p4_objective(gamma) : -std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.t2; ++it) {
    auto r = run(model.build_p4(model.alpha_at(x)), x);
    if (!r.ok()) {
      cub_empty = r.status == conic::Status::Infeasible;
      break;
    }
    x = r.x;
    have = true;
    const double obj = p4_objective(model.q_values(x));
    rep.objective_trace.push_back(obj);
    if (std::abs(obj - prev) < opt.change_tol) break;
    prev = obj;
  }
  if (!have) {
    // z <= z_tol can still leave the CUB set empty when a row's constant is
    // far below its largest coefficient.
    rep.status = cub_empty ? StepStatus::Infeasible : StepStatus::SolverFailure;
    rep.wall_ms = elapsed_ms(t0);
    return res;
  }
  res.pw = rep.objective_trace.empty() ? *warm : model.powers(x);
  rep.status = StepStatus::Ok;
  rep.wall_ms = elapsed_ms(t0);
  return res;
}

PowerResult solve_power(const ChannelSet& ch, const FactorGraph& fg, const RBAssignment& a, const PhaseShift& phase,
                        const ScenarioConfig& cfg, Rng& rng, const PowerAllocation* warm) {
  return solve_power(EffectiveGains::compute(ch, phase), fg, a, PowerLimits::from(cfg), PowerOptions::from(cfg), rng,
                     warm);
}

}  // namespace risd2d
