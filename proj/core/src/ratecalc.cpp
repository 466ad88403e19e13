/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/ratecalc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace risd2d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dims(const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                const RBAssignment& a) {
  if (fg.num_users != gains.num_cu || fg.num_rb != gains.num_rb)
    throw std::invalid_argument("factor graph does not match channel dimensions");
  if (pw.cellular.rows() != gains.num_cu || pw.cellular.cols() != gains.num_rb)
    throw std::invalid_argument("cellular power matrix must be J x K");
  if (pw.d2d.size() != gains.num_d2d) throw std::invalid_argument("d2d power vector must have J_D entries");
  if (a.num_pairs() != gains.num_d2d || (gains.num_d2d > 0 && a.num_rb() != gains.num_rb))
    throw std::invalid_argument("RB assignment must be J_D x K");
}

double d2d_interference(int k, const EffectiveGains& gains, const PowerAllocation& pw, const RBAssignment& a) {
  double s = 0.0;
  for (int l = 0; l < gains.num_d2d; ++l)
    if (a.a(l, k) != 0) s += gains.db(l, k) * pw.d2d(l);
  return s;
}

}  // namespace

PhaseShift::PhaseShift(Eigen::VectorXd angles) : theta(std::move(angles)) {
  for (auto& t : theta) t = wrap_phase(t);
}

Eigen::VectorXcd PhaseShift::reflection() const {
  Eigen::VectorXcd d(theta.size());
  for (Eigen::Index m = 0; m < theta.size(); ++m) d(m) = std::polar(1.0, theta(m));
  return d;
}

PhaseShift PhaseShift::random(int m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  Eigen::VectorXd t(m);
  for (int i = 0; i < m; ++i) t(i) = u(rng);
  return PhaseShift(std::move(t));
}

double wrap_phase(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r <= 0.0) r += kTwoPi;
  return r;
}

RBAssignment RBAssignment::from_rbs(const std::vector<int>& rbs, int num_rb) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(rbs.size()), num_rb);
  for (std::size_t l = 0; l < rbs.size(); ++l) {
    if (rbs[l] < 0 || rbs[l] >= num_rb) throw std::invalid_argument("RB index out of range");
    m(static_cast<Eigen::Index>(l), rbs[l]) = 1;
  }
  return RBAssignment(std::move(m));
}

int RBAssignment::rb_of(int l) const {
  for (int k = 0; k < num_rb(); ++k)
    if (a(l, k) != 0) return k;
  return -1;
}

int RBAssignment::pair_on(int k) const {
  for (int l = 0; l < num_pairs(); ++l)
    if (a(l, k) != 0) return l;
  return -1;
}

bool RBAssignment::valid() const {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != 0 && a(i) != 1) return false;
  for (int l = 0; l < num_pairs(); ++l)
    if (a.row(l).sum() != 1) return false;
  for (int k = 0; k < num_rb(); ++k)
    if (a.col(k).sum() > 1) return false;
  return true;
}

cplx effective_channel(cplx h, const Eigen::VectorXcd& g, const Eigen::VectorXcd& f, const PhaseShift& phase) {
  if (g.size() != phase.size() || f.size() != phase.size())
    throw std::invalid_argument("channel vectors and phase shift lengths differ");
  cplx s = h;
  for (int m = 0; m < phase.size(); ++m) s += std::conj(g(m)) * std::polar(1.0, phase.theta(m)) * f(m);
  return s;
}

cplx effective_channel(const LinkChannel& link, const PhaseShift& phase) {
  return effective_channel(link.h, link.g, link.f, phase);
}

EffectiveGains EffectiveGains::compute(const ChannelSet& ch, const PhaseShift& phase) {
  EffectiveGains e;
  e.num_cu = ch.num_cu;
  e.num_rb = ch.num_rb;
  e.num_d2d = ch.num_d2d;
  e.cb.resize(ch.num_cu, ch.num_rb);
  e.db.resize(ch.num_d2d, ch.num_rb);
  e.dd.resize(ch.num_d2d, ch.num_rb);
  e.cd.assign(ch.num_d2d, Eigen::MatrixXd(ch.num_cu, ch.num_rb));
  for (int k = 0; k < ch.num_rb; ++k) {
    for (int j = 0; j < ch.num_cu; ++j) e.cb(j, k) = std::norm(effective_channel(ch.cell_bs(j, k), phase));
    for (int l = 0; l < ch.num_d2d; ++l) {
      e.db(l, k) = std::norm(effective_channel(ch.d2d_bs(l, k), phase));
      e.dd(l, k) = std::norm(effective_channel(ch.d2d_d2d(l, k), phase));
      for (int j = 0; j < ch.num_cu; ++j) e.cd[l](j, k) = std::norm(effective_channel(ch.cell_dr(j, l, k), phase));
    }
  }
  return e;
}

double gamma_k(int k, const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
               const RBAssignment& a, double n0) {
  check_dims(gains, fg, pw, a);
  double num = 0.0;
  for (int j : fg.users_on_rb.at(k)) num += gains.cb(j, k) * pw.cellular(j, k);
  return num / (d2d_interference(k, gains, pw, a) + n0);
}

double gamma_k(int k, const RateContext& ctx, const PowerAllocation& pw, const RBAssignment& a,
               const PhaseShift& phase) {
  return gamma_k(k, EffectiveGains::compute(ctx.channels, phase), ctx.graph, pw, a, ctx.n0);
}

double cellular_sum_rate(const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                         const RBAssignment& a, double n0) {
  double r = 0.0;
  for (int k = 0; k < gains.num_rb; ++k) r += std::log2(1.0 + gamma_k(k, gains, fg, pw, a, n0));
  return r;
}

double cellular_sum_rate(const ChannelSet& ch, const FactorGraph& fg, const PowerAllocation& pw,
                         const RBAssignment& a, const PhaseShift& phase, double n0) {
  return cellular_sum_rate(EffectiveGains::compute(ch, phase), fg, pw, a, n0);
}

double cellular_sinr(int j, int k, const EffectiveGains& gains, const FactorGraph& fg,
                     const PowerAllocation& pw, const RBAssignment& a, double n0) {
  check_dims(gains, fg, pw, a);
  if (!fg.occupies(j, k))
    throw std::invalid_argument("user " + std::to_string(j) + " does not occupy RB " + std::to_string(k));
  return gains.cb(j, k) * pw.cellular(j, k) / (d2d_interference(k, gains, pw, a) + n0);
}

double cellular_sinr(int j, int k, const RateContext& ctx, const PowerAllocation& pw, const RBAssignment& a,
                     const PhaseShift& phase) {
  return cellular_sinr(j, k, EffectiveGains::compute(ctx.channels, phase), ctx.graph, pw, a, ctx.n0);
}

double d2d_sinr(int l, const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                const RBAssignment& a, double n0) {
  check_dims(gains, fg, pw, a);
  double sig = 0.0, intf = 0.0;
  for (int k = 0; k < gains.num_rb; ++k) {
    if (a.a(l, k) == 0) continue;
    sig += gains.dd(l, k) * pw.d2d(l);
    for (int j : fg.users_on_rb[k]) intf += gains.cd[l](j, k) * pw.cellular(j, k);
  }
  return sig / (intf + n0);
}

double d2d_sinr(int l, const RateContext& ctx, const PowerAllocation& pw, const RBAssignment& a,
                const PhaseShift& phase) {
  return d2d_sinr(l, EffectiveGains::compute(ctx.channels, phase), ctx.graph, pw, a, ctx.n0);
}

double d2d_sinr_on(int l, int rb, const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                   double n0) {
  double intf = 0.0;
  for (int j : fg.users_on_rb.at(rb)) intf += gains.cd[l](j, rb) * pw.cellular(j, rb);
  return gains.dd(l, rb) * pw.d2d(l) / (intf + n0);
}

double qos_violation(const EffectiveGains& gains, const FactorGraph& fg, const PowerAllocation& pw,
                     const RBAssignment& a, double n0, double gamma0) {
  if (gamma0 <= 0.0) return 0.0;
  double worst = 0.0;
  for (int l = 0; l < gains.num_d2d; ++l)
    worst = std::max(worst, (gamma0 - d2d_sinr(l, gains, fg, pw, a, n0)) / gamma0);
  return worst;
}

}  // namespace risd2d
