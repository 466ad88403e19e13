/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/conic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace risd2d::conic {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Real parameterization of (x, V): y = [x; diag params; Re/Im off-diagonals].

struct Layout {
  int n = 0;  // scalars
  int d = 0;
  bool free_diag = false;
  MatrixXcd vc;                // constant part of V
  std::vector<MatrixXcd> basis;  // one per matrix parameter
  int ny() const { return n + static_cast<int>(basis.size()); }
};

Layout make_layout(const ConvexProgram& p) {
  Layout L;
  L.n = p.num_scalars;
  L.d = p.matrix_dim;
  L.free_diag = p.fixed_diagonal.size() == 0;
  L.vc = MatrixXcd::Zero(L.d, L.d);
  const cplx I(0.0, 1.0);
  for (int i = 0; i < L.d; ++i) {
    if (L.free_diag) {
      MatrixXcd b = MatrixXcd::Zero(L.d, L.d);
      b(i, i) = 1.0;
      L.basis.push_back(b);
    } else {
      L.vc(i, i) = p.fixed_diagonal(i);
    }
  }
  for (int i = 0; i < L.d; ++i) {
    for (int j = i + 1; j < L.d; ++j) {
      MatrixXcd re = MatrixXcd::Zero(L.d, L.d);
      re(i, j) = 1.0;
      re(j, i) = 1.0;
      MatrixXcd im = MatrixXcd::Zero(L.d, L.d);
      im(i, j) = I;
      im(j, i) = -I;
      L.basis.push_back(re);
      L.basis.push_back(im);
    }
  }
  return L;
}

VectorXd to_params(const Layout& L, const VectorXd& x, const MatrixXcd& V) {
  VectorXd y = VectorXd::Zero(L.ny());
  y.head(L.n) = x;
  int k = L.n;
  if (L.d == 0) return y;
  if (L.free_diag)
    for (int i = 0; i < L.d; ++i) y(k++) = V(i, i).real();
  for (int i = 0; i < L.d; ++i)
    for (int j = i + 1; j < L.d; ++j) {
      y(k++) = V(i, j).real();
      y(k++) = V(i, j).imag();
    }
  return y;
}

MatrixXcd to_matrix(const Layout& L, const VectorXd& y) {
  MatrixXcd V = L.vc;
  for (std::size_t i = 0; i < L.basis.size(); ++i) V += y(L.n + static_cast<int>(i)) * L.basis[i];
  return V;
}

struct RealAffine {
  VectorXd a;
  double b = 0.0;
};

RealAffine lower(const Layout& L, const Affine& e) {
  RealAffine r;
  r.a = VectorXd::Zero(L.ny());
  r.b = e.constant;
  for (const auto& [var, coef] : e.terms) r.a(var) += coef;
  if (e.trace.size() > 0) {
    r.b += (e.trace * L.vc).trace().real();
    for (std::size_t i = 0; i < L.basis.size(); ++i)
      r.a(L.n + static_cast<int>(i)) += (e.trace * L.basis[i]).trace().real();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Reduced problem in the coordinates left after eliminating equalities:
//   minimize c0 + c'z + z'Pz - sum w ln(a'z + b)
//   s.t.     a'z + b - z'Pz >= 0,  V0 + sum z_i B_i >= 0 (PSD)

struct Log {
  VectorXd a;
  double b;
  double w;
};
struct Ineq {
  VectorXd a;
  double b;
  MatrixXd P;  // empty when linear
};

struct Reduced {
  int n = 0;
  double c0 = 0.0;
  VectorXd c;
  MatrixXd P;
  std::vector<Log> logs;
  std::vector<Ineq> ineqs;
  int d = 0;
  MatrixXcd V0;
  std::vector<MatrixXcd> B;

  int barrier_weight() const { return static_cast<int>(ineqs.size()) + d; }
};

double ineq_value(const Ineq& g, const VectorXd& z) {
  double v = g.a.dot(z) + g.b;
  if (g.P.size() > 0) v -= z.dot(g.P * z);
  return v;
}

MatrixXcd matrix_at(const Reduced& R, const VectorXd& z) {
  MatrixXcd V = R.V0;
  for (int i = 0; i < R.n; ++i)
    if (z(i) != 0.0) V += z(i) * R.B[i];
  return V;
}

double objective_at(const Reduced& R, const VectorXd& z) {
  double f = R.c0 + R.c.dot(z) + z.dot(R.P * z);
  for (const auto& l : R.logs) {
    double u = l.a.dot(z) + l.b;
    if (!(u > 0.0)) return kInf;
    f -= l.w * std::log(u);
  }
  return f;
}

// t f0(z) + barrier(z); +inf outside the domain.
double merit(const Reduced& R, const VectorXd& z, double t) {
  double f = objective_at(R, z);
  if (!std::isfinite(f)) return kInf;
  double phi = t * f;
  for (const auto& g : R.ineqs) {
    double v = ineq_value(g, z);
    if (!(v > 0.0)) return kInf;
    phi -= std::log(v);
  }
  if (R.d > 0) {
    Eigen::LLT<MatrixXcd> llt(matrix_at(R, z));
    if (llt.info() != Eigen::Success) return kInf;
    const MatrixXcd& Lm = llt.matrixLLT();
    for (int i = 0; i < R.d; ++i) {
      double di = Lm(i, i).real();
      if (!(di > 0.0)) return kInf;
      phi -= 2.0 * std::log(di);
    }
  }
  return phi;
}

void derivatives(const Reduced& R, const VectorXd& z, double t, VectorXd& grad, MatrixXd& hess) {
  grad = t * (R.c + 2.0 * R.P * z);
  hess = 2.0 * t * R.P;
  for (const auto& l : R.logs) {
    double u = l.a.dot(z) + l.b;
    grad -= t * l.w / u * l.a;
    hess += t * l.w / (u * u) * l.a * l.a.transpose();
  }
  for (const auto& g : R.ineqs) {
    double v = ineq_value(g, z);
    VectorXd dg = g.a;
    if (g.P.size() > 0) dg -= 2.0 * g.P * z;
    grad -= dg / v;
    hess += dg * dg.transpose() / (v * v);
    if (g.P.size() > 0) hess += 2.0 * g.P / v;
  }
  if (R.d > 0) {
    MatrixXcd W = matrix_at(R, z).inverse();
    std::vector<MatrixXcd> WB(R.n);
    for (int i = 0; i < R.n; ++i) {
      WB[i] = W * R.B[i];
      grad(i) -= WB[i].trace().real();
    }
    for (int i = 0; i < R.n; ++i)
      for (int j = i; j < R.n; ++j) {
        double h = (WB[i].transpose().cwiseProduct(WB[j])).sum().real();
        hess(i, j) += h;
        if (j != i) hess(j, i) += h;
      }
  }
}

// merit(z + dz) - merit(z), computed term by term so that the difference
// keeps full relative accuracy when t * f0 is large. +inf outside the domain.
double merit_delta(const Reduced& R, const VectorXd& z, const VectorXd& dz, double t) {
  const VectorXd Pdz = R.P * dz;
  double df = R.c.dot(dz) + 2.0 * z.dot(Pdz) + dz.dot(Pdz);
  for (const auto& l : R.logs) {
    const double u = l.a.dot(z) + l.b;
    const double r = l.a.dot(dz) / u;
    if (!(r > -1.0)) return kInf;
    df -= l.w * std::log1p(r);
  }
  double d = t * df;
  for (const auto& g : R.ineqs) {
    const double v = ineq_value(g, z);
    double dv = g.a.dot(dz);
    if (g.P.size() > 0) dv -= 2.0 * z.dot(g.P * dz) + dz.dot(g.P * dz);
    const double r = dv / v;
    if (!(r > -1.0)) return kInf;
    d -= std::log1p(r);
  }
  if (R.d > 0) {
    Eigen::LLT<MatrixXcd> llt(matrix_at(R, z));
    if (llt.info() != Eigen::Success) return kInf;
    MatrixXcd dV = MatrixXcd::Zero(R.d, R.d);
    for (int i = 0; i < R.n; ++i)
      if (dz(i) != 0.0) dV += dz(i) * R.B[i];
    // eigenvalues of L^{-1} dV L^{-H}
    MatrixXcd X = llt.matrixL().solve(dV);
    X = llt.matrixL().solve(X.adjoint().eval()).adjoint().eval();
    X = 0.5 * (X + X.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(X, Eigen::EigenvaluesOnly);
    for (int i = 0; i < R.d; ++i) {
      const double lam = es.eigenvalues()(i);
      if (!(lam > -1.0)) return kInf;
      d -= std::log1p(lam);
    }
  }
  return d;
}

enum class CenterResult { Ok, StepFailure, Budget, Stopped };

// Damped Newton on the merit function.
template <typename Stop>
CenterResult center(const Reduced& R, VectorXd& z, double t, int& budget, int& iters, Stop& stop) {
  VectorXd grad;
  MatrixXd hess;
  for (int local = 0;; ++local) {
    if (budget <= 0) return CenterResult::Budget;
    derivatives(R, z, t, grad, hess);
    VectorXd s = hess.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    MatrixXd H = s.asDiagonal() * hess * s.asDiagonal();
    H.diagonal().array() += 1e-13;
    Eigen::LDLT<MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success) return CenterResult::StepFailure;
    VectorXd dz = -(s.asDiagonal() * ldlt.solve(s.asDiagonal() * grad)).eval();
    if (!dz.allFinite()) return CenterResult::StepFailure;
    const double dec = -grad.dot(dz);
    if (dec / 2.0 <= 1e-10) return CenterResult::Ok;
    // Past this point the direction is limited by conditioning, not by the
    // distance to the center.
    if (local >= 60 && dec / 2.0 <= 1e-5) return CenterResult::Ok;

    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const VectorXd trial = step * dz;
      const double df = merit_delta(R, z, trial, t);
      if (std::isfinite(df) && df <= -0.25 * step * dec) {
        z += trial;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    --budget;
    ++iters;
    if (moved && stop(z)) return CenterResult::Stopped;
    if (!moved) return dec / 2.0 <= 1e-6 ? CenterResult::Ok : CenterResult::StepFailure;
  }
}

struct BarrierOutcome {
  CenterResult last = CenterResult::Ok;
  double gap = kInf;
  bool stopped_early = false;
};

template <typename Stop>
BarrierOutcome barrier(const Reduced& R, VectorXd& z, double gap_tol, int& budget, int& iters, Stop stop) {
  BarrierOutcome out;
  const double m = std::max(1, R.barrier_weight());
  double t = 1.0;
  // t minimizing the residual of the centrality condition in the barrier
  // Hessian norm; a large t from a near-boundary point costs many damped steps.
  {
    VectorXd gb, g1;
    MatrixXd hb, h1;
    derivatives(R, z, 0.0, gb, hb);
    derivatives(R, z, 1.0, g1, h1);
    const VectorXd g0 = g1 - gb;
    hb.diagonal().array() += 1e-12 * std::max(1.0, hb.diagonal().cwiseAbs().maxCoeff());
    Eigen::LDLT<MatrixXd> ldlt(hb);
    const VectorXd hg = ldlt.solve(g0);
    const double den = g0.dot(hg);
    if (den > 0.0 && std::isfinite(den)) {
      const double tt = -gb.dot(hg) / den;
      if (std::isfinite(tt)) t = std::clamp(tt, 1e-2, 1e3);
    }
  }
  const double mu = 20.0;
  for (;;) {
    out.last = center(R, z, t, budget, iters, stop);
    out.gap = m / t;
    if (out.last == CenterResult::Stopped) {
      out.stopped_early = true;
      return out;
    }
    if (out.last != CenterResult::Ok) {
      // A failed centering late in the path still leaves a usable point.
      return out;
    }
    if (stop(z)) {
      out.stopped_early = true;
      return out;
    }
    if (m / t < gap_tol) return out;
    t *= mu;
  }
}

// ---------------------------------------------------------------------------

double sq_term(const std::vector<std::pair<int, double>>& sq, const VectorXd& x) {
  double s = 0.0;
  for (const auto& [v, q] : sq) s += q * x(v) * x(v);
  return s;
}

double affine_value(const Affine& e, const VectorXd& x, const MatrixXcd& V) {
  double s = e.constant;
  for (const auto& [v, c] : e.terms) s += c * x(v);
  if (e.trace.size() > 0) s += (e.trace * V).trace().real();
  return s;
}

bool hermitian(const MatrixXcd& m, double tol = 1e-9) {
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

void check_affine(const ConvexProgram& p, const Affine& e, const std::string& where,
                  std::vector<std::string>& out) {
  for (const auto& [v, c] : e.terms) {
    if (v < 0 || v >= p.num_scalars) out.push_back(where + ": variable index out of range");
    if (!std::isfinite(c)) out.push_back(where + ": non-finite coefficient");
  }
  if (!std::isfinite(e.constant)) out.push_back(where + ": non-finite constant");
  if (e.trace.size() > 0) {
    if (e.trace.rows() != p.matrix_dim || e.trace.cols() != p.matrix_dim)
      out.push_back(where + ": trace matrix dimension differs from the matrix block");
    else if (!hermitian(e.trace))
      out.push_back(where + ": trace matrix is not Hermitian");
  }
}

void check_squares(const ConvexProgram& p, const std::vector<std::pair<int, double>>& sq,
                   const std::string& where, std::vector<std::string>& out) {
  for (const auto& [v, q] : sq) {
    if (v < 0 || v >= p.num_scalars) out.push_back(where + ": variable index out of range");
    if (!(q >= 0.0)) out.push_back(where + ": negative quadratic coefficient");
  }
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
    case Status::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

std::vector<std::string> check_convexity(const ConvexProgram& p) {
  std::vector<std::string> out;
  if (p.num_scalars < 0) out.emplace_back("negative scalar count");
  if (p.matrix_dim < 0) out.emplace_back("negative matrix dimension");
  if (p.fixed_diagonal.size() != 0 && p.fixed_diagonal.size() != p.matrix_dim)
    out.emplace_back("fixed diagonal length differs from the matrix dimension");
  if (p.num_scalars + p.matrix_dim == 0) out.emplace_back("program has no variables");
  check_affine(p, p.objective.affine, "objective", out);
  check_squares(p, p.objective.squares, "objective", out);
  for (std::size_t i = 0; i < p.objective.neglogs.size(); ++i) {
    const auto& nl = p.objective.neglogs[i];
    std::string where = "objective log term " + std::to_string(i);
    check_affine(p, nl.arg, where, out);
    if (!(nl.weight >= 0.0)) out.push_back(where + ": negative weight makes the objective concave");
  }
  for (const auto& c : p.linear) check_affine(p, c.expr, "constraint '" + c.name + "'", out);
  for (const auto& c : p.quadratic) {
    check_affine(p, c.rhs, "constraint '" + c.name + "'", out);
    check_squares(p, c.squares, "constraint '" + c.name + "'", out);
  }
  return out;
}

double evaluate_objective(const ConvexProgram& p, const VectorXd& x, const MatrixXcd& V) {
  double f = affine_value(p.objective.affine, x, V) + sq_term(p.objective.squares, x);
  for (const auto& nl : p.objective.neglogs) {
    double u = affine_value(nl.arg, x, V);
    if (!(u > 0.0)) return kInf;
    f -= nl.weight * std::log(u);
  }
  return f;
}

double max_violation(const ConvexProgram& p, const VectorXd& x, const MatrixXcd& V) {
  double worst = 0.0;
  for (const auto& c : p.linear) {
    double v = affine_value(c.expr, x, V);
    switch (c.sense) {
      case Sense::GreaterEq: worst = std::max(worst, -v); break;
      case Sense::LessEq: worst = std::max(worst, v); break;
      case Sense::Equal: worst = std::max(worst, std::abs(v)); break;
    }
  }
  for (const auto& c : p.quadratic) worst = std::max(worst, sq_term(c.squares, x) - affine_value(c.rhs, x, V));
  if (p.matrix_dim > 0) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(V, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues()(0));
    if (p.fixed_diagonal.size() > 0)
      for (int i = 0; i < p.matrix_dim; ++i)
        worst = std::max(worst, std::abs(V(i, i).real() - p.fixed_diagonal(i)));
  }
  return worst;
}

SolverReport solve(const ConvexProgram& p, const Tolerances& tol, const Start* start) {
  const auto t_begin = std::chrono::steady_clock::now();
  auto issues = check_convexity(p);
  if (!issues.empty()) throw std::invalid_argument("program is not structurally convex: " + issues.front());

  SolverReport rep;
  const Layout L = make_layout(p);
  const int ny = L.ny();

  // Equalities: y = y0 + Z z.
  std::vector<RealAffine> eqs;
  for (const auto& c : p.linear)
    if (c.sense == Sense::Equal) eqs.push_back(lower(L, c.expr));
  VectorXd y0 = VectorXd::Zero(ny);
  MatrixXd Z = MatrixXd::Identity(ny, ny);
  if (!eqs.empty()) {
    MatrixXd A(eqs.size(), ny);
    VectorXd b(eqs.size());
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      double sc = std::max(1e-300, eqs[i].a.cwiseAbs().maxCoeff());
      A.row(static_cast<int>(i)) = eqs[i].a.transpose() / sc;
      b(static_cast<int>(i)) = -eqs[i].b / sc;
    }
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    y0 = svd.solve(b);
    if ((A * y0 - b).cwiseAbs().maxCoeff() > tol.feas_tol) {
      rep.status = Status::Infeasible;
      rep.infeasibility = (A * y0 - b).cwiseAbs().maxCoeff();
      rep.x = y0.head(L.n);
      rep.V = to_matrix(L, y0);
      return rep;
    }
    const int rank = static_cast<int>(svd.rank());
    Z = svd.matrixV().rightCols(ny - rank);
  }
  const int nz = static_cast<int>(Z.cols());

  auto reduce_affine = [&](const RealAffine& r) {
    RealAffine out;
    out.a = Z.transpose() * r.a;
    out.b = r.b + r.a.dot(y0);
    return out;
  };
  // Scalar squares act on y only through the first n coordinates.
  auto reduce_squares = [&](const std::vector<std::pair<int, double>>& sq, VectorXd& lin, double& cst) {
    MatrixXd Py = MatrixXd::Zero(ny, ny);
    for (const auto& [v, q] : sq) Py(v, v) += q;
    lin = 2.0 * Z.transpose() * (Py * y0);
    cst = y0.dot(Py * y0);
    return MatrixXd(Z.transpose() * Py * Z);
  };

  Reduced R;
  R.n = nz;
  {
    RealAffine obj = reduce_affine(lower(L, p.objective.affine));
    VectorXd lin;
    double cst;
    R.P = reduce_squares(p.objective.squares, lin, cst);
    R.c = obj.a + lin;
    R.c0 = obj.b + cst;
    for (const auto& nl : p.objective.neglogs) {
      RealAffine r = reduce_affine(lower(L, nl.arg));
      if (nl.weight > 0.0) R.logs.push_back({r.a, r.b, nl.weight});
    }
  }
  auto push_ineq = [&](RealAffine r, MatrixXd P) {
    double sc = r.a.size() > 0 ? r.a.cwiseAbs().maxCoeff() : 0.0;
    if (P.size() > 0) sc = std::max(sc, P.cwiseAbs().maxCoeff());
    if (sc == 0.0) {
      // Constant row: either trivially true or infeasible.
      R.ineqs.push_back({r.a, r.b, P});
      return;
    }
    r.a /= sc;
    r.b /= sc;
    if (P.size() > 0) P /= sc;
    R.ineqs.push_back({r.a, r.b, P});
  };
  for (const auto& c : p.linear) {
    if (c.sense == Sense::Equal) continue;
    RealAffine r = reduce_affine(lower(L, c.expr));
    if (c.sense == Sense::LessEq) {
      r.a = -r.a;
      r.b = -r.b;
    }
    push_ineq(r, MatrixXd());
  }
  for (const auto& c : p.quadratic) {
    RealAffine r = reduce_affine(lower(L, c.rhs));
    VectorXd lin;
    double cst;
    MatrixXd P = reduce_squares(c.squares, lin, cst);
    r.a -= lin;
    r.b -= cst;
    push_ineq(r, P);
  }
  R.d = L.d;
  if (R.d > 0) {
    R.V0 = to_matrix(L, y0);
    R.B.resize(nz);
    for (int i = 0; i < nz; ++i) {
      MatrixXcd b = MatrixXcd::Zero(L.d, L.d);
      for (std::size_t k = 0; k < L.basis.size(); ++k) {
        double zk = Z(L.n + static_cast<int>(k), i);
        if (zk != 0.0) b += zk * L.basis[k];
      }
      R.B[i] = b;
    }
  }

  auto finish = [&](Status st, const VectorXd& z, double gap) {
    VectorXd y = y0 + Z * z;
    rep.status = st;
    rep.x = y.head(L.n);
    rep.V = to_matrix(L, y);
    if (L.d > 0) rep.V = 0.5 * (rep.V + rep.V.adjoint()).eval();
    rep.objective = evaluate_objective(p, rep.x, rep.V);
    rep.max_violation = max_violation(p, rep.x, rep.V);
    rep.gap = gap;
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_begin).count();
    return rep;
  };

  VectorXd z = VectorXd::Zero(nz);
  if (start != nullptr) {
    VectorXd ys = to_params(L, start->x.size() == L.n ? start->x : VectorXd(VectorXd::Zero(L.n)),
                            start->V.size() == L.d * L.d ? start->V : MatrixXcd(L.vc));
    z = Z.transpose() * (ys - y0);
  }
  int budget = tol.max_newton;

  // Phase I when the start is not strictly inside the domain.
  auto margin = [&](const VectorXd& zz) {
    double s = kInf;
    for (const auto& g : R.ineqs) s = std::min(s, ineq_value(g, zz));
    for (const auto& l : R.logs) s = std::min(s, l.a.dot(zz) + l.b);
    if (R.d > 0) {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(matrix_at(R, zz), Eigen::EigenvaluesOnly);
      s = std::min(s, es.eigenvalues()(0));
    }
    return s;
  };
  const double m0 = margin(z);
  if (!(m0 > 0.0) || !std::isfinite(merit(R, z, 1.0))) {
    Reduced F;
    F.n = nz + 1;
    F.c = VectorXd::Zero(F.n);
    F.c(nz) = 1.0;
    F.P = MatrixXd::Zero(F.n, F.n);
    auto widen = [&](const VectorXd& a) {
      VectorXd w(F.n);
      w.head(nz) = a;
      w(nz) = 1.0;
      return w;
    };
    for (const auto& g : R.ineqs) {
      MatrixXd P;
      if (g.P.size() > 0) {
        P = MatrixXd::Zero(F.n, F.n);
        P.topLeftCorner(nz, nz) = g.P;
      }
      F.ineqs.push_back({widen(g.a), g.b, P});
    }
    for (const auto& l : R.logs) F.ineqs.push_back({widen(l.a), l.b, MatrixXd()});
    {
      VectorXd a = VectorXd::Zero(F.n);
      a(nz) = 1.0;
      F.ineqs.push_back({a, 1.0, MatrixXd()});  // s >= -1 keeps phase I bounded
      // A box around the start stops the barrier from running off along
      // directions in which every constraint loosens.
      const double box = 1e3 * std::max(1.0, z.cwiseAbs().maxCoeff());
      for (int i = 0; i < nz; ++i) {
        VectorXd e = VectorXd::Zero(F.n);
        e(i) = 1.0;
        F.ineqs.push_back({e, box - z(i), MatrixXd()});
        F.ineqs.push_back({-e, box + z(i), MatrixXd()});
      }
    }
    F.d = R.d;
    if (R.d > 0) {
      F.V0 = R.V0;
      F.B = R.B;
      F.B.push_back(MatrixXcd::Identity(R.d, R.d));
    }
    VectorXd zf(F.n);
    zf.head(nz) = z;
    double s0 = std::isfinite(m0) ? -m0 : 0.0;
    zf(nz) = std::max(s0, 0.0) + 1.0;
    int iters = 0;
    auto out = barrier(F, zf, 1e-10, budget, iters, [&](const VectorXd& w) { return w(nz) < -1e-7; });
    rep.iterations += iters;
    const double sstar = zf(nz);
    if (!out.stopped_early) {
      if (out.last == CenterResult::Budget) return finish(Status::IterationLimit, zf.head(nz), kInf);
      if (sstar >= 0.0) {
        // Phase I reached its optimum without finding an interior point.
        auto r = finish(Status::Infeasible, zf.head(nz), kInf);
        r.infeasibility = sstar;
        return r;
      }
    }
    z = zf.head(nz);
    if (!(margin(z) > 0.0) || !std::isfinite(merit(R, z, 1.0))) {
      auto r = finish(Status::Infeasible, z, kInf);
      r.infeasibility = std::max(sstar, 0.0);
      return r;
    }
  }

  int iters = 0;
  auto out = barrier(R, z, tol.gap_tol, budget, iters, [](const VectorXd&) { return false; });
  rep.iterations += iters;
  if (z.norm() > 1e12 || objective_at(R, z) < -1e15) return finish(Status::Unbounded, z, out.gap);
  Status st = Status::Optimal;
  if (out.last == CenterResult::Budget) st = Status::IterationLimit;
  else if (out.last == CenterResult::StepFailure && out.gap > tol.gap_tol) {
    // Stalled before reaching the target gap. Accept if the stall happened
    // after the gap was already small relative to the objective.
    const double f = std::abs(objective_at(R, z));
    st = out.gap <= std::max(tol.gap_tol, 1e-9 * std::max(1.0, f)) * 20.0 ? Status::Optimal
                                                                           : Status::NumericalFailure;
  }
  auto r = finish(st, z, out.gap);
  if (r.status == Status::Optimal && r.max_violation > tol.feas_tol) r.status = Status::NumericalFailure;
  return r;
}

}  // namespace risd2d::conic
