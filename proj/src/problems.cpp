#include "undernewton/problems.hpp"

#include <cmath>
#include <memory>
#include <ostream>
#include <string>

#include "undernewton/error.hpp"

namespace undernewton {

QuadraticProblem make_quadratic(std::vector<MatrixXd> a, MatrixXd h, VectorXd y,
                                std::ostream* warn) {
  const Index m = h.rows();
  const Index n = h.cols();
  if (m < 1 || n < 1) throw Error(ErrorCode::InvalidInput, "quadratic problem needs m, n >= 1");
  if (static_cast<Index>(a.size()) != m || y.size() != m) {
    throw Error(ErrorCode::InvalidInput, "quadratic problem needs one A_i, b_i and y_i per equation");
  }
  if (!h.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "quadratic problem has non-finite data");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    MatrixXd& ai = a[i];
    if (ai.rows() != n || ai.cols() != n) {
      throw Error(ErrorCode::InvalidInput, "A_" + std::to_string(i) + " must be n x n");
    }
    if (!ai.allFinite()) throw Error(ErrorCode::InvalidInput, "A_i has non-finite entries");
    const double asym = (ai - ai.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 && warn) {
      *warn << "warning: A_" << i << " is not symmetric (max |A - A^T| = " << asym
            << "), using (A + A^T) / 2\n";
    }
    ai = (0.5 * (ai + ai.transpose())).eval();
  }
  return QuadraticProblem{std::move(a), std::move(h), std::move(y)};
}

VectorXd quadratic_g(const QuadraticProblem& q, const VectorXd& x) {
  VectorXd g = q.h * x;
  for (Index i = 0; i < q.m(); ++i) g(i) += 0.5 * x.dot(q.a[i] * x);
  return g;
}

VectorXd quadratic_eval(const QuadraticProblem& q, const VectorXd& x) {
  return quadratic_g(q, x) - q.y;
}

MatrixXd quadratic_jacobian(const QuadraticProblem& q, const VectorXd& x) {
  MatrixXd j = q.h;
  for (Index i = 0; i < q.m(); ++i) j.row(i) += (q.a[i] * x).transpose();
  return j;
}

double quadratic_L1(const QuadraticProblem& q) {
  MatrixXd sum = MatrixXd::Zero(q.n(), q.n());
  for (const auto& ai : q.a) sum.noalias() += ai.transpose() * ai;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sum, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

double quadratic_mu0(const QuadraticProblem& q) { return smallest_singular_value(q.h); }

ProblemDefinition to_problem(const QuadraticProblem& q) {
  auto shared = std::make_shared<const QuadraticProblem>(q);
  ProblemDefinition p;
  p.n = q.n();
  p.m = q.m();
  p.residual = [shared](const VectorXd& x) { return quadratic_eval(*shared, x); };
  p.jacobian = [shared](const VectorXd& x) { return quadratic_jacobian(*shared, x); };
  return p;
}

PhiValue sigmoid_phi(double t) {
  const double e = std::exp(-std::abs(t));
  const double denom = 1 + e;
  return {t / denom, (1 + (1 + std::abs(t)) * e) / (denom * denom)};
}

StructuredProblem make_structured(MatrixXd c, VectorXd b, VectorXd y, ScalarMap phi,
                                  double mu_phi, double M) {
  if (c.rows() < 1 || c.cols() < c.rows()) {
    throw Error(ErrorCode::InvalidInput, "structured problem needs 1 <= m <= n");
  }
  if (b.size() != c.rows() || y.size() != c.rows()) {
    throw Error(ErrorCode::InvalidInput, "offsets and targets must have length m");
  }
  if (!phi) throw Error(ErrorCode::InvalidInput, "structured problem needs a scalar map");
  if (!(mu_phi > 0) || !(M > 0) || !std::isfinite(M)) {
    throw Error(ErrorCode::InvalidInput, "structured problem needs mu_phi > 0 and finite M > 0");
  }
  return StructuredProblem{std::move(c), std::move(b), std::move(y), std::move(phi), mu_phi, M};
}

StructuredProblem make_sigmoid_problem(MatrixXd c, VectorXd b, VectorXd y) {
  return make_structured(std::move(c), std::move(b), std::move(y), sigmoid_phi, kSigmoidMuPhi,
                         kSigmoidM);
}

VectorXd structured_eval(const StructuredProblem& s, const VectorXd& x) {
  const VectorXd t = s.c * x - s.b;
  VectorXd out(t.size());
  for (Index i = 0; i < t.size(); ++i) out(i) = s.phi(t(i)).value - s.y(i);
  return out;
}

MatrixXd structured_jacobian(const StructuredProblem& s, const VectorXd& x) {
  const VectorXd t = s.c * x - s.b;
  VectorXd d(t.size());
  for (Index i = 0; i < t.size(); ++i) d(i) = s.phi(t(i)).derivative;
  return d.asDiagonal() * s.c;
}

ProblemDefinition to_problem(const StructuredProblem& s) {
  auto shared = std::make_shared<const StructuredProblem>(s);
  ProblemDefinition p;
  p.n = s.n();
  p.m = s.m();
  p.residual = [shared](const VectorXd& x) { return structured_eval(*shared, x); };
  p.jacobian = [shared](const VectorXd& x) { return structured_jacobian(*shared, x); };
  return p;
}

CoveringConstants structured_conservative_constants(const StructuredProblem& s) {
  const VectorXd sv = singular_values(s.c);
  const double row_norm = s.c.rowwise().norm().maxCoeff();
  return {s.mu_phi * smallest_singular_value(s.c), s.M * sv(0) * row_norm};
}

VectorXd scalar_step(const ScalarProblem& sp, const VectorXd& x, NormKind k) {
  const double f = sp.f(x);
  const VectorXd g = sp.gradient(x);
  if (g.size() != x.size()) throw Error(ErrorCode::InvalidInput, "gradient has wrong length");
  if (f == 0) return VectorXd::Zero(x.size());
  if (g.isZero(0)) throw Error(ErrorCode::ZeroGradient, "gradient vanishes where f != 0");

  switch (k) {
    case NormKind::L1: {
      Index best = 0;
      for (Index i = 1; i < g.size(); ++i) {
        if (std::abs(g(i)) > std::abs(g(best))) best = i;
      }
      VectorXd z = VectorXd::Zero(x.size());
      z(best) = f / g(best);
      return z;
    }
    case NormKind::L2: return (f / g.squaredNorm()) * g;
    case NormKind::LInf: {
      const VectorXd sign = g.unaryExpr([](double v) { return v < 0 ? -1.0 : 1.0; });
      return (f / g.lpNorm<1>()) * sign;
    }
  }
  return (f / g.squaredNorm()) * g;
}

SolveOutcome solve_scalar_inequality(const ScalarProblem& sp, const VectorXd& x0,
                                     const SolverConfig& cfg) {
  cfg.validate();
  if (!(sp.L > 0)) throw Error(ErrorCode::InvalidInput, "inequality solver needs L > 0");
  if (x0.size() != sp.n) throw Error(ErrorCode::InvalidInput, "x0 has wrong length");

  SolveOutcome out;
  out.stop_tol = 0;
  VectorXd x = x0;
  double f = sp.f(x);
  if (cfg.record_iterates) out.iterates.push_back(x);
  for (int k = 0;; ++k) {
    if (!std::isfinite(f)) {
      out.status = SolveStatus::NonFinite;
      break;
    }
    if (f <= 0) {
      out.status = SolveStatus::Converged;
      break;
    }
    if (k >= cfg.max_iter) {
      out.status = SolveStatus::MaxIter;
      break;
    }
    const VectorXd g = sp.gradient(x);
    const double g2 = g.squaredNorm();
    if (!(g2 > 0)) {
      out.status = SolveStatus::ZeroGradient;
      break;
    }
    IterationRecord rec;
    rec.k = k;
    rec.u = f;
    rec.step_norm = f / std::sqrt(g2);
    rec.beta = g2 / sp.L;
    if (g2 < sp.L * f) {
      rec.alpha = g2 / (sp.L * f);
      rec.stage = Stage::Damped;
      x -= g / sp.L;
      ++out.stage1_count;
    } else {
      rec.alpha = 1;
      rec.stage = Stage::Pure;
      x -= (f / g2) * g;
    }
    out.trace.push_back(rec);
    if (cfg.record_iterates) out.iterates.push_back(x);
    f = sp.f(x);
  }
  out.x = x;
  out.final_residual = f;
  return out;
}

ProblemDefinition to_problem(const ScalarProblem& sp) {
  ProblemDefinition p;
  p.n = sp.n;
  p.m = 1;
  p.residual = [f = sp.f](const VectorXd& x) { return VectorXd::Constant(1, f(x)); };
  if (sp.gradient) {
    p.jacobian = [g = sp.gradient](const VectorXd& x) { return MatrixXd(g(x).transpose()); };
  }
  return p;
}

ProblemDefinition slack_transform(const InequalitySystem& ineq) {
  const Index l = ineq.dim;
  const Index m = static_cast<Index>(ineq.constraints.size());
  if (l < 1 || m < 1) throw Error(ErrorCode::InvalidInput, "inequality system needs l, m >= 1");
  auto shared = std::make_shared<const InequalitySystem>(ineq);
  ProblemDefinition p;
  p.n = l + m;
  p.m = m;
  p.residual = [shared, l, m](const VectorXd& v) {
    const VectorXd x = v.head(l);
    VectorXd r(m);
    for (Index i = 0; i < m; ++i) r(i) = shared->constraints[i].g(x) + v(l + i) * v(l + i);
    return r;
  };
  p.jacobian = [shared, l, m](const VectorXd& v) {
    const VectorXd x = v.head(l);
    MatrixXd j = MatrixXd::Zero(m, l + m);
    for (Index i = 0; i < m; ++i) {
      j.row(i).head(l) = shared->constraints[i].gradient(x).transpose();
      j(i, l + i) = 2 * v(l + i);
    }
    return j;
  };
  return p;
}

ProblemDefinition linear_feasibility_transform(const MatrixXd& a, const VectorXd& b) {
  if (a.rows() < 1 || a.cols() < a.rows() || b.size() != a.rows()) {
    throw Error(ErrorCode::InvalidInput, "linear feasibility needs 1 <= m <= n and b of length m");
  }
  ProblemDefinition p;
  p.n = a.cols();
  p.m = a.rows();
  p.residual = [a, b](const VectorXd& z) { return VectorXd(a * z.cwiseAbs2() - b); };
  p.jacobian = [a](const VectorXd& z) { return MatrixXd(2 * a * z.asDiagonal()); };
  return p;
}

}  // namespace undernewton
