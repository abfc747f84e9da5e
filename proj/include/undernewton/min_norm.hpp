#pragma once

// Minimum-norm solutions of underdetermined linear systems A z = b.
//
// l2 uses the closed form A^T (A A^T)^{-1} b through a QR factorisation of
// A^T; l1 and linf are posed as linear programs and solved by simplex_solve.
// The LP minimisers need not be unique: the vertex reached by Bland's rule
// with the natural column order is returned.

#include <Eigen/Dense>

#include "undernewton/error.hpp"
#include "undernewton/linalg.hpp"
#include "undernewton/simplex.hpp"

namespace undernewton {

template <typename Scalar>
struct LinearSystem {
  Matrix<Scalar> a;
  Vector<Scalar> b;
};

/// Throws InvalidInput on inconsistent or non-finite data, RankDeficient when
/// A does not have full row rank.
template <typename Scalar>
void check_system(const LinearSystem<Scalar>& sys) {
  if (sys.a.rows() == 0 || sys.a.cols() == 0 || sys.a.rows() != sys.b.size()) {
    throw Error(ErrorCode::InvalidInput, "linear system dimensions are inconsistent");
  }
  if (sys.a.rows() > sys.a.cols()) {
    throw Error(ErrorCode::InvalidInput, "linear system must have rows <= cols");
  }
  if (!sys.a.allFinite() || !sys.b.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "linear system has non-finite data");
  }
  if (!is_full_row_rank(sys.a)) {
    throw Error(ErrorCode::RankDeficient, "matrix does not have full row rank");
  }
}

/// sum(p + q) subject to A p - A q = b, p, q >= 0; z = p - q.
template <typename Scalar>
LinearProgram<Scalar> l1_program(const LinearSystem<Scalar>& sys) {
  const Index m = sys.a.rows();
  const Index n = sys.a.cols();
  LinearProgram<Scalar> lp;
  lp.cost = Vector<Scalar>::Ones(2 * n);
  lp.constraints.resize(m, 2 * n);
  lp.constraints << sys.a, -sys.a;
  lp.rhs = sys.b;
  return lp;
}

/// min t subject to A (w - t 1) = b, w + s = 2 t 1, with w, t, s >= 0; z = w - t 1.
template <typename Scalar>
LinearProgram<Scalar> linf_program(const LinearSystem<Scalar>& sys) {
  const Index m = sys.a.rows();
  const Index n = sys.a.cols();
  LinearProgram<Scalar> lp;
  lp.cost = Vector<Scalar>::Zero(2 * n + 1);
  lp.cost(n) = Scalar(1);
  lp.constraints = Matrix<Scalar>::Zero(m + n, 2 * n + 1);
  lp.constraints.topLeftCorner(m, n) = sys.a;
  lp.constraints.block(0, n, m, 1) = -sys.a.rowwise().sum();
  lp.constraints.block(m, 0, n, n).setIdentity();
  lp.constraints.block(m, n, n, 1).setConstant(Scalar(-2));
  lp.constraints.block(m, n + 1, n, n).setIdentity();
  lp.rhs = Vector<Scalar>::Zero(m + n);
  lp.rhs.head(m) = sys.b;
  return lp;
}

template <typename Scalar>
Vector<Scalar> min_norm_l2(const LinearSystem<Scalar>& sys) {
  check_system(sys);
  if (sys.b.isZero(0)) return Vector<Scalar>::Zero(sys.a.cols());
  const auto f = qr_factor(sys.a.transpose());
  const Vector<Scalar> w =
      f.r.transpose().template triangularView<Eigen::Lower>().solve(sys.b);
  return f.q * w;
}

template <typename Scalar>
Vector<Scalar> min_norm_l1(const LinearSystem<Scalar>& sys) {
  check_system(sys);
  const Index n = sys.a.cols();
  if (sys.b.isZero(0)) return Vector<Scalar>::Zero(n);
  const auto sol = simplex_solve(l1_program(sys));
  return sol.x.head(n) - sol.x.tail(n);
}

template <typename Scalar>
Vector<Scalar> min_norm_linf(const LinearSystem<Scalar>& sys) {
  check_system(sys);
  const Index n = sys.a.cols();
  if (sys.b.isZero(0)) return Vector<Scalar>::Zero(n);
  const auto sol = simplex_solve(linf_program(sys));
  return sol.x.head(n) - Vector<Scalar>::Constant(n, sol.x(n));
}

template <typename Scalar>
Vector<Scalar> min_norm(const LinearSystem<Scalar>& sys, NormKind k) {
  switch (k) {
    case NormKind::L1: return min_norm_l1(sys);
    case NormKind::L2: return min_norm_l2(sys);
    case NormKind::LInf: return min_norm_linf(sys);
  }
  return min_norm_l2(sys);
}

/// Exact optimal value of min ||z||_k s.t. A z = b by enumerating every basic
/// solution. Independent of simplex_solve; intended for verification only.
/// Throws SizeLimit unless n <= 6 and m <= 4.
double oracle_min_norm(const LinearSystem<double>& sys, NormKind k);

}  // namespace undernewton
