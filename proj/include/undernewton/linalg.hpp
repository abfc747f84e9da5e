#pragma once

// Dense linear algebra shared by every solver: norm families, thin QR,
// smallest singular values and the covering-constant lower bound.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

#include "undernewton/error.hpp"

namespace undernewton {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;
using Index = Eigen::Index;

/// Relative threshold on sigma_min / sigma_max below which a matrix is rank deficient.
inline constexpr double kRankTolerance = 1e-12;

enum class NormKind { L1, L2, LInf };

constexpr NormKind dual(NormKind k) {
  switch (k) {
    case NormKind::L1: return NormKind::LInf;
    case NormKind::LInf: return NormKind::L1;
    case NormKind::L2: return NormKind::L2;
  }
  return NormKind::L2;
}

constexpr std::string_view to_string(NormKind k) {
  switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::LInf: return "linf";
  }
  return "l2";
}

inline std::optional<NormKind> parse_norm(std::string_view s) {
  if (s == "l1") return NormKind::L1;
  if (s == "l2") return NormKind::L2;
  if (s == "linf") return NormKind::LInf;
  return std::nullopt;
}

template <typename Derived>
typename Derived::RealScalar vector_norm(const Eigen::MatrixBase<Derived>& v, NormKind k) {
  using Real = typename Derived::RealScalar;
  if (v.size() == 0) return Real(0);
  switch (k) {
    case NormKind::L1: return v.template lpNorm<1>();
    case NormKind::L2: return v.norm();
    case NormKind::LInf: return v.template lpNorm<Eigen::Infinity>();
  }
  return v.norm();
}

/// Norm of v in the dual of k (l1 <-> linf, l2 self-dual).
template <typename Derived>
typename Derived::RealScalar dual_norm(const Eigen::MatrixBase<Derived>& v, NormKind k) {
  return vector_norm(v, dual(k));
}

template <typename Scalar>
struct QrFactors {
  Matrix<Scalar> q;  // rows x cols, orthonormal columns
  Matrix<Scalar> r;  // cols x cols, upper triangular with nonnegative diagonal
};

/// Thin Householder QR of a tall matrix. Throws RankDeficient when a diagonal
/// entry of R falls below kRankTolerance relative to the largest one.
template <typename Derived>
QrFactors<typename Derived::Scalar> qr_factor(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Mat = Matrix<Scalar>;
  const Index rows = a.rows();
  const Index cols = a.cols();
  if (rows < cols || cols == 0) {
    throw Error(ErrorCode::InvalidInput, "qr_factor expects a tall matrix with rows >= cols >= 1");
  }
  Eigen::HouseholderQR<Mat> qr(a);
  QrFactors<Scalar> f;
  f.q = qr.householderQ() * Mat::Identity(rows, cols);
  f.r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
  for (Index i = 0; i < cols; ++i) {
    if (f.r(i, i) < Scalar(0)) {
      f.r.row(i) *= Scalar(-1);
      f.q.col(i) *= Scalar(-1);
    }
  }
  const Scalar largest = f.r.diagonal().maxCoeff();
  const Scalar smallest = f.r.diagonal().minCoeff();
  if (!(largest > Scalar(0)) || smallest < Scalar(kRankTolerance) * largest) {
    throw Error(ErrorCode::RankDeficient, "triangular factor has a negligible diagonal entry");
  }
  return f;
}

/// Singular values in decreasing order.
template <typename Derived>
Vector<typename Derived::RealScalar> singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Mat = Matrix<typename Derived::Scalar>;
  Eigen::JacobiSVD<Mat> svd(a.eval());
  return svd.singularValues();
}

/// sigma_m of an m x n matrix with m <= n; 0 when rank deficient under kRankTolerance.
template <typename Derived>
typename Derived::RealScalar smallest_singular_value(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  if (a.rows() > a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::InvalidInput, "smallest_singular_value expects 1 <= rows <= cols");
  }
  if (!a.allFinite()) throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");
  const auto sv = singular_values(a);
  const Real largest = sv(0);
  const Real smallest = sv(sv.size() - 1);
  if (!(largest > Real(0)) || smallest < Real(kRankTolerance) * largest) return Real(0);
  return smallest;
}

template <typename Derived>
bool is_full_row_rank(const Eigen::MatrixBase<Derived>& a) {
  return smallest_singular_value(a) > 0;
}

/// Certified lower bound on min ||A^T h||_* over ||h||_* = 1, where the dual
/// norms are taken of the domain norm (on R^n) and the image norm (on R^m).
/// Exact for l2/l2. Otherwise sigma_m is scaled by the norm-equivalence
/// constants ||v||_p >= a ||v||_2 (on R^n) and ||h||_q <= b ||h||_2 (on R^m).
template <typename Derived>
typename Derived::RealScalar mu_lower_bound(const Eigen::MatrixBase<Derived>& a, NormKind domain,
                                            NormKind image) {
  using Real = typename Derived::RealScalar;
  const Real sigma = smallest_singular_value(a);
  const Real n = static_cast<Real>(a.cols());
  const Real m = static_cast<Real>(a.rows());
  const Real lower = dual(domain) == NormKind::LInf ? Real(1) / std::sqrt(n) : Real(1);
  const Real upper = dual(image) == NormKind::L1 ? std::sqrt(m) : Real(1);
  return sigma * lower / upper;
}

}  // namespace undernewton
