#include "undernewton/min_norm.hpp"

#include <bit>
#include <limits>
#include <vector>

namespace undernewton {
namespace {

std::vector<Index> members(unsigned mask, Index n) {
  std::vector<Index> out;
  for (Index j = 0; j < n; ++j) {
    if (mask & (1u << j)) out.push_back(j);
  }
  return out;
}

bool solve_square(const MatrixXd& m, const VectorXd& rhs, VectorXd& out) {
  Eigen::FullPivLU<MatrixXd> lu(m);
  if (lu.rank() < m.rows()) return false;
  out = lu.solve(rhs);
  return out.allFinite();
}

// Basic solutions of the split l1 program are supported on m columns of A.
double oracle_l1(const MatrixXd& a, const VectorXd& b) {
  const Index m = a.rows();
  const Index n = a.cols();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != m) continue;
    const auto cols = members(mask, n);
    MatrixXd sub(m, m);
    for (Index c = 0; c < m; ++c) sub.col(c) = a.col(cols[c]);
    VectorXd zs;
    if (!solve_square(sub, b, zs)) continue;
    best = std::min(best, zs.lpNorm<1>());
  }
  return best;
}

// Vertices of {(z, t) : A z = b, |z_i| <= t} have n + 1 - m coordinates
// pinned to +-t; the remaining m - 1 coordinates and t solve an m x m system.
double oracle_linf(const MatrixXd& a, const VectorXd& b) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Index pinned = n + 1 - m;
  const double slack = 1e-9 * std::max(1.0, b.lpNorm<Eigen::Infinity>());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != pinned) continue;
    const auto tight = members(mask, n);
    const auto free_cols = members(~mask & ((1u << n) - 1u), n);
    for (unsigned signs = 0; signs < (1u << pinned); ++signs) {
      MatrixXd sys(m, m);
      VectorXd pinned_col = VectorXd::Zero(m);
      for (Index p = 0; p < pinned; ++p) {
        const double s = (signs & (1u << p)) ? -1.0 : 1.0;
        pinned_col += s * a.col(tight[p]);
      }
      for (Index c = 0; c + 1 < m; ++c) sys.col(c) = a.col(free_cols[c]);
      sys.col(m - 1) = pinned_col;
      VectorXd sol;
      if (!solve_square(sys, b, sol)) continue;
      const double t = sol(m - 1);
      if (t < -slack) continue;
      bool feasible = true;
      for (Index c = 0; c + 1 < m; ++c) {
        if (std::abs(sol(c)) > t + slack) feasible = false;
      }
      if (feasible) best = std::min(best, t);
    }
  }
  return best;
}

}  // namespace

double oracle_min_norm(const LinearSystem<double>& sys, NormKind k) {
  const Index m = sys.a.rows();
  const Index n = sys.a.cols();
  if (n > 6 || m > 4) throw Error(ErrorCode::SizeLimit, "oracle requires n <= 6 and m <= 4");
  if (m == 0 || m > n || sys.b.size() != m) {
    throw Error(ErrorCode::InvalidInput, "linear system dimensions are inconsistent");
  }
  if (sys.b.isZero(0)) return 0.0;

  double best = std::numeric_limits<double>::infinity();
  switch (k) {
    case NormKind::L1: best = oracle_l1(sys.a, sys.b); break;
    case NormKind::LInf: best = oracle_linf(sys.a, sys.b); break;
    case NormKind::L2: {
      // Normal equations: a different route from the QR used by min_norm_l2.
      const MatrixXd gram = sys.a * sys.a.transpose();
      best = (sys.a.transpose() * gram.ldlt().solve(sys.b)).norm();
      break;
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::LPInfeasible, "no basic solution found");
  return best;
}

}  // namespace undernewton
