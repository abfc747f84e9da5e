#pragma once

// Dense two-phase primal simplex with Bland's rule.
//
//   minimize  c^T x   subject to  A x = b,  x >= lower.
//
// The tableau is kept explicitly; once a basis is optimal the basic
// solution and the duals are recomputed from the original data with an LU
// factorisation of the basis so the reported point carries no accumulated
// pivoting error.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "undernewton/error.hpp"
#include "undernewton/linalg.hpp"

namespace undernewton {

template <typename Scalar>
struct LinearProgram {
  Vector<Scalar> cost;
  Matrix<Scalar> constraints;
  Vector<Scalar> rhs;
  Vector<Scalar> lower;  // empty means all zero
};

template <typename Scalar>
struct LpSolution {
  Scalar value{};
  Vector<Scalar> x;
  /// Multipliers y of the equality rows; c - A^T y >= 0 at optimum.
  Vector<Scalar> duals;
  std::vector<Index> basis;
  int iterations = 0;
};

namespace detail {

template <typename Scalar>
class Tableau {
 public:
  Tableau(const Matrix<Scalar>& a, const Vector<Scalar>& b, int iteration_cap)
      : rows_(a.rows()), vars_(a.cols()), cap_(iteration_cap) {
    table_ = Matrix<Scalar>::Zero(rows_, vars_ + rows_ + 1);
    table_.leftCols(vars_) = a;
    table_.block(0, vars_, rows_, rows_).setIdentity();
    table_.col(rhs_col()) = b;
    basis_.resize(rows_);
    for (Index i = 0; i < rows_; ++i) basis_[i] = vars_ + i;
    active_.assign(rows_, true);
  }

  Index rhs_col() const { return vars_ + rows_; }
  bool is_artificial(Index j) const { return j >= vars_; }

  /// Sets the objective row to the reduced costs of cost (length vars + rows).
  void load_objective(const Vector<Scalar>& cost) {
    objective_ = Vector<Scalar>::Zero(table_.cols());
    objective_.head(cost.size()) = cost;
    for (Index i = 0; i < rows_; ++i) {
      if (!active_[i]) continue;
      const Scalar cb = cost(basis_[i]);
      if (cb != Scalar(0)) objective_ -= cb * table_.row(i).transpose();
    }
  }

  /// Runs Bland's rule until optimal. Returns false when unbounded.
  bool optimize(bool allow_artificial, Scalar tol) {
    for (;;) {
      Index entering = -1;
      for (Index j = 0; j < rhs_col(); ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (objective_(j) < -tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      Index leaving = -1;
      Scalar best_ratio = Scalar(0);
      for (Index i = 0; i < rows_; ++i) {
        if (!active_[i]) continue;
        const Scalar pivot = table_(i, entering);
        if (pivot <= tol) continue;
        const Scalar ratio = table_(i, rhs_col()) / pivot;
        if (leaving < 0 || ratio < best_ratio - tol ||
            (std::abs(ratio - best_ratio) <= tol && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(Index row, Index col) {
    if (++iterations_ > cap_) {
      throw Error(ErrorCode::CycleLimit, "simplex iteration cap reached");
    }
    table_.row(row) /= table_(row, col);
    for (Index i = 0; i < rows_; ++i) {
      if (i == row || !active_[i]) continue;
      const Scalar factor = table_(i, col);
      if (factor != Scalar(0)) table_.row(i) -= factor * table_.row(row);
    }
    const Scalar factor = objective_(col);
    if (factor != Scalar(0)) objective_ -= factor * table_.row(row).transpose();
    basis_[row] = col;
  }

  /// Pivots remaining artificial variables out of the basis; rows where that
  /// is impossible are linearly dependent and get deactivated.
  void evict_artificials(Scalar tol) {
    for (Index i = 0; i < rows_; ++i) {
      if (!active_[i] || !is_artificial(basis_[i])) continue;
      Index col = -1;
      for (Index j = 0; j < vars_; ++j) {
        if (std::abs(table_(i, j)) > tol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        active_[i] = false;
      }
    }
  }

  Scalar objective_value() const { return -objective_(rhs_col()); }
  const std::vector<Index>& basis() const { return basis_; }
  const std::vector<bool>& active() const { return active_; }
  int iterations() const { return iterations_; }

 private:
  Index rows_;
  Index vars_;
  int cap_;
  int iterations_ = 0;
  Matrix<Scalar> table_;
  Vector<Scalar> objective_;
  std::vector<Index> basis_;
  std::vector<bool> active_;
};

}  // namespace detail

template <typename Scalar>
LpSolution<Scalar> simplex_solve(const LinearProgram<Scalar>& lp) {
  const Index rows = lp.constraints.rows();
  const Index vars = lp.constraints.cols();
  if (lp.cost.size() != vars || lp.rhs.size() != rows ||
      (lp.lower.size() != 0 && lp.lower.size() != vars)) {
    throw Error(ErrorCode::InvalidInput, "linear program dimensions are inconsistent");
  }
  if (!lp.cost.allFinite() || !lp.constraints.allFinite() || !lp.rhs.allFinite() ||
      !lp.lower.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "linear program has non-finite data");
  }
  const Vector<Scalar> lower = lp.lower.size() == 0 ? Vector<Scalar>::Zero(vars) : lp.lower;

  Matrix<Scalar> a = lp.constraints;
  Vector<Scalar> b = lp.rhs - a * lower;
  Vector<Scalar> sign = Vector<Scalar>::Ones(rows);
  for (Index i = 0; i < rows; ++i) {
    if (b(i) < Scalar(0)) {
      a.row(i) *= Scalar(-1);
      b(i) = -b(i);
      sign(i) = Scalar(-1);
    }
  }

  const Scalar scale = std::max<Scalar>(Scalar(1), a.cwiseAbs().maxCoeff());
  const Scalar tol = Scalar(1e-11) * scale;
  const Scalar feasibility_tol =
      Scalar(1e-8) * std::max<Scalar>(Scalar(1), b.size() ? b.cwiseAbs().maxCoeff() : Scalar(0));
  const int cap = static_cast<int>(50 * (rows + vars));

  detail::Tableau<Scalar> tableau(a, b, cap);

  Vector<Scalar> phase1 = Vector<Scalar>::Zero(vars + rows);
  phase1.tail(rows).setOnes();
  tableau.load_objective(phase1);
  tableau.optimize(true, tol);
  if (tableau.objective_value() > feasibility_tol) {
    throw Error(ErrorCode::LPInfeasible, "phase one ended with positive artificial sum");
  }
  tableau.evict_artificials(tol);

  Vector<Scalar> phase2 = Vector<Scalar>::Zero(vars + rows);
  phase2.head(vars) = lp.cost;
  tableau.load_objective(phase2);
  if (!tableau.optimize(false, tol)) {
    throw Error(ErrorCode::LPUnbounded, "objective is unbounded below");
  }

  // Recompute the basic solution and duals from the original data.
  std::vector<Index> kept_rows;
  std::vector<Index> basic_cols;
  for (Index i = 0; i < rows; ++i) {
    if (!tableau.active()[i]) continue;
    kept_rows.push_back(i);
    basic_cols.push_back(tableau.basis()[i]);
  }
  const Index k = static_cast<Index>(kept_rows.size());
  Matrix<Scalar> basis_matrix(k, k);
  Vector<Scalar> basis_rhs(k);
  Vector<Scalar> basis_cost(k);
  for (Index r = 0; r < k; ++r) {
    basis_rhs(r) = b(kept_rows[r]);
    basis_cost(r) = lp.cost(basic_cols[r]);
    for (Index c = 0; c < k; ++c) basis_matrix(r, c) = a(kept_rows[r], basic_cols[c]);
  }

  LpSolution<Scalar> out;
  out.x = lower;
  out.duals = Vector<Scalar>::Zero(rows);
  if (k > 0) {
    Eigen::PartialPivLU<Matrix<Scalar>> lu(basis_matrix);
    const Vector<Scalar> xb = lu.solve(basis_rhs);
    const Vector<Scalar> y = lu.transpose().solve(basis_cost);
    for (Index r = 0; r < k; ++r) {
      out.x(basic_cols[r]) += xb(r);
      out.duals(kept_rows[r]) = sign(kept_rows[r]) * y(r);
    }
  }
  out.value = lp.cost.dot(out.x);
  out.basis = basic_cols;
  out.iterations = tableau.iterations();
  return out;
}

}  // namespace undernewton
