#include "undernewton/problem.hpp"

#include <algorithm>
#include <string>

#include "undernewton/error.hpp"

namespace undernewton {

void ProblemDefinition::validate() const {
  if (m < 1 || n < m) throw Error(ErrorCode::InvalidInput, "problem requires 1 <= m <= n");
  if (!residual) throw Error(ErrorCode::InvalidInput, "problem has no residual evaluator");
}

VectorXd ProblemDefinition::evaluate(const VectorXd& x) const {
  VectorXd r = residual(x);
  if (r.size() != m) {
    throw Error(ErrorCode::InvalidInput,
                "residual has length " + std::to_string(r.size()) + ", expected " + std::to_string(m));
  }
  return r;
}

MatrixXd ProblemDefinition::jacobian_at(const VectorXd& x, std::optional<double> h) const {
  if (!jacobian) return finite_diff_jacobian(*this, x, h.value_or(default_fd_step(x)));
  MatrixXd j = jacobian(x);
  if (j.rows() != m || j.cols() != n) {
    throw Error(ErrorCode::InvalidInput, "Jacobian has wrong dimensions");
  }
  return j;
}

double default_fd_step(const VectorXd& x) {
  return 1e-6 * std::max(1.0, x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0);
}

MatrixXd finite_diff_jacobian(const ProblemDefinition& p, const VectorXd& x, double h) {
  if (!(h > 0)) throw Error(ErrorCode::InvalidInput, "finite-difference step must be positive");
  const VectorXd base = p.evaluate(x);
  MatrixXd j(base.size(), x.size());
  VectorXd shifted = x;
  for (Index c = 0; c < x.size(); ++c) {
    shifted(c) = x(c) + h;
    j.col(c) = (p.evaluate(shifted) - base) / h;
    shifted(c) = x(c);
  }
  return j;
}

}  // namespace undernewton
