#pragma once

#include <functional>
#include <optional>

#include "undernewton/linalg.hpp"

namespace undernewton {

/// A map P : R^n -> R^m with m <= n and its Jacobian. When no analytic
/// Jacobian is given, forward differences are used.
struct ProblemDefinition {
  using Residual = std::function<VectorXd(const VectorXd&)>;
  using Jacobian = std::function<MatrixXd(const VectorXd&)>;

  Index n = 0;
  Index m = 0;
  Residual residual;
  Jacobian jacobian;  // may be empty

  VectorXd evaluate(const VectorXd& x) const;

  /// Analytic Jacobian when available, otherwise forward differences with
  /// step h (default 1e-6 * max(1, ||x||_inf)).
  MatrixXd jacobian_at(const VectorXd& x, std::optional<double> h = std::nullopt) const;

  /// Throws InvalidInput unless 1 <= m <= n and a residual is set.
  void validate() const;
};

double default_fd_step(const VectorXd& x);

/// Column-wise forward differences of p.residual at x.
MatrixXd finite_diff_jacobian(const ProblemDefinition& p, const VectorXd& x, double h);

}  // namespace undernewton
