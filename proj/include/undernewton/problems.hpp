#pragma once

// Ready-made problem families: quadratic maps, structured maps
// P_i(x) = phi(c_i^T x - b_i) - y_i, scalar equations and inequalities,
// and the slack / squared-variable transforms of inequality systems.

#include <functional>
#include <iosfwd>
#include <vector>

#include "undernewton/linalg.hpp"
#include "undernewton/newton.hpp"
#include "undernewton/problem.hpp"

namespace undernewton {

// ---------------------------------------------------------------------------
// Quadratic maps g_i(x) = 1/2 x^T A_i x + b_i^T x, residual P = g - y.

struct QuadraticProblem {
  std::vector<MatrixXd> a;  // m symmetric n x n matrices
  MatrixXd h;               // m x n, row i is b_i; equals g'(0)
  VectorXd y;

  Index n() const { return h.cols(); }
  Index m() const { return h.rows(); }
};

/// Validates dimensions and symmetrises each A_i as (A + A^T) / 2, writing a
/// warning to `warn` (if non-null) when the asymmetry exceeds 1e-12.
QuadraticProblem make_quadratic(std::vector<MatrixXd> a, MatrixXd h, VectorXd y,
                                std::ostream* warn = nullptr);

VectorXd quadratic_g(const QuadraticProblem& q, const VectorXd& x);
VectorXd quadratic_eval(const QuadraticProblem& q, const VectorXd& x);
MatrixXd quadratic_jacobian(const QuadraticProblem& q, const VectorXd& x);
/// sqrt(lambda_max(sum A_i^T A_i)), a Lipschitz constant of g' in the l2 norms.
double quadratic_L1(const QuadraticProblem& q);
/// sigma_m(H); 0 when H is rank deficient.
double quadratic_mu0(const QuadraticProblem& q);
ProblemDefinition to_problem(const QuadraticProblem& q);

// ---------------------------------------------------------------------------
// Structured maps.

struct PhiValue {
  double value;
  double derivative;
};

using ScalarMap = std::function<PhiValue(double)>;

/// phi(t) = t / (1 + e^{-|t|}) and its derivative.
PhiValue sigmoid_phi(double t);
inline constexpr double kSigmoidMuPhi = 0.5;  // inf phi'
inline constexpr double kSigmoidM = 2.0;      // bound on |phi''|

struct StructuredProblem {
  MatrixXd c;  // m x n, rows c_i
  VectorXd b;  // offsets
  VectorXd y;
  ScalarMap phi;
  double mu_phi = 0;  // lower bound on |phi'|
  double M = 0;       // upper bound on |phi''|

  Index n() const { return c.cols(); }
  Index m() const { return c.rows(); }
  double gamma() const { return M / (mu_phi * mu_phi); }
  /// beta = mu_phi^2 / M: the damping threshold valid for any C.
  double effective_beta() const { return 1 / gamma(); }
};

StructuredProblem make_structured(MatrixXd c, VectorXd b, VectorXd y, ScalarMap phi,
                                  double mu_phi, double M);
StructuredProblem make_sigmoid_problem(MatrixXd c, VectorXd b, VectorXd y);

VectorXd structured_eval(const StructuredProblem& s, const VectorXd& x);
MatrixXd structured_jacobian(const StructuredProblem& s, const VectorXd& x);
ProblemDefinition to_problem(const StructuredProblem& s);

struct CoveringConstants {
  double mu;
  double L;
};

/// Structure-blind constants in the l2 norms: mu = mu_phi sigma_min(C),
/// L = M sigma_max(C) max_i ||c_i||_2.
CoveringConstants structured_conservative_constants(const StructuredProblem& s);

// ---------------------------------------------------------------------------
// Scalar equations f(x) = 0 and inequalities f(x) <= 0.

struct ScalarProblem {
  Index n = 0;
  std::function<double(const VectorXd&)> f;
  std::function<VectorXd(const VectorXd&)> gradient;
  double L = 0;  // Lipschitz constant of the gradient
};

/// Minimum-norm solution of grad f(x)^T z = f(x) in closed form.
/// Throws ZeroGradient when the gradient vanishes and f(x) != 0.
VectorXd scalar_step(const ScalarProblem& sp, const VectorXd& x, NormKind k);

/// Stops as soon as f(x_k) <= 0. Damped step x - grad f / L while
/// ||grad f||^2 < L f(x_k), otherwise the Newton step x - f grad f / ||grad f||^2.
SolveOutcome solve_scalar_inequality(const ScalarProblem& sp, const VectorXd& x0,
                                     const SolverConfig& cfg = {});

ProblemDefinition to_problem(const ScalarProblem& sp);

// ---------------------------------------------------------------------------
// Inequality systems.

struct ScalarConstraint {
  std::function<double(const VectorXd&)> g;
  std::function<VectorXd(const VectorXd&)> gradient;
};

struct InequalitySystem {
  Index dim = 0;  // l, number of original variables
  std::vector<ScalarConstraint> constraints;
};

/// P_i(x, s) = g_i(x) + s_i^2 over R^{l + m}.
ProblemDefinition slack_transform(const InequalitySystem& ineq);

/// P_i(z) = sum_j A_ij z_j^2 - b_i; a root gives x = z.^2 >= 0 with A x = b.
ProblemDefinition linear_feasibility_transform(const MatrixXd& a, const VectorXd& b);

}  // namespace undernewton
