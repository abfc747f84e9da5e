#pragma once

// Newton-type iterations for underdetermined systems P(x) = 0:
//
//   z_k     = argmin { ||z|| : P'(x_k) z = P(x_k) }
//   x_{k+1} = x_k - alpha_k z_k
//
// The variants differ only in how alpha_k is chosen. u_k = ||P(x_k)|| is
// measured in the image norm, ||z_k|| in the domain norm.

#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "undernewton/linalg.hpp"
#include "undernewton/problem.hpp"

namespace undernewton {

enum class Stage { Damped, Pure };

enum class SolveStatus {
  Converged,
  MaxIter,
  LeftTrustBall,
  RankDeficientJacobian,
  InnerReductionLimit,
  ZeroGradient,
  NonFinite,
};

std::string_view to_string(Stage s);
std::string_view to_string(SolveStatus s);

struct SolverConfig {
  NormKind domain_norm = NormKind::L2;
  NormKind image_norm = NormKind::L2;
  /// Stop once u_k <= stop_tol. Unset means 1e-10 * max(1, u_0).
  std::optional<double> stop_tol;
  int max_iter = 500;
  /// Radius of the ball around x_0 (domain norm) the iterates must stay in.
  double trust_radius = std::numeric_limits<double>::infinity();

  // Adaptive scheme.
  double q = 0.5;                 // beta <- q * beta on a rejected trial
  std::optional<double> growth;   // beta <- growth * beta after an accepted step
  int max_inner = 200;            // rejected trials allowed per outer step
  bool line_search = false;       // Armijo backtracking on ||P(x - alpha z)|| instead of beta
  double armijo_factor = 0.5;
  double armijo_slope = 0.25;

  /// Finite-difference step; unset means 1e-6 * max(1, ||x||_inf).
  std::optional<double> fd_step;
  bool record_iterates = false;

  void validate() const;
};

struct IterationRecord {
  int k = 0;
  double u = 0;          // ||P(x_k)||
  double step_norm = 0;  // ||z_k||
  double alpha = 0;
  double beta = 0;       // threshold with alpha = min(1, beta / u)
  Stage stage = Stage::Pure;
  int inner_reductions = 0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::MaxIter;
  VectorXd x;
  double final_residual = 0;
  double stop_tol = 0;
  std::vector<IterationRecord> trace;
  int stage1_count = 0;
  int total_inner_reductions = 0;
  /// x_0, x_1, ..., x_K when SolverConfig::record_iterates is set.
  std::vector<VectorXd> iterates;

  bool converged() const { return status == SolveStatus::Converged; }
  int iterations() const { return static_cast<int>(trace.size()); }
};

/// Known constants: alpha_k = min{1, mu^2 / (L u_k)}.
SolveOutcome solve_basic(const ProblemDefinition& p, const VectorXd& x0, double mu, double L,
                         const SolverConfig& cfg = {});

/// Same rule parameterised directly by beta = mu^2 / L, e.g. the structured
/// constant mu_phi^2 / M.
SolveOutcome solve_with_beta(const ProblemDefinition& p, const VectorXd& x0, double beta,
                             const SolverConfig& cfg = {});

/// Adaptive beta: trial alpha_k = min{1, beta_k / u_k}; accepted when
/// u_{k+1} < (1 - alpha_k / 2) u_k (damped) or u_{k+1} < u_k / 2 (pure),
/// otherwise beta_k <- q beta_k and the trial is repeated.
SolveOutcome solve_adaptive(const ProblemDefinition& p, const VectorXd& x0, double beta0,
                            const SolverConfig& cfg = {});

/// Lipschitz constant only: alpha_k = min{1, u_k / (L ||z_k||^2)}.
SolveOutcome solve_L(const ProblemDefinition& p, const VectorXd& x0, double L,
                     const SolverConfig& cfg = {});

SolveOutcome solve_pure(const ProblemDefinition& p, const VectorXd& x0, const SolverConfig& cfg = {});

SolveOutcome solve_damped_constant(const ProblemDefinition& p, const VectorXd& x0, double alpha,
                                   const SolverConfig& cfg = {});

}  // namespace undernewton
