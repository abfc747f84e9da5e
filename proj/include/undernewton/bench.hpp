#pragma once

// Reproducible experiments driven by the CLI and the acceptance suite.

#include <cstdint>

#include "undernewton/newton.hpp"
#include "undernewton/problems.hpp"

namespace undernewton {

/// Sigmoid-structured system with n = 60 unknowns and m = 21 equations.
/// C, b and y are standard normal, drawn in that order from Rng(seed).
StructuredProblem sigmoid_benchmark_problem(std::uint64_t seed);

struct SigmoidBenchmark {
  double u0 = 0;
  CoveringConstants conservative_constants{};
  double conservative_beta = 0;  // mu^2 / L from the structure-blind constants
  double structured_beta = 0;    // mu_phi^2 / M
  double adaptive_beta0 = 5;
  double adaptive_q = 0.5;
  SolveOutcome conservative;
  SolveOutcome structured;
  SolveOutcome adaptive;
};

/// Runs the three configurations concurrently from x0 = 0 with stop_tol 1e-10.
SigmoidBenchmark run_sigmoid_benchmark(std::uint64_t seed);

struct OracleCheckReport {
  int passed = 0;
  int failed = 0;
};

/// Compares l1 and linf minimum-norm steps against basis enumeration on
/// `count` random full-row-rank systems with n <= 6, m <= 4.
OracleCheckReport run_oracle_check(std::uint64_t seed, int count, double tolerance);

}  // namespace undernewton
