#pragma once

// JSON problem files.
//
//   {
//     "format": 1,
//     "kind": "quadratic" | "structured-sigmoid" | "linear-feasibility" | "scalar-polynomial",
//     "n": 3, "m": 2,
//     ... payload for the kind, or
//     "generator": {"seed": 7, "distribution": "standard-normal"},
//     "x0": [...],                                   optional
//     "constants": {"mu": .., "mu0": .., "L": .., "rho": .., "beta0": .., "q": .., "alpha": ..}
//   }
//
// Payload keys:
//   quadratic           A (m matrices n x n), b (m rows of length n), y (m)
//   structured-sigmoid  C (m x n), b (m), y (m)
//   linear-feasibility  A (m x n), b (m)
//   scalar-polynomial   terms: [{"coef": c, "powers": [p_1, ..., p_n]}], m = 1
//
// Unknown keys are rejected. Generated payloads draw, in order:
//   quadratic           per i: G (n x n, row-major), A_i = (G + G^T) / 2; then H; then y
//   structured-sigmoid  C, b, y
//   linear-feasibility  A; then x with |N(0,1)| entries; b = A x

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "undernewton/linalg.hpp"
#include "undernewton/problem.hpp"

namespace undernewton {

enum class ProblemKind { Quadratic, StructuredSigmoid, LinearFeasibility, ScalarPolynomial };

std::string_view to_string(ProblemKind k);

struct ProblemConstants {
  std::optional<double> mu;
  std::optional<double> mu0;
  std::optional<double> L;
  std::optional<double> rho;
  std::optional<double> beta0;
  std::optional<double> q;
  std::optional<double> alpha;
};

struct GeneratorSpec {
  std::uint64_t seed = 0;
  std::string distribution = "standard-normal";
};

struct PolynomialTerm {
  double coef = 0;
  std::vector<int> powers;
};

struct ProblemFile {
  ProblemKind kind = ProblemKind::Quadratic;
  Index n = 0;
  Index m = 0;
  std::optional<GeneratorSpec> generator;

  std::vector<MatrixXd> a;  // quadratic A_i
  MatrixXd matrix;          // quadratic H, structured C, linear-feasibility A
  VectorXd offsets;         // structured / linear-feasibility b
  VectorXd y;               // quadratic, structured
  std::vector<PolynomialTerm> terms;

  std::optional<VectorXd> x0;
  ProblemConstants constants;

  bool has_payload() const;
};

/// Throws Error(InvalidInput) naming the offending field.
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem_file(const std::string& path);
std::string to_json(const ProblemFile& file);

/// Fills the payload from the generator when absent.
ProblemFile materialize(ProblemFile file);

ProblemDefinition build_problem(const ProblemFile& file);

/// x0 when given; otherwise zeros, or ones for linear-feasibility (whose
/// Jacobian vanishes at the origin).
VectorXd initial_point(const ProblemFile& file);

double polynomial_value(const std::vector<PolynomialTerm>& terms, const VectorXd& x);
VectorXd polynomial_gradient(const std::vector<PolynomialTerm>& terms, const VectorXd& x);

}  // namespace undernewton
