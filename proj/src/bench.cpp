#include "undernewton/bench.hpp"

#include <cmath>
#include <future>

#include "undernewton/error.hpp"
#include "undernewton/min_norm.hpp"
#include "undernewton/random.hpp"

namespace undernewton {

StructuredProblem sigmoid_benchmark_problem(std::uint64_t seed) {
  constexpr Index n = 60;
  constexpr Index m = 21;
  Rng rng(seed);
  MatrixXd c = rng.normal_matrix(m, n);
  VectorXd b = rng.normal_vector(m);
  VectorXd y = rng.normal_vector(m);
  return make_sigmoid_problem(std::move(c), std::move(b), std::move(y));
}

SigmoidBenchmark run_sigmoid_benchmark(std::uint64_t seed) {
  const StructuredProblem s = sigmoid_benchmark_problem(seed);
  const ProblemDefinition p = to_problem(s);
  const VectorXd x0 = VectorXd::Zero(s.n());

  SigmoidBenchmark out;
  out.u0 = structured_eval(s, x0).norm();
  out.conservative_constants = structured_conservative_constants(s);
  out.conservative_beta =
      out.conservative_constants.mu * out.conservative_constants.mu / out.conservative_constants.L;
  out.structured_beta = s.effective_beta();

  SolverConfig cfg;
  cfg.stop_tol = 1e-10;
  cfg.max_iter = 100000;
  cfg.q = out.adaptive_q;

  auto conservative = std::async(std::launch::async, [&] {
    return solve_basic(p, x0, out.conservative_constants.mu, out.conservative_constants.L, cfg);
  });
  auto structured = std::async(std::launch::async,
                               [&] { return solve_with_beta(p, x0, out.structured_beta, cfg); });
  auto adaptive = std::async(std::launch::async,
                             [&] { return solve_adaptive(p, x0, out.adaptive_beta0, cfg); });
  out.conservative = conservative.get();
  out.structured = structured.get();
  out.adaptive = adaptive.get();
  return out;
}

OracleCheckReport run_oracle_check(std::uint64_t seed, int count, double tolerance) {
  if (count < 0) throw Error(ErrorCode::InvalidInput, "count must be nonnegative");
  if (!(tolerance > 0) || !std::isfinite(tolerance)) {
    throw Error(ErrorCode::InvalidInput, "tolerance must be positive and finite");
  }
  Rng rng(seed);
  OracleCheckReport report;
  for (int done = 0; done < count;) {
    const int m = rng.uniform_int(1, 4);
    const int n = rng.uniform_int(m, 6);
    LinearSystem<double> sys{rng.normal_matrix(m, n), rng.normal_vector(m)};
    if (!is_full_row_rank(sys.a)) continue;
    ++done;
    bool ok = true;
    for (NormKind k : {NormKind::L1, NormKind::LInf}) {
      const VectorXd z = min_norm(sys, k);
      const double residual = (sys.a * z - sys.b).norm();
      const double gap = std::abs(vector_norm(z, k) - oracle_min_norm(sys, k));
      if (gap > tolerance || residual > 1e-8 * std::max(1.0, sys.b.norm())) ok = false;
    }
    ok ? ++report.passed : ++report.failed;
  }
  return report;
}

}  // namespace undernewton
