#include <doctest.h>

#include "undernewton/error.hpp"
#include "undernewton/min_norm.hpp"
#include "undernewton/random.hpp"
#include "undernewton/simplex.hpp"

using namespace undernewton;

namespace {

ErrorCode code_of(const LinearProgram<double>& lp) {
  try {
    simplex_solve(lp);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidInput;
}

LinearSystem<double> row12() {
  MatrixXd a(1, 2);
  a << 1, 2;
  VectorXd b(1);
  b << 2;
  return {a, b};
}

}  // namespace

TEST_CASE("single-variable program") {
  LinearProgram<double> lp;
  lp.cost = VectorXd::Ones(1);
  lp.constraints = MatrixXd::Ones(1, 1);
  lp.rhs = VectorXd::Ones(1);
  const auto sol = simplex_solve(lp);
  CHECK(sol.value == doctest::Approx(1));
  CHECK(sol.x(0) == doctest::Approx(1));
}

TEST_CASE("norm reformulations of x1 + 2 x2 = 2") {
  CHECK(simplex_solve(l1_program(row12())).value == doctest::Approx(1));
  CHECK(simplex_solve(linf_program(row12())).value == doctest::Approx(2.0 / 3));
}

TEST_CASE("negative right-hand side and lower bounds") {
  // min x1 + x2  s.t.  x1 - x2 = -3,  x >= (1, 1)  ->  x = (1, 4).
  LinearProgram<double> lp;
  lp.cost = VectorXd::Ones(2);
  lp.constraints.resize(1, 2);
  lp.constraints << 1, -1;
  lp.rhs = VectorXd::Constant(1, -3);
  lp.lower = VectorXd::Ones(2);
  const auto sol = simplex_solve(lp);
  CHECK(sol.x(0) == doctest::Approx(1));
  CHECK(sol.x(1) == doctest::Approx(4));
  CHECK(sol.value == doctest::Approx(5));
}

TEST_CASE("infeasible, unbounded and malformed programs") {
  LinearProgram<double> infeasible;
  infeasible.cost = VectorXd::Ones(2);
  infeasible.constraints = MatrixXd::Ones(1, 2);
  infeasible.rhs = VectorXd::Constant(1, -1);
  CHECK(code_of(infeasible) == ErrorCode::LPInfeasible);

  LinearProgram<double> unbounded;
  unbounded.cost.resize(2);
  unbounded.cost << 0, -1;
  unbounded.constraints.resize(1, 2);
  unbounded.constraints << 1, -1;
  unbounded.rhs = VectorXd::Ones(1);
  CHECK(code_of(unbounded) == ErrorCode::LPUnbounded);

  LinearProgram<double> bad = infeasible;
  bad.cost = VectorXd::Ones(3);
  CHECK(code_of(bad) == ErrorCode::InvalidInput);
}

TEST_CASE("redundant equality rows are tolerated") {
  LinearProgram<double> lp;
  lp.cost.resize(3);
  lp.cost << 1, 2, 3;
  lp.constraints.resize(2, 3);
  lp.constraints << 1, 1, 1, 2, 2, 2;
  lp.rhs.resize(2);
  lp.rhs << 1, 2;
  const auto sol = simplex_solve(lp);
  CHECK(sol.value == doctest::Approx(1));
}

TEST_CASE("duals certify optimality on random programs") {
  // Strong duality b^T y = c^T x and dual feasibility c - A^T y >= 0.
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = rng.uniform_int(1, 4);
    const Index n = rng.uniform_int(static_cast<int>(m), 6);
    const LinearSystem<double> sys{rng.normal_matrix(m, n), rng.normal_vector(m)};
    for (const auto& lp : {l1_program(sys), linf_program(sys)}) {
      const auto sol = simplex_solve(lp);
      const VectorXd lower = lp.lower.size() ? lp.lower : VectorXd::Zero(lp.cost.size());
      CHECK((lp.constraints * sol.x - lp.rhs).norm() <= 1e-9 * std::max(1.0, lp.rhs.norm()));
      CHECK((sol.x - lower).minCoeff() >= -1e-12);
      const VectorXd reduced = lp.cost - lp.constraints.transpose() * sol.duals;
      CHECK(reduced.minCoeff() >= -1e-9);
      CHECK(lp.rhs.dot(sol.duals) - lp.constraints.transpose().row(0).dot(VectorXd::Zero(m)) +
                reduced.dot(lower) ==
            doctest::Approx(sol.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("long double instantiation agrees with double") {
  MatrixXd a(2, 4);
  a << 1, 2, 0, -1, 0, 1, 3, 1;
  VectorXd b(2);
  b << 1, 2;
  const LinearSystem<double> sys{a, b};
  const LinearSystem<long double> sys_ld{a.cast<long double>(), b.cast<long double>()};
  const auto d = simplex_solve(l1_program(sys));
  const auto ld = simplex_solve(l1_program(sys_ld));
  CHECK(static_cast<double>(ld.value) == doctest::Approx(d.value).epsilon(1e-14));
}

TEST_CASE("Bland's rule is deterministic") {
  Rng rng(22);
  const LinearSystem<double> sys{rng.normal_matrix(3, 6), rng.normal_vector(3)};
  const auto first = simplex_solve(l1_program(sys));
  const auto second = simplex_solve(l1_program(sys));
  CHECK(first.basis == second.basis);
  CHECK(first.x == second.x);
}
