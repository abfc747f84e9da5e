#include <doctest.h>

#include <cmath>
#include <string>

#include "undernewton/error.hpp"
#include "undernewton/problem_file.hpp"

using namespace undernewton;

namespace {

// Message of the InvalidInput error raised for `text`, or "" if it parses.
std::string parse_error(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
    return e.what();
  }
  return "";
}

const char* kQuadratic = R"({
  "format": 1, "kind": "quadratic", "n": 2, "m": 1,
  "A": [[[2, 0], [0, 2]]],
  "b": [[1, 0]],
  "y": [0.5],
  "constants": {"mu0": 1, "L": 2, "rho": "inf"}
})";

}  // namespace

TEST_CASE("explicit quadratic file") {
  const auto file = parse_problem(kQuadratic);
  CHECK(file.kind == ProblemKind::Quadratic);
  CHECK(file.n == 2);
  CHECK(file.m == 1);
  REQUIRE(file.a.size() == 1);
  CHECK(file.a[0](1, 1) == 2);
  CHECK(file.matrix(0, 0) == 1);
  CHECK(file.y(0) == 0.5);
  CHECK(*file.constants.L == 2);
  CHECK(std::isinf(*file.constants.rho));
  CHECK_FALSE(file.constants.mu);
  CHECK(initial_point(file).isZero(0));

  // g(x) = x1^2 + x2^2 + x1, residual g - 0.5.
  const auto p = build_problem(file);
  VectorXd x(2);
  x << 1, 2;
  CHECK(p.evaluate(x)(0) == doctest::Approx(5.5));
  const MatrixXd j = p.jacobian_at(x);
  CHECK(j(0, 0) == doctest::Approx(3));
  CHECK(j(0, 1) == doctest::Approx(4));
}

TEST_CASE("round trip through to_json") {
  const auto file = parse_problem(kQuadratic);
  const auto again = parse_problem(to_json(file));
  CHECK(again.a[0] == file.a[0]);
  CHECK(again.matrix == file.matrix);
  CHECK(again.y == file.y);
  CHECK(std::isinf(*again.constants.rho));
  CHECK(to_json(again) == to_json(file));
}

TEST_CASE("format, kind and unknown keys") {
  CHECK(parse_error(R"({"kind": "quadratic", "n": 1, "m": 1})").find("'format'") != std::string::npos);
  CHECK(parse_error(R"({"format": 2, "kind": "quadratic"})").find("'format'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "cubic", "n": 1, "m": 1})").find("'kind'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "quadratic", "n": 1, "m": 1,
                        "generator": {"seed": 1}, "extra": 3})")
            .find("'extra'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "quadratic", "n": 1, "m": 1,
                        "generator": {"seed": 1}, "constants": {"beta": 1}})")
            .find("'constants.beta'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "quadratic", "n": 1, "m": 1,
                        "generator": {"seed": 1}, "constants": {"L": -1}})")
            .find("'constants.L'") != std::string::npos);
  CHECK(parse_error("[1, 2").find("malformed JSON") != std::string::npos);
}

TEST_CASE("dimension checks name the field") {
  CHECK(parse_error(R"({"format": 1, "kind": "structured-sigmoid", "n": 1, "m": 2,
                        "generator": {"seed": 1}})")
            .find("'m'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "structured-sigmoid", "n": 2, "m": 1,
                        "C": [[1, 2]], "b": [0, 0], "y": [1]})")
            .find("'b'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "structured-sigmoid", "n": 2, "m": 1,
                        "C": [[1, 2]], "y": [1]})")
            .find("'b'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "linear-feasibility", "n": 2, "m": 1,
                        "A": [[1, 2]], "b": [3], "generator": {"seed": 1}})")
            .find("'generator'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "structured-sigmoid", "n": 2, "m": 1})").find("payload") !=
        std::string::npos);
}

TEST_CASE("generated payloads are deterministic") {
  const char* text = R"({"format": 1, "kind": "quadratic", "n": 4, "m": 2, "generator": {"seed": 11}})";
  const auto a = materialize(parse_problem(text));
  const auto b = materialize(parse_problem(text));
  CHECK_FALSE(a.generator);
  REQUIRE(a.a.size() == 2);
  CHECK(a.a[0] == b.a[0]);
  CHECK(a.a[1] == b.a[1]);
  CHECK(a.a[0] == a.a[0].transpose());
  CHECK(a.matrix == b.matrix);
  CHECK(a.y == b.y);

  const auto other = materialize(parse_problem(
      R"({"format": 1, "kind": "quadratic", "n": 4, "m": 2, "generator": {"seed": 12}})"));
  CHECK(other.matrix != a.matrix);

  // The materialised file reproduces the same problem when written out.
  const auto reread = parse_problem(to_json(a));
  CHECK(reread.a[1] == a.a[1]);
  CHECK(reread.y == a.y);
}

TEST_CASE("generated linear feasibility has a nonnegative solution") {
  const auto file = materialize(parse_problem(
      R"({"format": 1, "kind": "linear-feasibility", "n": 5, "m": 3, "generator": {"seed": 3}})"));
  CHECK(file.matrix.rows() == 3);
  CHECK(file.offsets.size() == 3);
  CHECK(initial_point(file) == VectorXd::Ones(5));
  const auto p = build_problem(file);
  CHECK(p.m == 3);
  CHECK(p.n == 5);
}

TEST_CASE("scalar polynomial") {
  // f(x) = x1^2 x2 - 3 x2 + 1
  const auto file = parse_problem(R"({
    "format": 1, "kind": "scalar-polynomial", "n": 2, "m": 1,
    "terms": [{"coef": 1, "powers": [2, 1]}, {"coef": -3, "powers": [0, 1]}, {"coef": 1, "powers": [0, 0]}],
    "x0": [1, 1]
  })");
  VectorXd x(2);
  x << 2, 3;
  CHECK(polynomial_value(file.terms, x) == doctest::Approx(4));
  const VectorXd g = polynomial_gradient(file.terms, x);
  CHECK(g(0) == doctest::Approx(12));
  CHECK(g(1) == doctest::Approx(1));
  CHECK(initial_point(file) == VectorXd::Ones(2));

  const auto p = build_problem(file);
  CHECK(p.evaluate(x)(0) == doctest::Approx(4));
  CHECK(p.jacobian_at(x)(0, 0) == doctest::Approx(12));

  CHECK(parse_error(R"({"format": 1, "kind": "scalar-polynomial", "n": 2, "m": 1,
                        "terms": [{"coef": 1, "powers": [1]}]})")
            .find("'terms[0].powers'") != std::string::npos);
  CHECK(parse_error(R"({"format": 1, "kind": "scalar-polynomial", "n": 2, "m": 1,
                        "terms": [{"coef": 1, "powers": [1, -1]}]})")
            .find("powers") != std::string::npos);
}

TEST_CASE("x0 length is checked") {
  CHECK(parse_error(R"({"format": 1, "kind": "quadratic", "n": 2, "m": 1,
                        "generator": {"seed": 1}, "x0": [1]})")
            .find("'x0'") != std::string::npos);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_problem_file("/nonexistent/problem.json"), Error);
}
