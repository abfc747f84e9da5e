#include "undernewton/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "undernewton/error.hpp"
#include "undernewton/problems.hpp"
#include "undernewton/random.hpp"

namespace undernewton {

using nlohmann::json;

std::string_view to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Quadratic: return "quadratic";
    case ProblemKind::StructuredSigmoid: return "structured-sigmoid";
    case ProblemKind::LinearFeasibility: return "linear-feasibility";
    case ProblemKind::ScalarPolynomial: return "scalar-polynomial";
  }
  return "quadratic";
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvalidInput, "field '" + field + "': " + why);
}

ProblemKind parse_kind(const json& j) {
  if (!j.is_string()) fail("kind", "must be a string");
  const auto s = j.get<std::string>();
  if (s == "quadratic") return ProblemKind::Quadratic;
  if (s == "structured-sigmoid") return ProblemKind::StructuredSigmoid;
  if (s == "linear-feasibility") return ProblemKind::LinearFeasibility;
  if (s == "scalar-polynomial") return ProblemKind::ScalarPolynomial;
  fail("kind", "unknown kind '" + s + "'");
}

double read_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

Index read_dim(const json& root, const std::string& field) {
  if (!root.contains(field)) fail(field, "is required");
  const json& j = root.at(field);
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(field, "must be a positive integer");
  return static_cast<Index>(j.get<long long>());
}

VectorXd read_vector(const json& j, const std::string& field, Index length) {
  if (!j.is_array()) fail(field, "must be an array");
  if (static_cast<Index>(j.size()) != length) {
    fail(field, "expected " + std::to_string(length) + " entries, found " + std::to_string(j.size()));
  }
  VectorXd v(length);
  for (Index i = 0; i < length; ++i) v(i) = read_number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

MatrixXd read_matrix(const json& j, const std::string& field, Index rows, Index cols) {
  if (!j.is_array()) fail(field, "must be an array of rows");
  if (static_cast<Index>(j.size()) != rows) {
    fail(field, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  }
  MatrixXd a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    a.row(i) = read_vector(j[i], field + "[" + std::to_string(i) + "]", cols).transpose();
  }
  return a;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

std::set<std::string> payload_keys(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Quadratic: return {"A", "b", "y"};
    case ProblemKind::StructuredSigmoid: return {"C", "b", "y"};
    case ProblemKind::LinearFeasibility: return {"A", "b"};
    case ProblemKind::ScalarPolynomial: return {"terms"};
  }
  return {};
}

json vector_json(const VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const MatrixXd& a) {
  json out = json::array();
  for (Index i = 0; i < a.rows(); ++i) out.push_back(vector_json(a.row(i).transpose()));
  return out;
}

}  // namespace

bool ProblemFile::has_payload() const {
  if (kind == ProblemKind::ScalarPolynomial) return !terms.empty();
  return matrix.size() > 0;
}

ProblemFile parse_problem(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("<root>", "must be an object");

  if (!root.contains("format")) fail("format", "is required");
  if (!root.at("format").is_number_integer() || root.at("format").get<int>() != 1) {
    fail("format", "unsupported version (expected 1)");
  }
  if (!root.contains("kind")) fail("kind", "is required");

  ProblemFile file;
  file.kind = parse_kind(root.at("kind"));
  const auto payload = payload_keys(file.kind);
  std::set<std::string> allowed = {"format", "kind", "n", "m", "generator", "x0", "constants"};
  allowed.insert(payload.begin(), payload.end());
  reject_unknown(root, allowed, "");

  file.n = read_dim(root, "n");
  file.m = read_dim(root, "m");
  if (file.m > file.n) fail("m", "must not exceed n");
  if (file.kind == ProblemKind::ScalarPolynomial && file.m != 1) fail("m", "must be 1 for scalar-polynomial");

  if (root.contains("generator")) {
    const json& g = root.at("generator");
    if (!g.is_object()) fail("generator", "must be an object");
    reject_unknown(g, {"seed", "distribution"}, "generator");
    if (!g.contains("seed") || !g.at("seed").is_number_unsigned()) {
      fail("generator.seed", "must be a nonnegative integer");
    }
    GeneratorSpec spec;
    spec.seed = g.at("seed").get<std::uint64_t>();
    if (g.contains("distribution")) {
      if (!g.at("distribution").is_string() || g.at("distribution").get<std::string>() != "standard-normal") {
        fail("generator.distribution", "only 'standard-normal' is supported");
      }
    }
    if (file.kind == ProblemKind::ScalarPolynomial) fail("generator", "not available for scalar-polynomial");
    file.generator = spec;
  }

  std::size_t present = 0;
  for (const auto& key : payload) present += root.contains(key) ? 1 : 0;
  if (present == 0 && !file.generator) {
    fail(*payload.begin(), "payload is required when no generator is given");
  }
  if (present != 0 && present != payload.size()) {
    for (const auto& key : payload) {
      if (!root.contains(key)) fail(key, "is required alongside the rest of the payload");
    }
  }
  if (present != 0 && file.generator) fail("generator", "cannot be combined with an explicit payload");

  const Index n = file.n;
  const Index m = file.m;
  if (present != 0) {
    switch (file.kind) {
      case ProblemKind::Quadratic: {
        const json& a = root.at("A");
        if (!a.is_array() || static_cast<Index>(a.size()) != m) fail("A", "expected m matrices");
        for (Index i = 0; i < m; ++i) {
          file.a.push_back(read_matrix(a[i], "A[" + std::to_string(i) + "]", n, n));
        }
        file.matrix = read_matrix(root.at("b"), "b", m, n);
        file.y = read_vector(root.at("y"), "y", m);
        break;
      }
      case ProblemKind::StructuredSigmoid:
        file.matrix = read_matrix(root.at("C"), "C", m, n);
        file.offsets = read_vector(root.at("b"), "b", m);
        file.y = read_vector(root.at("y"), "y", m);
        break;
      case ProblemKind::LinearFeasibility:
        file.matrix = read_matrix(root.at("A"), "A", m, n);
        file.offsets = read_vector(root.at("b"), "b", m);
        break;
      case ProblemKind::ScalarPolynomial: {
        const json& terms = root.at("terms");
        if (!terms.is_array() || terms.empty()) fail("terms", "must be a non-empty array");
        for (std::size_t t = 0; t < terms.size(); ++t) {
          const std::string where = "terms[" + std::to_string(t) + "]";
          const json& term = terms[t];
          if (!term.is_object()) fail(where, "must be an object");
          reject_unknown(term, {"coef", "powers"}, where);
          if (!term.contains("coef")) fail(where + ".coef", "is required");
          if (!term.contains("powers")) fail(where + ".powers", "is required");
          PolynomialTerm pt;
          pt.coef = read_number(term.at("coef"), where + ".coef");
          const json& powers = term.at("powers");
          if (!powers.is_array() || static_cast<Index>(powers.size()) != n) {
            fail(where + ".powers", "expected n exponents");
          }
          for (const auto& p : powers) {
            if (!p.is_number_unsigned()) fail(where + ".powers", "exponents must be nonnegative integers");
            pt.powers.push_back(p.get<int>());
          }
          file.terms.push_back(std::move(pt));
        }
        break;
      }
    }
  }

  if (root.contains("x0")) file.x0 = read_vector(root.at("x0"), "x0", n);

  if (root.contains("constants")) {
    const json& c = root.at("constants");
    if (!c.is_object()) fail("constants", "must be an object");
    reject_unknown(c, {"mu", "mu0", "L", "rho", "beta0", "q", "alpha"}, "constants");
    auto read_opt = [&](const char* key, std::optional<double>& slot) {
      if (!c.contains(key)) return;
      const std::string field = std::string("constants.") + key;
      if (c.at(key).is_string() && c.at(key).get<std::string>() == "inf") {
        slot = std::numeric_limits<double>::infinity();
        return;
      }
      slot = read_number(c.at(key), field);
      if (!(*slot > 0)) fail(field, "must be positive");
    };
    read_opt("mu", file.constants.mu);
    read_opt("mu0", file.constants.mu0);
    read_opt("L", file.constants.L);
    read_opt("rho", file.constants.rho);
    read_opt("beta0", file.constants.beta0);
    read_opt("q", file.constants.q);
    read_opt("alpha", file.constants.alpha);
  }
  return file;
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open problem file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

std::string to_json(const ProblemFile& file) {
  json root;
  root["format"] = 1;
  root["kind"] = std::string(to_string(file.kind));
  root["n"] = file.n;
  root["m"] = file.m;
  if (file.has_payload()) {
    switch (file.kind) {
      case ProblemKind::Quadratic: {
        json a = json::array();
        for (const auto& ai : file.a) a.push_back(matrix_json(ai));
        root["A"] = a;
        root["b"] = matrix_json(file.matrix);
        root["y"] = vector_json(file.y);
        break;
      }
      case ProblemKind::StructuredSigmoid:
        root["C"] = matrix_json(file.matrix);
        root["b"] = vector_json(file.offsets);
        root["y"] = vector_json(file.y);
        break;
      case ProblemKind::LinearFeasibility:
        root["A"] = matrix_json(file.matrix);
        root["b"] = vector_json(file.offsets);
        break;
      case ProblemKind::ScalarPolynomial: {
        json terms = json::array();
        for (const auto& t : file.terms) terms.push_back({{"coef", t.coef}, {"powers", t.powers}});
        root["terms"] = terms;
        break;
      }
    }
  } else if (file.generator) {
    root["generator"] = {{"seed", file.generator->seed}, {"distribution", file.generator->distribution}};
  }
  if (file.x0) root["x0"] = vector_json(*file.x0);
  json constants = json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (!v) return;
    if (std::isinf(*v)) {
      constants[key] = "inf";
    } else {
      constants[key] = *v;
    }
  };
  put("mu", file.constants.mu);
  put("mu0", file.constants.mu0);
  put("L", file.constants.L);
  put("rho", file.constants.rho);
  put("beta0", file.constants.beta0);
  put("q", file.constants.q);
  put("alpha", file.constants.alpha);
  if (!constants.empty()) root["constants"] = constants;
  return root.dump(2);
}

ProblemFile materialize(ProblemFile file) {
  if (file.has_payload()) return file;
  if (!file.generator) throw Error(ErrorCode::InvalidInput, "problem has neither payload nor generator");
  Rng rng(file.generator->seed);
  const Index n = file.n;
  const Index m = file.m;
  switch (file.kind) {
    case ProblemKind::Quadratic:
      file.a.clear();
      for (Index i = 0; i < m; ++i) {
        const MatrixXd g = rng.normal_matrix(n, n);
        file.a.push_back(0.5 * (g + g.transpose()));
      }
      file.matrix = rng.normal_matrix(m, n);
      file.y = rng.normal_vector(m);
      break;
    case ProblemKind::StructuredSigmoid:
      file.matrix = rng.normal_matrix(m, n);
      file.offsets = rng.normal_vector(m);
      file.y = rng.normal_vector(m);
      break;
    case ProblemKind::LinearFeasibility: {
      file.matrix = rng.normal_matrix(m, n);
      const VectorXd x = rng.normal_vector(n).cwiseAbs();
      file.offsets = file.matrix * x;
      break;
    }
    case ProblemKind::ScalarPolynomial:
      throw Error(ErrorCode::InvalidInput, "field 'generator': not available for scalar-polynomial");
  }
  file.generator.reset();
  return file;
}

double polynomial_value(const std::vector<PolynomialTerm>& terms, const VectorXd& x) {
  double total = 0;
  for (const auto& t : terms) {
    double v = t.coef;
    for (Index j = 0; j < x.size(); ++j) v *= std::pow(x(j), t.powers[j]);
    total += v;
  }
  return total;
}

VectorXd polynomial_gradient(const std::vector<PolynomialTerm>& terms, const VectorXd& x) {
  VectorXd g = VectorXd::Zero(x.size());
  for (const auto& t : terms) {
    for (Index d = 0; d < x.size(); ++d) {
      if (t.powers[d] == 0) continue;
      double v = t.coef * t.powers[d] * std::pow(x(d), t.powers[d] - 1);
      for (Index j = 0; j < x.size(); ++j) {
        if (j != d) v *= std::pow(x(j), t.powers[j]);
      }
      g(d) += v;
    }
  }
  return g;
}

ProblemDefinition build_problem(const ProblemFile& raw) {
  const ProblemFile file = materialize(raw);
  switch (file.kind) {
    case ProblemKind::Quadratic:
      return to_problem(make_quadratic(file.a, file.matrix, file.y));
    case ProblemKind::StructuredSigmoid:
      return to_problem(make_sigmoid_problem(file.matrix, file.offsets, file.y));
    case ProblemKind::LinearFeasibility:
      return linear_feasibility_transform(file.matrix, file.offsets);
    case ProblemKind::ScalarPolynomial: {
      auto terms = std::make_shared<const std::vector<PolynomialTerm>>(file.terms);
      ScalarProblem sp;
      sp.n = file.n;
      sp.f = [terms](const VectorXd& x) { return polynomial_value(*terms, x); };
      sp.gradient = [terms](const VectorXd& x) { return polynomial_gradient(*terms, x); };
      return to_problem(sp);
    }
  }
  throw Error(ErrorCode::InvalidInput, "unsupported problem kind");
}

VectorXd initial_point(const ProblemFile& file) {
  if (file.x0) return *file.x0;
  if (file.kind == ProblemKind::LinearFeasibility) return VectorXd::Ones(file.n);
  return VectorXd::Zero(file.n);
}

}  // namespace undernewton
