// undernewton: command-line front end.
//
//   undernewton solve FILE --algorithm basic --mu 1 --L 1 --out run/
//   undernewton certify FILE
//   undernewton bench-paper --seed 7 --out bench/
//   undernewton oracle-check --seed 1 --count 200
//
// Exit codes: 0 converged / pass, 1 usage or input error, 2 non-convergence.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "undernewton/bench.hpp"
#include "undernewton/error.hpp"
#include "undernewton/newton.hpp"
#include "undernewton/problem_file.hpp"
#include "undernewton/problems.hpp"
#include "undernewton/theory.hpp"
#include "undernewton/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace undernewton;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;

struct GlobalOptions {
  std::uint64_t seed = 7;
  std::string out;
  std::string norm_domain = "l2";
  std::string norm_image = "l2";
  std::optional<double> tol;
  int max_iter = 500;
};

struct SolveOptions {
  std::string file;
  std::string algorithm = "basic";
  std::optional<double> mu, L, beta0, q, alpha, rho;
  std::string trace_path;
  std::string summary_path;
};

struct CertifyOptions {
  std::string file;
  std::string summary_path;
};

struct OracleOptions {
  int count = 200;
  double tolerance = 1e-9;
};

json real_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

json vector_json(const VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(real_json(v(i)));
  return out;
}

json outcome_json(const SolveOutcome& o) {
  return {{"status", std::string(to_string(o.status))},
          {"iterations", o.iterations()},
          {"stage1_count", o.stage1_count},
          {"inner_reductions", o.total_inner_reductions},
          {"final_residual", real_json(o.final_residual)},
          {"stop_tol", real_json(o.stop_tol)}};
}

void write_text(const std::string& path, const std::string& text) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
  out << text;
}

std::string output_path(const std::string& explicit_path, const GlobalOptions& g, const char* name) {
  if (!explicit_path.empty()) return explicit_path;
  if (!g.out.empty()) return (fs::path(g.out) / name).string();
  return {};
}

SolverConfig make_config(const GlobalOptions& g) {
  SolverConfig cfg;
  const auto domain = parse_norm(g.norm_domain);
  const auto image = parse_norm(g.norm_image);
  if (!domain) throw Error(ErrorCode::InvalidInput, "--norm-domain must be l1, l2 or linf");
  if (!image) throw Error(ErrorCode::InvalidInput, "--norm-image must be l1, l2 or linf");
  cfg.domain_norm = *domain;
  cfg.image_norm = *image;
  cfg.stop_tol = g.tol;
  cfg.max_iter = g.max_iter;
  cfg.validate();
  return cfg;
}

double require_constant(const std::optional<double>& v, const char* name, const std::string& algorithm) {
  if (!v) {
    throw Error(ErrorCode::InvalidInput,
                std::string("field 'constants.") + name + "': required by algorithm " + algorithm);
  }
  return *v;
}

int cmd_solve(const GlobalOptions& g, const SolveOptions& o) {
  const ProblemFile file = materialize(load_problem_file(o.file));
  SolverConfig cfg = make_config(g);

  const ProblemConstants& c = file.constants;
  const auto pick = [](const std::optional<double>& flag, const std::optional<double>& fromfile) {
    return flag ? flag : fromfile;
  };
  const auto mu = pick(o.mu, c.mu);
  const auto L = pick(o.L, c.L);
  const auto beta0 = pick(o.beta0, c.beta0);
  const auto q = pick(o.q, c.q);
  const auto alpha = pick(o.alpha, c.alpha);
  if (const auto rho = pick(o.rho, c.rho)) cfg.trust_radius = *rho;

  const ProblemDefinition p = build_problem(file);
  const VectorXd x0 = initial_point(file);

  const auto start = std::chrono::steady_clock::now();
  SolveOutcome outcome;
  if (o.algorithm == "basic") {
    const double mu_v = require_constant(mu, "mu", o.algorithm);
    const double L_v = require_constant(L, "L", o.algorithm);
    outcome = solve_basic(p, x0, mu_v, L_v, cfg);
  } else if (o.algorithm == "adaptive") {
    const double beta0_v = require_constant(beta0, "beta0", o.algorithm);
    cfg.q = require_constant(q, "q", o.algorithm);
    cfg.validate();
    outcome = solve_adaptive(p, x0, beta0_v, cfg);
  } else if (o.algorithm == "L") {
    outcome = solve_L(p, x0, require_constant(L, "L", o.algorithm), cfg);
  } else if (o.algorithm == "pure") {
    outcome = solve_pure(p, x0, cfg);
  } else if (o.algorithm == "constant") {
    outcome = solve_damped_constant(p, x0, require_constant(alpha, "alpha", o.algorithm), cfg);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown algorithm '" + o.algorithm + "'");
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json summary = outcome_json(outcome);
  summary["algorithm"] = o.algorithm;
  summary["kind"] = std::string(to_string(file.kind));
  summary["wall_time_s"] = seconds;
  summary["x"] = vector_json(outcome.x);

  if (const auto path = output_path(o.trace_path, g, "trace.csv"); !path.empty()) {
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    write_trace_csv(path, outcome);
  }
  if (const auto path = output_path(o.summary_path, g, "summary.json"); !path.empty()) {
    write_text(path, summary.dump(2) + "\n");
  }
  std::cout << summary.dump(2) << "\n";
  return outcome.converged() ? kExitOk : kExitNoConvergence;
}

int cmd_certify(const GlobalOptions& g, const CertifyOptions& o) {
  const ProblemFile file = materialize(load_problem_file(o.file));
  json cert;
  cert["kind"] = std::string(to_string(file.kind));

  double mu0 = 0;
  double L = 0;
  double y_norm = 0;
  if (file.kind == ProblemKind::Quadratic) {
    const QuadraticProblem q = make_quadratic(file.a, file.matrix, file.y, &std::cerr);
    mu0 = file.constants.mu0.value_or(quadratic_mu0(q));
    L = file.constants.L.value_or(quadratic_L1(q));
    y_norm = q.y.norm();
  } else {
    if (!file.constants.mu0 || !file.constants.L) {
      throw Error(ErrorCode::InvalidInput,
                  "field 'constants': mu0 and L are required to certify a non-quadratic problem");
    }
    mu0 = *file.constants.mu0;
    L = *file.constants.L;
    const ProblemDefinition p = build_problem(file);
    y_norm = p.evaluate(initial_point(file)).norm();
  }
  cert["mu0"] = mu0;
  cert["L1"] = L;
  cert["y_norm"] = y_norm;
  std::cout << "kind: " << to_string(file.kind) << "\n"
            << "mu0: " << format_real(mu0) << "\n"
            << "L1: " << format_real(L) << "\n"
            << "y_norm: " << format_real(y_norm) << "\n";

  auto report = [&](const char* name, const theory::SolvabilityRegion& r) {
    const bool inside = r.contains(y_norm);
    cert[name] = {{"radius_y", real_json(r.radius_y)},
                  {"radius_x", real_json(r.radius_x)},
                  {"source", std::string(theory::to_string(r.source))},
                  {"inside", inside}};
    std::cout << name << "_radius: " << format_real(r.radius_y) << "  inside: " << (inside ? "yes" : "no")
              << "\n";
  };

  if (!(mu0 > 0)) {
    cert["region"] = "none";
    std::cout << "mu0 = 0, no region\n";
  } else if (!(L > 0)) {
    cert["region"] = "unbounded";
    std::cout << "L1 = 0, linear map: every y is reachable\n";
  } else {
    report("thm5", theory::region_thm5(mu0, L));
    if (file.constants.rho) report("thm2", theory::region_thm2(mu0, L, *file.constants.rho));
    report("thm6", theory::region_thm6(mu0, L));
    const auto& k = theory::region_constants();
    cert["s1"] = k.s1;
    cert["t1"] = k.t1;
    std::cout << "s1: " << format_real(k.s1) << "\n"
              << "t1: " << format_real(k.t1) << "\n";
  }
  if (const auto path = output_path(o.summary_path, g, "certificate.json"); !path.empty()) {
    write_text(path, cert.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_bench_paper(const GlobalOptions& g) {
  const fs::path dir = g.out.empty() ? fs::path("bench-paper") : fs::path(g.out);
  fs::create_directories(dir);
  const SigmoidBenchmark bench = run_sigmoid_benchmark(g.seed);
  write_trace_csv((dir / "trace_conservative.csv").string(), bench.conservative);
  write_trace_csv((dir / "trace_structured.csv").string(), bench.structured);
  write_trace_csv((dir / "trace_adaptive.csv").string(), bench.adaptive);

  json summary;
  summary["seed"] = g.seed;
  summary["n"] = 60;
  summary["m"] = 21;
  summary["u0"] = bench.u0;
  summary["conservative"] = outcome_json(bench.conservative);
  summary["conservative"]["mu"] = bench.conservative_constants.mu;
  summary["conservative"]["L"] = bench.conservative_constants.L;
  summary["conservative"]["beta"] = bench.conservative_beta;
  summary["conservative"]["k_max"] = theory::k_max_beta(bench.u0, bench.conservative_beta);
  summary["structured"] = outcome_json(bench.structured);
  summary["structured"]["beta"] = bench.structured_beta;
  summary["structured"]["k_max"] = theory::k_max_beta(bench.u0, bench.structured_beta);
  summary["adaptive"] = outcome_json(bench.adaptive);
  summary["adaptive"]["beta0"] = bench.adaptive_beta0;
  summary["adaptive"]["q"] = bench.adaptive_q;
  write_text((dir / "summary.json").string(), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";

  const bool all = bench.conservative.converged() && bench.structured.converged() &&
                   bench.adaptive.converged();
  return all ? kExitOk : kExitNoConvergence;
}

int cmd_oracle_check(const GlobalOptions& g, const OracleOptions& o) {
  const OracleCheckReport r = run_oracle_check(g.seed, o.count, o.tolerance);
  std::cout << "passed: " << r.passed << "\nfailed: " << r.failed << "\n";
  return r.failed == 0 ? kExitOk : kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton-type solver for underdetermined nonlinear systems"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for generated problems");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--norm-domain", g.norm_domain, "Norm on R^n")->check(CLI::IsMember({"l1", "l2", "linf"}));
  app.add_option("--norm-image", g.norm_image, "Norm on R^m")->check(CLI::IsMember({"l1", "l2", "linf"}));
  app.add_option("--tol", g.tol, "Stop once ||P(x)|| <= tol");
  app.add_option("--max-iter", g.max_iter, "Iteration limit");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run a solver on a problem file");
  solve_cmd->add_option("file", solve.file, "Problem file")->required();
  solve_cmd->add_option("--algorithm", solve.algorithm, "basic | adaptive | L | pure | constant")
      ->check(CLI::IsMember({"basic", "adaptive", "L", "pure", "constant"}));
  solve_cmd->add_option("--mu", solve.mu, "Covering constant");
  solve_cmd->add_option("--L", solve.L, "Lipschitz constant of the Jacobian");
  solve_cmd->add_option("--beta0", solve.beta0, "Initial beta for the adaptive scheme");
  solve_cmd->add_option("--q", solve.q, "Reduction factor for the adaptive scheme");
  solve_cmd->add_option("--alpha", solve.alpha, "Step size for the constant scheme");
  solve_cmd->add_option("--rho", solve.rho, "Trust radius around x0");
  solve_cmd->add_option("--trace", solve.trace_path, "Trace CSV path");
  solve_cmd->add_option("--summary", solve.summary_path, "Summary JSON path");

  CertifyOptions certify;
  auto* certify_cmd = app.add_subcommand("certify", "Print solvability certificates");
  certify_cmd->add_option("file", certify.file, "Problem file")->required();
  certify_cmd->add_option("--summary", certify.summary_path, "Certificate JSON path");

  auto* bench_cmd = app.add_subcommand("bench-paper", "Run the n=60, m=21 sigmoid benchmark");

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Check LP substeps against enumeration");
  oracle_cmd->add_option("--count", oracle.count, "Number of random systems");
  oracle_cmd->add_option("--tolerance", oracle.tolerance, "Allowed gap in optimal norm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(g, solve);
    if (*certify_cmd) return cmd_certify(g, certify);
    if (*bench_cmd) return cmd_bench_paper(g);
    if (*oracle_cmd) return cmd_oracle_check(g, oracle);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
