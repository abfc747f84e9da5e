#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
Run cli(const std::string& args) {
  const std::string cmd = std::string("\"") + UNDERNEWTON_CLI_PATH + "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int rc = ::pclose(pipe);
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Scratch {
  fs::path root;
  Scratch() {
    root = fs::temp_directory_path() / ("undernewton_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = root / name;
    std::ofstream(p) << text;
    return "\"" + p.string() + "\"";
  }
  std::string dir(const std::string& name) const { return "\"" + (root / name).string() + "\""; }
};

const char* kQuadratic = R"({"format": 1, "kind": "quadratic", "n": 1, "m": 1,
  "A": [[[1]]], "b": [[1]], "y": [0.105], "constants": {"mu": 1, "L": 1}})";

}  // namespace

TEST_CASE("solve the 1-D quadratic") {
  Scratch s;
  const std::string file = s.write("q.json", kQuadratic);

  const Run basic = cli("solve " + file + " --algorithm basic");
  CHECK(basic.code == 0);
  const auto summary = nlohmann::json::parse(basic.out);
  CHECK(summary.at("status") == "Converged");
  CHECK(summary.at("final_residual").get<double>() <= 1e-10);
  CHECK(summary.at("x")[0].get<double>() == doctest::Approx(0.1).epsilon(1e-9));

  const Run pure = cli("solve " + file + " --algorithm pure");
  CHECK(pure.code == 0);
  CHECK(nlohmann::json::parse(pure.out).at("iterations").get<int>() <= 6);

  const Run adaptive = cli("solve " + file + " --algorithm adaptive --beta0 1 --q 0.5");
  CHECK(adaptive.code == 0);
  const Run l_variant = cli("solve " + file + " --algorithm L");
  CHECK(l_variant.code == 0);
}

TEST_CASE("input errors exit with code 1") {
  Scratch s;
  const std::string no_l = s.write("no_l.json", R"({"format": 1, "kind": "quadratic", "n": 1, "m": 1,
    "A": [[[1]]], "b": [[1]], "y": [0.105], "constants": {"mu": 1}})");
  const Run missing = cli("solve " + no_l + " --algorithm basic");
  CHECK(missing.code == 1);
  CHECK(missing.out.find("constants.L") != std::string::npos);

  // A flag supplies the missing constant.
  CHECK(cli("solve " + no_l + " --algorithm basic --L 1").code == 0);

  const std::string bad = s.write("bad.json", R"({"format": 1, "kind": "quadratic", "n": 1, "m": 1,
    "A": [[[1]]], "b": [[1]], "y": [0.105], "colour": 3})");
  const Run malformed = cli("solve " + bad);
  CHECK(malformed.code == 1);
  CHECK(malformed.out.find("'colour'") != std::string::npos);

  CHECK(cli("solve /nonexistent/problem.json").code == 1);
  CHECK(cli("solve " + s.write("q.json", kQuadratic) + " --algorithm newton").code == 1);
  CHECK(cli("").code == 1);
}

TEST_CASE("non-convergence exits with code 2") {
  Scratch s;
  const std::string file = s.write("q.json", kQuadratic);
  const Run r = cli("--max-iter 1 solve " + file + " --algorithm basic");
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(r.out).at("status") == "MaxIter");
}

TEST_CASE("certify") {
  Scratch s;
  const Run r = cli("certify " + s.write("q.json", kQuadratic));
  CHECK(r.code == 0);
  CHECK(r.out.find("thm5_radius: 0.25  inside: yes") != std::string::npos);
  CHECK(r.out.find("thm6_radius: 0.18771782") != std::string::npos);

  // Scaled instance: mu0 = 2, L1 = 3 gives 0.1877178 * 4 / 3.
  const Run scaled = cli("certify " + s.write("scaled.json", R"({"format": 1, "kind": "quadratic", "n": 1, "m": 1,
    "A": [[[3]]], "b": [[2]], "y": [0.9]})"));
  CHECK(scaled.code == 0);
  const auto at = scaled.out.find("thm6_radius: ");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(scaled.out.substr(at + 13)) == doctest::Approx(0.1877178 * 4 / 3).epsilon(1e-6));
  CHECK(scaled.out.find("inside: no") != std::string::npos);

  const Run degenerate = cli("certify " + s.write("rd.json", R"({"format": 1, "kind": "quadratic", "n": 2, "m": 1,
    "A": [[[1, 0], [0, 1]]], "b": [[0, 0]], "y": [0.105]})"));
  CHECK(degenerate.code == 0);
  CHECK(degenerate.out.find("no region") != std::string::npos);
}

TEST_CASE("trace files") {
  Scratch s;
  const std::string file = s.write("q.json", kQuadratic);
  REQUIRE(cli("--out " + s.dir("a") + " solve " + file + " --algorithm basic").code == 0);
  REQUIRE(cli("--out " + s.dir("b") + " solve " + file + " --algorithm basic").code == 0);
  const std::string a = slurp(s.root / "a" / "trace.csv");
  const std::string b = slurp(s.root / "b" / "trace.csv");
  CHECK(a == b);
  REQUIRE(a.find('\n') != std::string::npos);
  CHECK(a.substr(0, a.find('\n')) == "k,u,alpha,beta,stage,step_norm,inner");
  // Row 0 carries u0 = 0.105 at full precision.
  CHECK(a.find("\n0,0.105,") != std::string::npos);
  CHECK(a.find("0.0055125000000000035") != std::string::npos);
  CHECK(fs::exists(s.root / "a" / "summary.json"));
}

TEST_CASE("oracle-check") {
  const Run none = cli("oracle-check --count 0");
  CHECK(none.code == 0);
  CHECK(none.out.find("passed: 0") != std::string::npos);
  const Run some = cli("oracle-check --count 5");
  CHECK(some.code == 0);
  CHECK(some.out.find("failed: 0") != std::string::npos);
  CHECK(cli("oracle-check --tolerance -1").code != 0);
  CHECK(cli("oracle-check --count -3").code != 0);
}
