#include <catch2/catch.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fqsde/cli.hpp"

using namespace fqsde;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fqsde");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fqsde_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string config(const std::string& name) { return std::string(FQSDE_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("bihari subcommand", "[cli]") {
  Run r = run({"bihari", "--rho", "linear", "--u0", "1", "--phi", "1", "--horizon", "1", "--L", "1"});
  REQUIRE(r.code == kExitOk);
  REQUIRE(r.out == "2.718282\n");
  r = run({"bihari", "--rho", "log", "--u0", "0"});
  REQUIRE(r.code == kExitOk);
  REQUIRE(r.out == "0.000000\n");
  r = run({"bihari", "--rho", "sqrt"});
  REQUIRE(r.code == kExitBadConfig);
  REQUIRE(r.err.find("[--rho]") != std::string::npos);
  REQUIRE(run({"bihari", "--L", "0"}).code == kExitBadConfig);
}

TEST_CASE("argument errors exit with status 2 and usage", "[cli]") {
  Run r = run({"verify", "--bogus"});
  REQUIRE(r.code == kExitBadConfig);
  REQUIRE(r.err.find("verify") != std::string::npos);
  REQUIRE(run({}).code == kExitBadConfig);
  r = run({"verify", "--suite", "nope"});
  REQUIRE(r.code == kExitBadConfig);
  REQUIRE(r.err.find("[--suite]") != std::string::npos);
  REQUIRE(run({"--help"}).code == kExitOk);
  REQUIRE(run({"solve"}).code == kExitBadConfig);
}

TEST_CASE("verify writes a sorted CSV", "[cli]") {
  const auto path = scratch("car.csv");
  Run r = run({"verify", "--suite", "car_identity", "--n", "2,4", "--out", path.string(), "--seed", "5"});
  REQUIRE(r.code == kExitOk);
  REQUIRE(r.out.rfind("car_identity PASS", 0) == 0);
  const std::string csv = slurp(path);
  REQUIRE(csv.rfind("suite,cell,statistic,value\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') > 3);
  r = run({"verify", "--suite", "car_identity", "--n", "2,4", "--out", "-", "--seed", "5"});
  REQUIRE(r.out.find(csv) != std::string::npos);
}

TEST_CASE("solve emits trajectory and trace", "[cli]") {
  const auto out = scratch("zero.csv");
  Run r = run({"solve", "--config", config("zero.qsde"), "--out", out.string()});
  REQUIRE(r.code == kExitOk);
  REQUIRE(r.out.rfind("solve PASS iterations=1", 0) == 0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  REQUIRE(line == "node,time,lp_norm,residual,selfadjoint_defect");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    REQUIRE(line.find(",1,0,0") != std::string::npos);
  }
  REQUIRE(rows == 7);
  REQUIRE(slurp(out.string() + ".trace.csv").rfind("iteration,delta,inner_iterations\n1,0,", 0) == 0);

  const auto trace = scratch("nl_trace.csv");
  r = run({"solve", "--config", config("linear_nonlocal.qsde"), "--trace", trace.string()});
  REQUIRE(r.code == kExitOk);
  REQUIRE(r.out.rfind("node,time", 0) == 0);
  REQUIRE(r.err.find("solve PASS") != std::string::npos);
}

TEST_CASE("solve reports configuration errors and non-convergence", "[cli]") {
  const auto bad = scratch("bad.qsde");
  std::ofstream(bad) << "grid.n = 4\nF.nmae = linear\n";
  Run r = run({"solve", "--config", bad.string()});
  REQUIRE(r.code == kExitBadConfig);
  REQUIRE(r.err.find("[F.nmae]") != std::string::npos);

  const auto slow = scratch("slow.qsde");
  std::ofstream(slow) << "problem = linear_mixed\nsolve.max_outer = 2\n";
  const auto trace = scratch("slow_trace.csv");
  std::filesystem::remove(trace);
  r = run({"solve", "--config", slow.string(), "--trace", trace.string(), "--out", scratch("slow.csv").string()});
  REQUIRE(r.code == kExitNonConvergence);
  REQUIRE(r.err.find(trace.string()) != std::string::npos);
  const std::string t = slurp(trace);
  REQUIRE(std::count(t.begin(), t.end(), '\n') == 3);
  REQUIRE(run({"solve", "--config", "/nonexistent.qsde"}).code == kExitBadConfig);
}

TEST_CASE("bench-constants", "[cli]") {
  Run r = run({"bench-constants", "--p", "2,4", "--trials", "5", "--n", "3", "--seed", "9"});
  REQUIRE(r.code == kExitOk);
  REQUIRE(r.out.rfind("cell,statistic,value\n", 0) == 0);
  REQUIRE(r.out.find("beta_hat") != std::string::npos);
  REQUIRE(run({"bench-constants", "--p", "1.5"}).code == kExitBadConfig);
  REQUIRE(run({"bench-constants", "--driver", "qubit"}).code == kExitBadConfig);
}
