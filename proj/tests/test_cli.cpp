#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path log = dir / "cli_output.txt";
  const std::string cmd =
      std::string(PAINLEVE_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream is(log);
  std::stringstream ss;
  ss << is.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("painleve_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("solve: exact solution lands in the csv") {
  const auto dir = fresh_dir("solve0");
  auto r = run_cli("solve --a 0 --x-max 100 --tol 1e-12 --out-dir " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "trajectory.csv"));
  std::ifstream is(dir / "trajectory.csv");
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,phi,dphi");
  double worst = 0.0;
  while (std::getline(is, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    const double x = std::stod(line.substr(0, c1));
    const double phi = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    worst = std::max(worst, std::fabs(phi - x));
  }
  CHECK(worst <= 1e-10);
  CHECK(fs::exists(dir / "run_record_solve.json"));
}

TEST_CASE("solve: crossing list and flag validation") {
  const auto dir = fresh_dir("solve2");
  auto r = run_cli("solve --a 0.2 --x-max 400 --out-dir " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  const std::string summary = slurp(dir / "solve_summary.json");
  CHECK(summary.find("x_star") != std::string::npos);

  auto bad = run_cli("solve --a 0.2 --x-max -5", dir);
  CHECK(bad.exit_code == 1);
  // numeric preconditions also count as bad parameters
  auto bad2 = run_cli("solve --a 0.2 --x-max 0.001 --out-dir " + dir.string(), dir);
  CHECK(bad2.exit_code == 1);
  auto bad3 = run_cli("solve --a 0.2 --x-max 100 --tol 1e-3 --out-dir " + dir.string(), dir);
  CHECK(bad3.exit_code == 1);
}

TEST_CASE("deterministic outputs") {
  const auto d1 = fresh_dir("det1");
  const auto d2 = fresh_dir("det2");
  CHECK(run_cli("solve --a 0.3 --x-max 50 --out-dir " + d1.string(), d1).exit_code == 0);
  CHECK(run_cli("solve --a 0.3 --x-max 50 --out-dir " + d2.string(), d2).exit_code == 0);
  CHECK(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));
  CHECK(slurp(d1 / "solve_summary.json") == slurp(d2 / "solve_summary.json"));
}

TEST_CASE("predict banner near the separatrix") {
  const auto dir = fresh_dir("predict");
  auto r = run_cli("predict --a 0.31830988618 --out-dir " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("separatrix") != std::string::npos);
  auto r2 = run_cli("predict --a 0.2 --out-dir " + dir.string(), dir);
  CHECK(r2.output.find("regime B") != std::string::npos);
}

TEST_CASE("environment variable sets the default output root") {
  const auto dir = fresh_dir("envout");
  const auto log_dir = fresh_dir("envout_log");
  const std::string cmd = "PAINLEVE_OUT_DIR=" + dir.string() + " " + PAINLEVE_CLI_PATH +
                          " predict --a 0.4 >" + (log_dir / "o.txt").string() + " 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(dir / "predict.json"));
  CHECK(fs::exists(dir / "run_record_predict.json"));
}

TEST_CASE("verify on a small grid") {
  const auto dir = fresh_dir("verify");
  auto r = run_cli("verify --grid 0 0.2 --out-dir " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PASS") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);

  // a deliberately unreachable gamma tolerance flips the row to FAIL
  auto r2 = run_cli("verify --grid 0.2 --gamma-tol 1e-9 --out-dir " + dir.string(), dir);
  CHECK(r2.exit_code == 1);
  CHECK(r2.output.find("FAIL") != std::string::npos);
}

TEST_CASE("fit command") {
  const auto dir = fresh_dir("fit");
  auto r = run_cli("fit --a 0.2 --refined --out-dir " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("beta=-0.315") != std::string::npos);
  CHECK(fs::exists(dir / "fit.json"));
}

TEST_CASE("verify-transforms emits residual tables") {
  const auto dir = fresh_dir("vt");
  auto r = run_cli("verify-transforms --a 0.2 --out-dir " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "residual_pv_y.csv"));
  CHECK(fs::exists(dir / "residual_pv_y.dat"));
  CHECK(fs::exists(dir / "residual_pair_roundtrip.csv"));
}

TEST_CASE("critical-scan") {
  const auto dir = fresh_dir("crit");
  auto r = run_cli("critical-scan --lo 0.3 --hi 0.4 --tol 1e-5 --out-dir " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0.3183") != std::string::npos);
  const std::string trace = slurp(dir / "critical_trace.csv");
  CHECK(trace.rfind("iter,a_lo,a_hi,label", 0) == 0);

  auto bad = run_cli("critical-scan --lo 0.5 --hi 1.0 --out-dir " + dir.string(), dir);
  CHECK(bad.exit_code == 2);
  CHECK(fs::exists(dir / "run_record_critical-scan.json"));
}

TEST_CASE("monodromy prints the connection matrix") {
  const auto dir = fresh_dir("mono");
  auto r = run_cli("monodromy --a 0.2 --x 6 --x 10 --out-dir " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("constancy defect") != std::string::npos);
  CHECK(fs::exists(dir / "monodromy.json"));
}
