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
  int code = -1;
  std::string output;  // stdout + stderr
};

const fs::path kWorkDir = fs::temp_directory_path() / "wint-cli-test";

RunResult run(const std::string& args) {
  const fs::path log = kWorkDir / "run.log";
  const std::string cmd = "cd " + kWorkDir.string() + " && " + WINT_BIN_PATH +
                          " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WEXITSTATUS(raw);
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct WorkDirSetup {
  WorkDirSetup() {
    fs::remove_all(kWorkDir);
    fs::create_directories(kWorkDir);
  }
} setup_once;

// Short integration window: these tests exercise plumbing, not physics.
const std::string kFast = "--t-max 5 --workers 2";

}  // namespace

TEST_CASE("version flag") {
  const auto r = run("--version");
  CHECK(r.code == 0);
  CHECK(r.output.find("1.0.0") != std::string::npos);
}

TEST_CASE("missing subcommand is a usage error") {
  CHECK(run("").code != 0);
}

TEST_CASE("compute writes report and FTLE CSV") {
  const auto r = run("compute " + kFast + " --alpha 0.1 --seed 7");
  CHECK(r.code == 0);
  CHECK(r.output.find("m_rho = ") != std::string::npos);

  const std::string report = slurp(kWorkDir / "report.json");
  for (const char* key :
       {"\"params\"", "\"m_rho\"", "\"n_total\"", "\"n_regular\"",
        "\"n_escaped\"", "\"weighted_total\"", "\"weighted_regular\"",
        "\"lambda_stats\"", "\"tool_version\""})
    CHECK(report.find(key) != std::string::npos);

  const std::string csv = slurp(kWorkDir / "ftle.csv");
  CHECK(csv.find("index,x1_0,y1_0,x2_0,y2_0,rho0,lambda_max,escaped,regular\n") !=
        std::string::npos);
  CHECK(csv.find("# seed=7") != std::string::npos);
}

TEST_CASE("config file values are applied and overridable") {
  {
    std::ofstream cfg(kWorkDir / "run.cfg");
    cfg << "alpha=0.2\n" << "t-max=5\n" << "grid-nx=3\n" << "workers=2\n";
  }
  const auto r = run("compute --config run.cfg --out cfg_report.json "
                     "--ftle-csv cfg_ftle.csv");
  CHECK(r.code == 0);
  const std::string report = slurp(kWorkDir / "cfg_report.json");
  CHECK(report.find("\"alpha\": 0.2") != std::string::npos);
  CHECK(report.find("\"grid_nx\": 3") != std::string::npos);

  // Command line wins over the file.
  const auto r2 = run("compute --config run.cfg --alpha 0.3 "
                      "--out cfg2_report.json --ftle-csv cfg2_ftle.csv");
  CHECK(r2.code == 0);
  CHECK(slurp(kWorkDir / "cfg2_report.json").find("\"alpha\": 0.3") !=
        std::string::npos);
}

TEST_CASE("unknown config key fails with the valid key list") {
  {
    std::ofstream cfg(kWorkDir / "bad.cfg");
    cfg << "alhpa=0.2\n";
  }
  const auto r = run("compute --config bad.cfg");
  CHECK(r.code == 1);
  CHECK(r.output.find("valid keys") != std::string::npos);
  CHECK(r.output.find("--alpha") != std::string::npos);
}

TEST_CASE("invalid flag values are configuration errors") {
  CHECK(run("compute --dt -0.01 " + kFast).code == 1);
  CHECK(run("compute --method verlet " + kFast).code == 1);
  CHECK(run("compute --tol 1e-9 " + kFast).code == 1);  // Euler bias guard
}

TEST_CASE("all orbits escaping is a numerical failure (exit 2)") {
  const auto r = run("compute " + kFast + " --escape-radius 0.2 "
                     "--out esc.json --ftle-csv esc.csv");
  CHECK(r.code == 2);
  CHECK(r.output.find("escaped") != std::string::npos);
}

TEST_CASE("sweep emits one row per alpha") {
  const auto r = run("sweep " + kFast + " --alphas 0.0,0.4 --out sweep.csv");
  CHECK(r.code == 0);
  const std::string csv = slurp(kWorkDir / "sweep.csv");
  CHECK(csv.find("alpha,m_rho,n_regular,n_escaped\n") != std::string::npos);
  CHECK(csv.find("\n0,") != std::string::npos);
  CHECK(csv.find("\n0.4") != std::string::npos);
}

TEST_CASE("converge writes the study JSON") {
  const auto r = run("converge --t-max 2 --grid-nx 3 --workers 2");
  CHECK(r.code == 0);
  const std::string j = slurp(kWorkDir / "convergence.json");
  for (const char* key : {"\"baseline\"", "\"longer_time\"", "\"half_dt\"",
                          "\"finer_grid\"", "\"mean_abs_dlambda_time\""})
    CHECK(j.find(key) != std::string::npos);
}

TEST_CASE("trajectory writes one CSV per alpha") {
  const auto r = run("trajectory --t-max 2 --alphas 0.0,0.1,0.5");
  CHECK(r.code == 0);
  for (const char* name : {"trajectory_alpha0.csv", "trajectory_alpha0.1.csv",
                           "trajectory_alpha0.5.csv"}) {
    const std::string csv = slurp(kWorkDir / name);
    CHECK(csv.find("t,x1,y1,x2,y2\n") != std::string::npos);
  }
}

TEST_CASE("poincare scaling study") {
  const auto r = run("poincare --quad-nodes 256");
  CHECK(r.code == 0);
  const std::string csv = slurp(kWorkDir / "poincare_scaling.csv");
  CHECK(csv.find("epsilon,map_I,map_theta1,oracle_I,oracle_theta1,error\n") !=
        std::string::npos);
  CHECK(csv.find("\n0.01,") != std::string::npos);
}

TEST_CASE("diagnose emits the diagnostics JSON") {
  const auto r = run("diagnose --omega 1,1.41421356237309515");
  CHECK(r.code == 0);
  const std::string j = slurp(kWorkDir / "diagnostics.json");
  for (const char* key : {"\"wronskian\"", "\"resonance\"", "\"fourier\"",
                          "\"nonpersistence\"", "\"verdict\""})
    CHECK(j.find(key) != std::string::npos);
  CHECK(j.find("condition2") != std::string::npos);
}

TEST_CASE("verify-divergence passes for the bundled system") {
  const auto r = run("verify-divergence --samples 100 --seed 3");
  CHECK(r.code == 0);
  CHECK(r.output.find("max |div(rho V)|") != std::string::npos);
}

TEST_CASE("determinism across worker counts") {
  for (int w : {1, 4}) {
    const auto r = run("compute --t-max 5 --workers " + std::to_string(w) +
                       " --out det" + std::to_string(w) + ".json --ftle-csv det" +
                       std::to_string(w) + ".csv");
    CHECK(r.code == 0);
  }
  CHECK(slurp(kWorkDir / "det1.csv") == slurp(kWorkDir / "det4.csv"));
}
