#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  std::string cmd = "cd " + dir.string() + " && " + SPLITKIT_CLI_PATH + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.out = testutil::slurp(out);
  r.err = testutil::slurp(err);
  return r;
}

std::string last_line(const std::string& text) {
  auto end = text.find_last_not_of('\n');
  if (end == std::string::npos) return "";
  auto start = text.rfind('\n', end);
  return text.substr(start == std::string::npos ? 0 : start + 1, end - start);
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("schemes list prints the registry and a machine summary") {
  auto dir = testutil::scratch_dir("cli-list");
  RunResult r = run_cli(dir, "schemes list");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "strang-2: 2 operators, 2 stages, order 2"));
  CHECK(contains(r.out, "opt-4-5-pos"));
  CHECK(contains(last_line(r.out), "\"pass\":true"));
  CHECK(contains(testutil::slurp(dir / "run_manifest.json"), "\"status\": \"ok\""));
}

TEST_CASE("schemes show prints exact coefficients") {
  auto dir = testutil::scratch_dir("cli-show");
  RunResult r = run_cli(dir, "schemes show strang-2");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "2 operators, 2 stages, order 2 [nonnegative, symmetric]"));
  CHECK(contains(r.out, "stage 1: 0.5 1"));
  CHECK(contains(r.out, "stage 2: 0.5 0"));
}

TEST_CASE("schemes show on an unknown name fails with a manifest") {
  auto dir = testutil::scratch_dir("cli-show-bad");
  RunResult r = run_cli(dir, "schemes show no-such-table");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "no-such-table"));
  CHECK(contains(last_line(r.out), "\"pass\":false"));
  CHECK(contains(testutil::slurp(dir / "run_manifest.json"), "\"status\": \"error\""));
}

TEST_CASE("schemes check reports residuals and the error measure") {
  auto dir = testutil::scratch_dir("cli-check");
  RunResult r = run_cli(dir, "schemes check strang-4");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "row sum = 1"));
  CHECK(contains(r.out, "verified order 2 (declared 2)"));
  CHECK(contains(r.out, "scaled 2.62202"));
  CHECK(contains(last_line(r.out), "\"pass\":true"));
}

TEST_CASE("verify confirms the empirical slope of a registry scheme") {
  auto dir = testutil::scratch_dir("cli-verify");
  RunResult r = run_cli(dir, "verify --scheme strang-2 --dim 4 --seed 3 --out-dir " +
                                 dir.string());
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "expected 3 (ok)"));
  std::string csv = testutil::slurp(dir / "verify.csv");
  CHECK(csv.rfind("h,err\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);  // header + 7 step sizes
}

TEST_CASE("verify flags a scheme file whose declared order is wrong") {
  auto dir = testutil::scratch_dir("cli-verify-bad");
  testutil::write_text(dir / "claims3.scheme",
                       "name = claims-too-much\n"
                       "operators = 2\n"
                       "stages = 2\n"
                       "order = 2\n"
                       "stage 1: 1 0\n"
                       "stage 2: 0 1\n");
  RunResult r = run_cli(dir, "verify --scheme " + (dir / "claims3.scheme").string() +
                                 " --dim 4 --seed 3 --out-dir " + dir.string());
  CHECK(r.exit_code == 1);
  CHECK(contains(r.out, "MISMATCH"));
  CHECK(contains(last_line(r.out), "\"pass\":false"));
}

TEST_CASE("optimize with an empty budget fails cleanly") {
  auto dir = testutil::scratch_dir("cli-opt-bad");
  RunResult r = run_cli(dir, "optimize --ops 2 --stages 2 --budget 0");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "budget"));
  CHECK(contains(last_line(r.out), "\"pass\":false"));
  CHECK(contains(testutil::slurp(dir / "run_manifest.json"), "\"status\": \"error\""));
}

TEST_CASE("optimize writes a loadable scheme file") {
  auto dir = testutil::scratch_dir("cli-opt");
  RunResult r = run_cli(dir, "optimize --ops 2 --stages 2 --nonneg --budget 4 --iters 200"
                             " --seed 7 --out " +
                                 (dir / "found.scheme").string());
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "scheme written to"));
  CHECK(fs::exists(dir / "found.scheme"));
  std::string text = testutil::slurp(dir / "found.scheme");
  CHECK(contains(text, "# seed = 7"));
  CHECK(contains(text, "order = 2"));
  RunResult check = run_cli(dir, "schemes check " + (dir / "found.scheme").string());
  CHECK(check.exit_code == 0);
}

TEST_CASE("burgers adaptive writes trace, snapshots, plot script, manifest") {
  auto dir = testutil::scratch_dir("cli-burgers");
  std::string args =
      "burgers adaptive --n 256 --kappa 1 --nu 0.002 --tol 1e-3 --tend 0.05 --h0 1e-3"
      " --hmin 1e-4 --hmax 0.05 --w 0.4 --out-dir " +
      dir.string();
  RunResult r = run_cli(dir, args);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "floor_hit = false"));
  for (const char* name : {"trace.csv", "u_initial.csv", "u_final.csv", "plot.gp",
                           "run_manifest.json"})
    CHECK(fs::exists(dir / name));
  std::string trace = testutil::slurp(dir / "trace.csv");
  CHECK(trace.rfind("t,h,inv_h,P,accepted\n", 0) == 0);
  CHECK(contains(testutil::slurp(dir / "run_manifest.json"), "trace.csv"));

  auto dir2 = testutil::scratch_dir("cli-burgers-repeat");
  std::string args2 =
      "burgers adaptive --n 256 --kappa 1 --nu 0.002 --tol 1e-3 --tend 0.05 --h0 1e-3"
      " --hmin 1e-4 --hmax 0.05 --w 0.4 --out-dir " +
      dir2.string();
  RunResult r2 = run_cli(dir2, args2);
  CHECK(r2.exit_code == 0);
  CHECK(testutil::slurp(dir2 / "trace.csv") == trace);
}

TEST_CASE("burgers rejects a plain scheme where a pair is needed") {
  auto dir = testutil::scratch_dir("cli-burgers-badpair");
  RunResult r = run_cli(dir, "burgers adaptive --n 256 --tend 0.01 --pair strang-2 --out-dir " +
                                 dir.string());
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "not a pair"));
}

}  // TEST_SUITE
