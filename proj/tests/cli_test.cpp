#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hamsolve/commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hamsolve_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Outcome run(const std::string& args, const std::string& env = "") {
  const fs::path log = fs::temp_directory_path() / ("hamsolve_cli_" + std::to_string(::getpid()) + ".log");
  const std::string cmd = env + " " + HAMSOLVE_BIN + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream s;
  s << in.rdbuf();
  r.output = s.str();
  return r;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string example(const char* name) { return std::string(HAMSOLVE_EXAMPLES) + "/" + name; }

}  // namespace

TEST(CliSolve, LinearExitsZeroWithTinyResidual) {
  const fs::path out = scratch("solve_linear");
  const Outcome r = run("solve builtin:linear-poisson --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  const auto series = read_csv(out / "series.csv");
  ASSERT_EQ(series.size(), 12u);
  EXPECT_EQ(series[0], (std::vector<std::string>{"order", "norm", "residual"}));
  EXPECT_LT(std::stod(series.back()[2]), 1e-12);
  const auto sol = read_csv(out / "solution.csv");
  EXPECT_EQ(sol[0], (std::vector<std::string>{"r", "U", "exact", "error"}));
  EXPECT_EQ(sol.size(), 65u);
}

TEST(CliSolve, DivergentSeriesExitsTwo) {
  const fs::path out = scratch("solve_long");
  const Outcome r = run("solve builtin:riccati-tanh-long --hbar -1 --order 15 --out " + out.string());
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_TRUE(fs::exists(out / "series.csv"));
}

TEST(CliSolve, MissingFileExitsOne) {
  const fs::path out = scratch("solve_missing");
  const Outcome r = run("solve missing.tomlike --out " + out.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("missing.tomlike"), std::string::npos) << r.output;
}

TEST(CliSolve, ProblemFileWithoutExactAndOverrides) {
  const fs::path out = scratch("solve_file");
  const Outcome r = run("solve --problem " + example("exp-bvp.ham") + " --order 5 --grid-n 24 --H 'exp(-r)' --out " +
                    out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(read_csv(out / "series.csv").size(), 7u);
  EXPECT_EQ(read_csv(out / "solution.csv").size(), 25u);
}

TEST(CliSolve, UserLinearOperatorFile) {
  const fs::path out = scratch("solve_user");
  const Outcome r = run("solve " + example("riccati-long-shifted.ham") + " --out " + out.string());
  // the term norms oscillate on the way down, which trips the three-rises rule
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_LT(std::stod(read_csv(out / "series.csv").back()[2]), 1e-3);
  const auto sol = read_csv(out / "solution.csv");
  double worst = 0.0;
  for (std::size_t i = 1; i < sol.size(); ++i) worst = std::max(worst, std::stod(sol[i][3]));
  EXPECT_LT(worst, 0.01);
  EXPECT_EQ(run("solve builtin:riccati-tanh-short --lopt file --out " + out.string()).code, 1);
}

TEST(CliSolve, BadFlagsExitOne) {
  EXPECT_EQ(run("solve builtin:linear-poisson --hbar 0 --out " + scratch("bad").string()).code, 1);
  EXPECT_EQ(run("solve builtin:linear-poisson --lopt sideways --out " + scratch("bad").string()).code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST(CliSolve, OutputDirectoryFromEnvironment) {
  const fs::path out = scratch("env_out");
  const Outcome r = run("solve builtin:linear-poisson", "HAMSOLVE_OUT=" + out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "series.csv"));
  EXPECT_TRUE(fs::exists(out / "solution.csv"));
}

TEST(CliHscan, LinearMinimumAtMinusOne) {
  const fs::path out = scratch("hscan");
  const Outcome r = run("hscan builtin:linear-poisson --from -2 --to -0.1 --points 20 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  const auto rows = read_csv(out / "hbar_curve.csv");
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"hbar", "residual", "diverged", "probe"}));
  std::size_t best = 1;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    if (std::stod(rows[i][1]) < std::stod(rows[best][1])) best = i;
  }
  EXPECT_EQ(std::stod(rows[best][0]), -1.0);
  const std::string first = slurp(out / "hbar_curve.csv");
  EXPECT_EQ(run("hscan builtin:linear-poisson --from -2 --to -0.1 --points 20 --out " + out.string()).code, 0);
  EXPECT_EQ(slurp(out / "hbar_curve.csv"), first);
}

TEST(CliHscan, RangeThroughZeroIsShifted) {
  const fs::path out = scratch("hscan_zero");
  EXPECT_EQ(run("hscan builtin:riccati-tanh-short --from -1 --to 1 --points 5 --out " + out.string()).code, 0);
  const auto rows = read_csv(out / "hbar_curve.csv");
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(std::stod(rows[3][0]), 0.25);
}

TEST(CliTrace, LinearPath) {
  const fs::path out = scratch("trace_linear");
  const Outcome r = run("trace builtin:linear-poisson --steps 10 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  const auto rows = read_csv(out / "path.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"eps", "newton_iters", "jac_condition", "residual_inf", "u_at_probe"}));
  ASSERT_GE(rows.size(), 12u);
  EXPECT_LT(std::stod(rows.back()[3]), 1e-9);
  EXPECT_EQ(std::stod(rows.back()[0]), 1.0);
}

TEST(CliTrace, TanhPathFiniteConditions) {
  const fs::path out = scratch("trace_tanh");
  EXPECT_EQ(run("trace builtin:riccati-tanh-short --steps 20 --out " + out.string()).code, 0);
  const auto rows = read_csv(out / "path.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_TRUE(std::isfinite(std::stod(rows[i][2])));
}

TEST(CliTrace, FoldExitsThreeWithPartialPath) {
  const fs::path out = scratch("trace_fold");
  const Outcome r = run("trace " + example("bratu-fold.ham") + " --steps 10 --out " + out.string());
  EXPECT_EQ(r.code, 3) << r.output;
  const auto rows = read_csv(out / "path.csv");
  ASSERT_GE(rows.size(), 3u);
  EXPECT_LT(std::stod(rows.back()[0]), 1.0);
}

TEST(CliHpmCheck, PassAndMutation) {
  for (const char* id : {"linear-poisson", "riccati-tanh-short", "riccati-tanh-long", "manufactured-quad"}) {
    const fs::path out = scratch(std::string("hpm_") + id);
    const Outcome r = run(std::string("hpm-check builtin:") + id + " --order 10 --out " + out.string());
    EXPECT_EQ(r.code, 0) << r.output;
    const auto j = nlohmann::json::parse(slurp(out / "equivalence.json"));
    EXPECT_EQ(j["per_order_rel_diff"].size(), 11u);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["tolerance"].get<double>(), 1e-10);
  }
  const fs::path out = scratch("hpm_mutant");
  EXPECT_EQ(run("hpm-check builtin:riccati-tanh-short --hbar -1.01 --out " + out.string()).code, 1);
  const auto j = nlohmann::json::parse(slurp(out / "equivalence.json"));
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_GT(j["max_rel_diff"].get<double>(), 1e-3);
}

TEST(CliBench, WritesReportTree) {
  const fs::path out = scratch("bench");
  std::ostringstream log, err;
  const int code = hamsolve::cli::cmd_bench(out, log, err);
  EXPECT_TRUE(code == 0 || code == 1) << err.str();
  EXPECT_TRUE(err.str().empty()) << err.str();
  const auto j = nlohmann::json::parse(slurp(out / "acceptance.json"));
  ASSERT_EQ(j.size(), 7u);
  bool all = true;
  for (const auto& c : j) all = all && c["pass"].get<bool>();
  EXPECT_EQ(code, all ? 0 : 1);
  for (const char* id : {"linear-poisson", "riccati-tanh-short", "riccati-tanh-long", "manufactured-quad"}) {
    EXPECT_TRUE(fs::exists(out / id / "series.csv"));
    EXPECT_TRUE(fs::exists(out / id / "path.csv"));
    EXPECT_TRUE(fs::exists(out / id / "equivalence.json"));
  }
}
