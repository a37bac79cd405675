#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kdvsat/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = kdvsat::cli::main(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kdvsat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& sub = "") const { return (dir_ / sub).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateFig2) {
  const auto r = invoke({"simulate", "--preset", "fig2", "--out", path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(dir_ / "run" / "energy.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,energy,envelope,boundary_flux,control_work");
  EXPECT_EQ(count_lines(csv), 6001u + 1u);
  EXPECT_TRUE(fs::exists(dir_ / "run" / "snapshots.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "run" / "config.echo"));
  EXPECT_TRUE(fs::exists(dir_ / "run" / "report.txt"));
  EXPECT_FALSE(fs::exists(dir_ / "run" / "plot.gp"));
  EXPECT_NE(r.out.find("final_energy="), std::string::npos);
  EXPECT_NE(r.out.find("envelope_violations=0"), std::string::npos);
}

TEST_F(Cli, SimulateStationaryReportsDrift) {
  const auto r = invoke({"simulate", "--preset", "stationary", "--nx", "64", "--nt", "600",
                         "--out", path(), "--gnuplot", "--dump-operators"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir_ / "report.txt").find("sup_norm_drift = "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "plot.gp"));
  const auto c = slurp(dir_ / "operators" / "c_mat.csv");
  EXPECT_EQ(count_lines(c), 64u);
  // config.echo is a valid config reproducing the run.
  const auto echoed = kdvsat::load_config((dir_ / "config.echo").string());
  EXPECT_EQ(echoed.nx, 64);
  EXPECT_EQ(echoed.nt, 600);
  EXPECT_TRUE(echoed.linearized);
}

TEST_F(Cli, SimulateFromConfigFile) {
  fs::create_directories(dir_);
  {
    std::ofstream cfg(dir_ / "s.cfg");
    cfg << "nx = 32\nnt = 40\nt_final = 0.04\nsat_kind = loc\n";
  }
  const auto r = invoke({"simulate", "--config", path("s.cfg"), "--nt", "20", "--out", path("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto echoed = kdvsat::load_config((dir_ / "o" / "config.echo").string());
  EXPECT_EQ(echoed.nx, 32);
  EXPECT_EQ(echoed.nt, 20);
  EXPECT_EQ(echoed.sat.kind, kdvsat::SatKind::localized);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"simulate", "--preset", "fig2"}).code, 1);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--preset", "bogus", "--out", path()}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--nx", "4", "--out", path()}).code, 1);
  EXPECT_EQ(invoke({"simulate", "--config", path("missing.cfg"), "--out", path()}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(Cli, SimulateDivergenceExitCode) {
  fs::create_directories(dir_);
  {
    std::ofstream cfg(dir_ / "blow.cfg");
    cfg << "nx = 32\nnt = 10\nt_final = 0.01\ncontrol = false\ninitial = gaussian:3,0.3,1e200\n";
  }
  const auto r = invoke({"simulate", "--config", path("blow.cfg"), "--out", path("o")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("non-finite"), std::string::npos);
}

TEST_F(Cli, ValidateDefault) {
  const auto r = invoke({"validate", "--trials", "500"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("seed = 42"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(Cli, ValidateDetectsFaultyGain) {
  const auto r = invoke({"validate", "--trials", "500", "--seed", "9", "--fault-gain-scale", "2"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("FAIL sector_l2"), std::string::npos);
  EXPECT_NE(r.out.find("input digest"), std::string::npos);
  EXPECT_NE(r.out.find("seed 9"), std::string::npos);
}

TEST_F(Cli, ValidateDetectsInflatedLipschitz) {
  const auto r = invoke({"validate", "--trials", "500", "--fault-lipschitz", "1.01"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("FAIL lipschitz_loc_1"), std::string::npos);
}

TEST_F(Cli, ValidateSeedFromEnvironment) {
  ::setenv("KDV_SAT_SEED", "31337", 1);
  const auto r = invoke({"validate", "--trials", "50"});
  ::unsetenv("KDV_SAT_SEED");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("seed = 31337"), std::string::npos);
  const auto explicit_seed = invoke({"validate", "--trials", "50", "--seed", "31337"});
  EXPECT_EQ(explicit_seed.out, r.out);
}

TEST_F(Cli, SweepSaturationLevels) {
  const auto r = invoke({"sweep", "--preset", "fig2", "--axis", "u0", "--values", "0.25,0.5,1.0",
                         "--out", path(), "--jobs", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(dir_ / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "axis,value,status,nx,nt,u0,a0,final_energy,fitted_rate,tail_rate,mu_formula");
  std::vector<double> rates;
  while (std::getline(csv, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 11u) << line;
    EXPECT_EQ(cols[2], "ok");
    rates.push_back(std::stod(cols[8]));
  }
  ASSERT_EQ(rates.size(), 3u);
  EXPECT_LE(rates[0], rates[1]);
  EXPECT_LE(rates[1], rates[2]);
}

TEST_F(Cli, SingleValueSweepMatchesSimulate) {
  const auto sim = invoke({"simulate", "--preset", "fig8", "--nx", "64", "--nt", "500", "--out",
                           path("sim")});
  const auto sw = invoke({"sweep", "--preset", "fig8", "--nx", "64", "--nt", "500", "--axis", "u0",
                          "--values", "0.5", "--out", path("sw")});
  ASSERT_EQ(sim.code, 0);
  ASSERT_EQ(sw.code, 0);
  const auto energy = slurp(dir_ / "sim" / "energy.csv");
  const std::string last = energy.substr(energy.rfind('\n', energy.size() - 2) + 1);
  const std::string final_energy = last.substr(last.find(',') + 1, last.find(',', last.find(',') + 1) - last.find(',') - 1);
  const auto row = slurp(dir_ / "sw" / "sweep.csv");
  EXPECT_NE(row.find("," + final_energy + ","), std::string::npos) << row;
  EXPECT_NE(sim.out.find("final_energy=" + final_energy), std::string::npos);
}

TEST_F(Cli, SweepErrors) {
  EXPECT_EQ(invoke({"sweep", "--axis", "u0", "--values", "", "--out", path()}).code, 1);
  EXPECT_EQ(invoke({"sweep", "--axis", "u0", "--values", " , ", "--out", path()}).code, 1);
  EXPECT_EQ(invoke({"sweep", "--axis", "dt", "--values", "1", "--out", path()}).code, 1);
  EXPECT_EQ(invoke({"sweep", "--axis", "nx", "--values", "64.5", "--out", path()}).code, 1);
  EXPECT_EQ(invoke({"sweep", "--axis", "u0", "--values", "-1", "--out", path()}).code, 1);
}

TEST_F(Cli, SweepDivergenceFinishesOtherRuns) {
  // An explicit feedback term with dt * a0 = 1e3 makes the inner iteration blow up.
  const auto r = invoke({"sweep", "--preset", "fig1", "--nx", "32", "--nt", "200", "--axis", "a0",
                         "--values", "1,1e6,2", "--out", path()});
  EXPECT_EQ(r.code, 2);
  const auto csv = slurp(dir_ / "sweep.csv");
  EXPECT_EQ(count_lines(csv), 4u);
  EXPECT_NE(csv.find("a0,1,ok,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("a0,1000000,diverged,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("a0,2,ok,"), std::string::npos) << csv;
}

TEST_F(Cli, RerunIsByteIdentical) {
  const std::vector<std::string> base = {"simulate", "--preset", "fig7", "--nx", "80", "--nt", "800"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a")});
  b.insert(b.end(), {"--out", path("b")});
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  for (const char* f : {"energy.csv", "snapshots.csv", "config.echo", "report.txt"})
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}
