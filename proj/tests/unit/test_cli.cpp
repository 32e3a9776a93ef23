#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "nfsar/commands.hpp"
#include "nfsar/io.hpp"

using namespace nfsar;
namespace fs = std::filesystem;

namespace {

cli::Options small_options(const char* name) {
  cli::Options o;
  o.grid = 64;
  o.out = fs::temp_directory_path() / (std::string("nfsar_cli_") + name);
  fs::remove_all(*o.out);
  return o;
}

}  // namespace

TEST(Cli, SimulateRestoreEvaluateChain) {
  const cli::Options o = small_options("chain");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_simulate(o, out, err), cli::exit_ok) << err.str();
  EXPECT_TRUE(fs::exists(*o.out / "degraded.nfsar"));
  EXPECT_NE(out.str().find("13 scatterers"), std::string::npos);

  for (const char* method : {"proposed", "ista", "clean"}) {
    std::ostringstream rout, rerr;
    ASSERT_EQ(cli::cmd_restore(o, *o.out / "degraded.nfsar", method, rout, rerr), cli::exit_ok) << rerr.str();
    EXPECT_TRUE(fs::exists(*o.out / "coefficients.nfsar"));
    EXPECT_TRUE(fs::exists(*o.out / "objective_trace.csv"));
    EXPECT_NE(io::read_file(*o.out / "manifest.json").find("\"converged\""), std::string::npos);
  }

  std::ostringstream eout, eerr;
  ASSERT_EQ(cli::cmd_evaluate(o, *o.out / "coefficients.nfsar", "CLEAN", eout, eerr), cli::exit_ok) << eerr.str();
  EXPECT_NE(eout.str().find("stated bound = 0.0375000 m"), std::string::npos);
  EXPECT_TRUE(fs::exists(*o.out / "metrics.csv"));
  EXPECT_TRUE(fs::exists(*o.out / "table.csv"));
}

TEST(Cli, RestoreRejectsUnknownMethodAndGridMismatch) {
  cli::Options o = small_options("mismatch");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_restore(o, "whatever.nfsar", "magic", out, err), cli::exit_usage);
  ASSERT_EQ(cli::cmd_simulate(o, out, err), cli::exit_ok);
  o.grid = 48;
  EXPECT_EQ(cli::cmd_restore(o, *small_options("mismatch").out / "degraded.nfsar", "proposed", out, err),
            cli::exit_failure);
}

TEST(Cli, EvaluateMissingSceneFails) {
  cli::Options o = small_options("missing");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_simulate(o, out, err), cli::exit_ok);
  o.scene = "/nonexistent/scene.txt";
  EXPECT_EQ(cli::cmd_evaluate(o, *o.out / "ideal.nfsar", "x", out, err), cli::exit_failure);
  EXPECT_FALSE(err.str().empty());
}

TEST(Cli, PsfReportsResolutionsAndWidths) {
  cli::Options o = small_options("psf");
  o.grid.reset();
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_psf(o, 0.0, 25.0, out, err), cli::exit_ok) << err.str();
  EXPECT_NE(out.str().find("rho_range_m: 0.0749481"), std::string::npos);
  EXPECT_NE(out.str().find("rho_azimuth_m: 0.0749481"), std::string::npos);
  EXPECT_NE(out.str().find("width_3db_azimuth_m"), std::string::npos);
  EXPECT_TRUE(fs::exists(*o.out / "psf.pgm"));
  EXPECT_EQ(cli::cmd_psf(o, 0.0, 90.0, out, err), cli::exit_failure);
}

TEST(Cli, SceneTwoRecentersWithoutConfig) {
  cli::Options o;
  o.scene = "paper2";
  EXPECT_EQ(cli::effective_config(o).geometry.standoff_m, 21.0);
  o.scene = "paper1";
  EXPECT_EQ(cli::effective_config(o).geometry.standoff_m, 25.0);
}

TEST(Cli, BenchSmokeAndDeterminism) {
  cli::Options o = small_options("bench");
  o.grid = 64;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_bench(o, out, err), cli::exit_ok) << err.str();
  std::map<std::string, std::string> first;
  for (const auto& entry : fs::directory_iterator(*o.out))
    first[entry.path().filename().string()] = io::read_file(entry.path());
  EXPECT_GE(first.size(), 15u);
  ASSERT_EQ(cli::cmd_bench(o, out, err), cli::exit_ok) << err.str();
  for (const auto& [name, bytes] : first) EXPECT_EQ(io::read_file(*o.out / name), bytes) << name;
}
