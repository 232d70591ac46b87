#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/output.hpp"
#include "profex/csv.hpp"
#include "profex/errors.hpp"

namespace fs = std::filesystem;

namespace profex::cli {
namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("profex_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    std::ofstream(dir_ / name) << content;
    return dir_ / name;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(PROFEX_EXE) + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  RunConfig config(const std::string& command, json params, const std::string& out = "out") {
    RunConfig c = RunConfig::from_json(command, std::move(params), dir_);
    c.out_dir = dir_ / out;
    return c;
  }

  fs::path dir_;
};

json two_point_law() { return {{"type", "husler_reiss"}, {"gamma", {{0, 1}, {1, 0}}}}; }

TEST_F(CliTest, SimulateWritesSamplesAndManifestDeterministically) {
  const json params = {{"law", two_point_law()}, {"kind", "X"}, {"n", 1000}, {"seed", 7}};
  run_simulate(config("simulate", params, "a"));
  run_simulate(config("simulate", params, "b"));
  const CsvTable table = read_csv(dir_ / "a" / "samples.csv");
  EXPECT_EQ(table.values.rows(), 1000);
  EXPECT_EQ(table.values.cols(), 2);
  EXPECT_EQ(table.header, (std::vector<std::string>{"x1", "x2"}));
  for (const char* name : {"samples.csv", "simulate_report.json", "simulate.manifest.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
  }
  const json manifest = json::parse(slurp(dir_ / "a" / "simulate.manifest.json"));
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["version"], kVersion);
  EXPECT_EQ(manifest["config"]["law"], two_point_law());
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 16u);
  EXPECT_NE(std::find(manifest["outputs"].begin(), manifest["outputs"].end(), "samples.csv"), manifest["outputs"].end());
}

TEST_F(CliTest, SimulateZeroCovarianceProfiles) {
  const json law = {{"type", "gaussian_profile"}, {"sigma", {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}};
  run_simulate(config("simulate", {{"law", law}, {"kind", "U"}, {"n", 50}, {"seed", 1}}));
  const CsvTable table = read_csv(dir_ / "out" / "samples.csv");
  EXPECT_EQ(table.values.rows(), 50);
  EXPECT_EQ(table.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(CliTest, SimulateEveryKindFromEveryRole) {
  const json generator = {{"type", "degenerate"}, {"point", {0.5, -0.5}}, {"role", "generator"}};
  for (const json& law : {two_point_law(), generator}) {
    for (const char* kind : {"X", "Zstar", "Z", "U", "T", "S"}) {
      const auto result = run_simulate(config("simulate", {{"law", law}, {"kind", kind}, {"n", 200}, {"seed", 3}}));
      const CsvTable t = read_csv(dir_ / "out" / "samples.csv");
      ASSERT_EQ(t.values.rows(), 200) << kind;
      for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
        const auto row = t.values.row(i);
        if (std::string(kind) == "U" || std::string(kind) == "T") ASSERT_NEAR(row.sum(), 0.0, 1e-12);
        if (std::string(kind) == "S") ASSERT_EQ(row.maxCoeff(), 0.0);
        if (std::string(kind) == "Z") ASSERT_GE(row.maxCoeff(), 0.0);
        if (std::string(kind) == "Zstar") ASSERT_GE(row.sum(), 0.0);
      }
      EXPECT_EQ(result.report["kind"], kind);
    }
  }
  const auto rej = run_simulate(config("simulate", {{"law", generator}, {"kind", "U"}, {"n", 2000}, {"seed", 3}}));
  EXPECT_NEAR(rej.report["diagnostics"]["acceptance_rate"].get<double>(), std::exp(-0.5), 0.03);
}

TEST_F(CliTest, SimulateThenFitRecoversVariogram) {
  run_simulate(config("simulate", {{"law", two_point_law()}, {"kind", "X"}, {"n", 40000}, {"seed", 11}}));
  const auto result = run_fit(config("fit", {{"input", "out/samples.csv"}, {"quantile", 0.5}, {"margins", "exponential"}}, "fit"));
  EXPECT_NEAR(result.report["gamma_hat"][0][1].get<double>(), 1.0, 0.1);
  EXPECT_EQ(result.report["k"], 20000);
  for (const char* name : {"fit_report.json", "exceedances.csv", "profiles.csv", "fit.manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "fit" / name)) << name;
  }
  const json manifest = json::parse(slurp(dir_ / "fit" / "fit.manifest.json"));
  ASSERT_EQ(manifest["inputs"].size(), 1u);
  EXPECT_EQ(manifest["inputs"][0]["fnv1a"], fnv1a_hex(slurp(dir_ / "out" / "samples.csv")));
}

TEST_F(CliTest, FitWithRankMarginsAndStabilityTable) {
  run_simulate(config("simulate", {{"law", two_point_law()}, {"kind", "X"}, {"n", 5000}, {"seed", 12}}));
  const auto result = run_fit(config(
      "fit", {{"input", "out/samples.csv"}, {"quantile", 0.8}, {"stability_quantiles", {0.95, 0.5, 0.99999}}}, "fit"));
  EXPECT_EQ(result.report["margins"], "empirical");
  EXPECT_EQ(result.report["stability_errors"].size(), 1u);
  const CsvTable table = read_csv(dir_ / "fit" / "stability.csv");
  ASSERT_EQ(table.values.rows(), 3);
  EXPECT_EQ(table.header, (std::vector<std::string>{"q", "r", "k", "gamma_1_2"}));
  EXPECT_EQ(table.values(0, 0), 0.5);
  EXPECT_TRUE(std::isnan(table.values(2, 3)));
}

TEST_F(CliTest, PcaReportsScaledProjectorEigenvalues) {
  const double g = 2.0;
  const json sigma = {{g / 3, -g / 6, -g / 6}, {-g / 6, g / 3, -g / 6}, {-g / 6, -g / 6, g / 3}};
  const auto result = run_pca(config("pca", {{"sigma", sigma}, {"rank", 1}}));
  const auto eig = result.report["eigenvalues"];
  EXPECT_NEAR(eig[0].get<double>(), g / 2, 1e-12);
  EXPECT_NEAR(eig[1].get<double>(), g / 2, 1e-12);
  EXPECT_NEAR(eig[2].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(result.report["truncation"]["reconstruction_error"].get<double>(), g / 2, 1e-12);
  EXPECT_EQ(result.report["degenerate_groups"].size(), 1u);
}

TEST_F(CliTest, PcaOnSamplesWritesProjection) {
  run_simulate(config("simulate", {{"law", two_point_law()}, {"kind", "U"}, {"n", 500}, {"seed", 5}}));
  const auto result = run_pca(config("pca", {{"samples", "out/samples.csv"}, {"rank", 1}}, "pca"));
  EXPECT_EQ(result.report["source"], "sample");
  EXPECT_EQ(read_csv(dir_ / "pca" / "projected.csv").values.rows(), 500);
}

TEST_F(CliTest, LinkOnExponentialTable) {
  std::ostringstream csv;
  csv << "s,value\n";
  for (int j = 0; j <= 20000; ++j) csv << format_number(j * 1e-3) << ',' << format_number(1 - std::exp(-j * 1e-3)) << '\n';
  write("exp1.csv", csv.str());
  const auto result = run_link(config("link", {{"input", "exp1.csv"}, {"direction", "T_to_U"}}));
  const CsvTable out = read_csv(dir_ / "out" / "link_cdf.csv");
  double worst = 0;
  for (Eigen::Index j = 0; j < out.values.rows(); ++j) {
    worst = std::max(worst, std::abs(out.values(j, 1) - (1 - std::exp(-2 * out.values(j, 0)))));
  }
  EXPECT_LT(worst, 1e-4);
  EXPECT_TRUE(result.report["moment_identity"]["pass"].get<bool>());
  const json sidecar = json::parse(slurp(dir_ / "out" / "link_cdf.json"));
  EXPECT_NEAR(sidecar["grid_step"].get<double>(), 1e-3, 1e-15);

  const auto back = run_link(config("link", {{"input", "out/link_cdf.csv"}, {"direction", "U_to_T"}}, "back"));
  EXPECT_NEAR(back.report["normalizer"].get<double>(), 2.0, 1e-5);
}

TEST_F(CliTest, OutputSetRemovesFilesUnlessCommitted) {
  {
    OutputSet out(dir_ / "partial");
    out.write_text("a.txt", "x");
    EXPECT_TRUE(fs::exists(dir_ / "partial" / "a.txt"));
  }
  EXPECT_FALSE(fs::exists(dir_ / "partial" / "a.txt"));
  {
    OutputSet out(dir_ / "kept");
    out.write_text("a.txt", "x");
    out.commit();
  }
  EXPECT_TRUE(fs::exists(dir_ / "kept" / "a.txt"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(exit_code(ErrorKind::Parameter), 2);
  EXPECT_EQ(exit_code(ErrorKind::SampleSize), 3);
  EXPECT_EQ(exit_code(ErrorKind::Io), 3);
  EXPECT_EQ(exit_code(ErrorKind::GridResolution), 4);

  write("three.csv", "a,b\n1,2\n2,1\n3,3\n");
  write("fit.json", R"({"input": "three.csv", "quantile": 0.99})");
  EXPECT_EQ(run("fit --config " + (dir_ / "fit.json").string() + " --out-dir " + (dir_ / "o").string()), 3);
  EXPECT_FALSE(fs::exists(dir_ / "o" / "fit_report.json"));

  write("noseed.json", R"({"law": {"type": "husler_reiss", "gamma": [[0,1],[1,0]]}, "n": 10})");
  EXPECT_EQ(run("simulate --config " + (dir_ / "noseed.json").string()), 2);
  EXPECT_EQ(run("simulate --config " + (dir_ / "noseed.json").string() + " --seed 4 --out-dir " + (dir_ / "s").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "samples.csv"));

  write("badgamma.json", R"({"law": {"type": "husler_reiss", "gamma": [[0,-1],[-1,0]]}, "n": 10, "seed": 1})");
  EXPECT_EQ(run("simulate --config " + (dir_ / "badgamma.json").string()), 2);
  write("broken.json", "{ not json");
  EXPECT_EQ(run("fit --config " + (dir_ / "broken.json").string()), 2);
  write("missing.json", R"({"input": "nope.csv"})");
  EXPECT_EQ(run("fit --config " + (dir_ / "missing.json").string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("pca --rank notanumber"), 2);
  write("flat.csv", "a,b\n1,2\n1,1\n1,3\n1,5\n");
  write("flat.json", R"({"input": "flat.csv", "quantile": 0.5})");
  EXPECT_EQ(run("fit --config " + (dir_ / "flat.json").string() + " --out-dir " + (dir_ / "f").string()), 3);
  EXPECT_EQ(run("link --config " + write("lk.json", R"({"exponential_rate": 1})").string() + " --grid-step 0.01 --out-dir " +
                (dir_ / "l").string()),
            0);
  write("inef.json", R"({"law": {"type": "degenerate", "point": [40, -40], "role": "generator"}, "kind": "U", "n": 10, "seed": 1, "max_attempts": 1000})");
  EXPECT_EQ(run("simulate --config " + (dir_ / "inef.json").string() + " --out-dir " + (dir_ / "i").string()), 4);
  EXPECT_FALSE(fs::exists(dir_ / "i" / "samples.csv"));
}

TEST_F(CliTest, FlagsOverrideConfig) {
  write("sim.json", R"({"law": {"type": "husler_reiss", "gamma": [[0,1],[1,0]]}, "n": 20, "seed": 1})");
  ASSERT_EQ(run("simulate --config " + (dir_ / "sim.json").string() + " --seed 2 --out-dir " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run("simulate --config " + (dir_ / "sim.json").string() + " --seed 2 --out-dir " + (dir_ / "b").string()), 0);
  ASSERT_EQ(run("simulate --config " + (dir_ / "sim.json").string() + " --out-dir " + (dir_ / "c").string()), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "samples.csv"), slurp(dir_ / "b" / "samples.csv"));
  EXPECT_NE(slurp(dir_ / "a" / "samples.csv"), slurp(dir_ / "c" / "samples.csv"));
  EXPECT_EQ(json::parse(slurp(dir_ / "a" / "simulate.manifest.json"))["seed"], 2);
}

}  // namespace
}  // namespace profex::cli
