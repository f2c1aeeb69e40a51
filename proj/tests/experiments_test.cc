#include "sre/experiments.h"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sre/error.h"

namespace sre {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int RunCli(const std::string& args) {
  const std::string cmd =
      std::string(SRE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Data(const std::string& name) {
  return std::string(SRE_DATA_DIR) + "/" + name;
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sre_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(GridTest, ParsesInclusiveGrids) {
  const auto grid = ParseGrid("0:1:0.25");
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_EQ(grid.back(), 1.0);
  // 0.1 steps land exactly on rounded values.
  const auto fine = ParseGrid("0:1:0.01");
  ASSERT_EQ(fine.size(), 101u);
  EXPECT_EQ(fine[3], 0.03);
  EXPECT_EQ(fine[65], 0.65);
  EXPECT_THROW(ParseGrid("0:1"), Error);
  EXPECT_THROW(ParseGrid("1:0:0.1"), Error);
  EXPECT_THROW(ParseGrid("0:1:0"), Error);
  EXPECT_THROW(ParseGrid("a:b:c"), Error);
}

TEST(PerturbationTest, ZeroWidthHasNoSpread) {
  const FiniteGame game = PedestrianGame();
  PerturbationSpec spec;
  spec.delta_lo = spec.delta_hi = 0.0;
  const StrategyProfile profile = PureProfile(game, {1, 0});
  const PerturbationStats st = FinitePerturbationStats(game, profile, spec, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(st.std[i], 0.0, 1e-12);
    EXPECT_NEAR(st.mean[i], st.nominal[i], 1e-12);
    EXPECT_NEAR(st.min[i], st.max[i], 1e-12);
  }
  EXPECT_NEAR(st.nominal[0], 9.0, 1e-12);
}

TEST(PerturbationTest, ExactMomentsAgreeWithMonteCarlo) {
  const FiniteGame game = InspectionGame();
  const StrategyProfile profile = {MixedStrategy(std::vector<double>{0.5, 0.5}),
                                   MixedStrategy(std::vector<double>{0.5, 0.5})};
  PerturbationSpec spec;
  spec.draws = 20000;
  const PerturbationStats st = FinitePerturbationStats(game, profile, spec, 3);
  for (std::size_t i = 0; i < 2; ++i) {
    const double se = st.std[i] / std::sqrt(spec.draws) + 1e-12;
    EXPECT_LT(std::abs(st.mean[i] - st.mc_mean[i]), 5 * se);
    EXPECT_NEAR(st.std[i], st.mc_std[i], 0.05 * st.std[i] + 1e-12);
    EXPECT_LE(st.min[i], st.mean[i]);
    EXPECT_GE(st.max[i], st.mean[i]);
  }
  // Player 1's payoff against inspection mix y is 10 (1 - y) with the
  // shift moving inspection mass, so the spread is 10 * std(U[-.05, .05]) / 2.
  EXPECT_NEAR(st.std[0], 5.0 * 0.1 / std::sqrt(12.0), 1e-9);
}

TEST(PerturbationTest, CournotStatsAreSeeded) {
  const CournotModel model = CournotSymmetricModel();
  const ActionProfile a(4, Eigen::Vector3d(15, 26, 20));
  PerturbationSpec spec;
  spec.draws = 2000;
  const PerturbationStats x = CournotPerturbationStats(model, a, spec, 5);
  const PerturbationStats y = CournotPerturbationStats(model, a, spec, 5);
  EXPECT_EQ(x.mean, y.mean);
  EXPECT_EQ(x.std, y.std);
  EXPECT_GT(x.std[0], 0.0);
  EXPECT_NEAR(x.nominal[0], CournotProfit(model, 0, a), 1e-10);
}

TEST(DeviationTest, HandValues) {
  const FiniteGame game = PedestrianGame();
  // (D,W) with the family crossing 10% of the time.
  EXPECT_NEAR(DeviationPayoff(game, 0, {1, 0}, 1, 1, 0.1), 7.6, 1e-12);
  EXPECT_NEAR(DeviationPayoff(game, 0, {0, 0}, 1, 1, 0.1), 4.0, 1e-12);
  EXPECT_NEAR(DeviationPayoff(game, 0, {2, 0}, 1, 1, 0.7), 0.0, 1e-12);
}

TEST(DeviationTest, PedestrianCurveIsAffine) {
  const DeviationCurve curve = PedestrianDeviationCurve(51);
  EXPECT_NEAR(curve.nash_line.intercept, 10.0, 1e-10);
  EXPECT_NEAR(curve.nash_line.slope, -60.0, 1e-10);
  EXPECT_NEAR(curve.sre_line.intercept, 9.0, 1e-10);
  EXPECT_NEAR(curve.sre_line.slope, -14.0, 1e-10);
  EXPECT_NEAR(curve.security_line.intercept, 0.0, 1e-10);
  EXPECT_NEAR(curve.security_line.slope, 0.0, 1e-10);
  EXPECT_NEAR(curve.crossing, 1.0 / 46, 1e-12);
  for (std::size_t k = 0; k < curve.f.size(); ++k) {
    EXPECT_NEAR(curve.nash[k], 10 - 60 * curve.f[k], 1e-12);
    EXPECT_NEAR(curve.sre[k], 9 - 14 * curve.f[k], 1e-12);
    EXPECT_NEAR(curve.security[k], 0.0, 1e-12);
  }
}

TEST(ThresholdTest, PedestrianGridAndBisection) {
  const MetricGame game(PedestrianGame());
  const auto thresholds = PureSetThresholds(game, AmbiguitySpec::Uniform(0.0),
                                            MakeGrid(0, 1, 0.01), 1e-9);
  ASSERT_EQ(thresholds.size(), 3u);
  EXPECT_EQ(thresholds[0].grid_value, 0.03);
  EXPECT_EQ(thresholds[1].grid_value, 0.11);
  EXPECT_EQ(thresholds[2].grid_value, 0.65);
  EXPECT_NEAR(thresholds[0].bisected, 1.0 / 46, 1e-7);
  EXPECT_NEAR(thresholds[1].bisected, 0.1, 1e-7);
  EXPECT_NEAR(thresholds[2].bisected, 9.0 / 14, 1e-7);
  EXPECT_EQ(FormatPureSet(game.game(), thresholds[2].after), "{(S,W)}");
}

TEST(WorstEquilibriumTest, PicksLowestTotal) {
  const FiniteGame game = PedestrianGame();
  std::vector<Equilibrium> eqs(2);
  eqs[0].profile = PureProfile(game, {0, 0});
  eqs[1].profile = PureProfile(game, {2, 1});
  EXPECT_NEAR(SocialPayoff(game, eqs[0].profile), 9.0, 1e-12);
  EXPECT_EQ(WorstEquilibrium(game, eqs), 0);
  EXPECT_EQ(WorstEquilibrium(game, {}), -1);
}

TEST(ExperimentTest, DefaultConfigs) {
  EXPECT_EQ(DefaultExperimentConfig("pedestrian").grid.size(), 101u);
  EXPECT_EQ(DefaultExperimentConfig("cournot_symmetric").grid.back(), 20.0);
  EXPECT_THROW(DefaultExperimentConfig("nope"), Error);
}

TEST(ExperimentTest, OutputIsDeterministicAcrossThreadCounts) {
  ExperimentConfig config = DefaultExperimentConfig("inspection");
  config.grid = MakeGrid(0, 0.5, 0.05);
  config.perturbation.draws = 500;
  config.out_dir = TempDir("one");
  config.threads = 1;
  const ExperimentReport a = RunExperiment(config);
  config.out_dir = TempDir("two");
  config.threads = 2;
  const ExperimentReport b = RunExperiment(config);
  ASSERT_EQ(a.files.size(), b.files.size());
  for (std::size_t k = 0; k < a.files.size(); ++k) {
    EXPECT_EQ(fs::path(a.files[k]).filename(), fs::path(b.files[k]).filename());
    EXPECT_EQ(ReadFile(a.files[k]), ReadFile(b.files[k])) << a.files[k];
  }
  const std::string curves =
      ReadFile(fs::path(config.out_dir) / "inspection_curves.csv");
  EXPECT_EQ(curves.substr(0, curves.find(',')), "epsilon");
}

TEST(ExperimentTest, CournotCsvColumns) {
  const CournotModel model = CournotSymmetricModel();
  ConcaveOptions options;
  PerturbationSpec spec;
  spec.draws = 100;
  const auto rows = SweepCournot(model, {0.0, 2.0}, options, spec, 1, 1);
  ASSERT_EQ(rows.size(), 2u);
  std::ostringstream out;
  WriteCournotCsv(out, model, rows);
  const std::string header = out.str().substr(0, out.str().find('\n'));
  EXPECT_EQ(header.rfind("epsilon,payoff_firm_1,", 0), 0u) << header;
  EXPECT_NE(header.find("out_firm_4_market_3"), std::string::npos);
  EXPECT_NE(header.find("gap_firm_4"), std::string::npos);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli("solve " + Data("pedestrian.json") + " --eps 0.3"), 0);
  EXPECT_EQ(RunCli("solve " + Data("bad_triangle.json")), 2);
  EXPECT_EQ(RunCli("solve /nonexistent.json"), 2);
  EXPECT_EQ(RunCli("solve " + Data("pedestrian.json") + " --format yaml"), 2);
  EXPECT_EQ(RunCli("verify " + Data("pedestrian.json") +
                   " --eps 0.3 --profile '0,1,0;1,0'"),
            0);
  EXPECT_EQ(RunCli("verify " + Data("pedestrian.json") +
                   " --eps 0.3 --profile '1,0,0;1,0'"),
            1);
  EXPECT_EQ(RunCli("solve " + Data("cournot_duopoly.json") + " --eps 3"), 0);
  EXPECT_EQ(RunCli("reproduce nope"), 2);
}

TEST(CliTest, SweepWritesCsv) {
  const fs::path dir = TempDir("cli");
  const fs::path csv = dir / "sweep.csv";
  ASSERT_EQ(RunCli("sweep " + Data("pedestrian.json") +
                   " --eps-grid 0:0.2:0.1 --out " + csv.string()),
            0);
  const std::string text = ReadFile(csv);
  EXPECT_EQ(text.rfind("epsilon,eq_index,method", 0), 0u);
}

}  // namespace
}  // namespace sre
