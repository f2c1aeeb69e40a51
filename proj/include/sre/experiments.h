#ifndef SRE_EXPERIMENTS_H
#define SRE_EXPERIMENTS_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sre/concave.h"
#include "sre/cournot.h"
#include "sre/equilibrium.h"
#include "sre/game.h"

namespace sre {

// Built-in games. Congestion costs are negated into payoffs.
FiniteGame PedestrianGame();
FiniteGame InspectionGame();
FiniteGame FreeRiderGame();
FiniteGame CongestionGame(bool with_bridge = true);
CournotModel CournotSymmetricModel();
CournotModel CournotAsymmetricModel();

const std::vector<std::string>& ExperimentNames();

// "lo:hi:step" inclusive of both ends; points are rounded to 1e-12.
std::vector<double> ParseGrid(const std::string& text);
std::vector<double> MakeGrid(double lo, double hi, double step);

struct PerturbationSpec {
  // Finite games: each opponent's strategy moves by delta ~ U[lo, hi] from
  // its first action to its second, clamped to stay on the simplex.
  double delta_lo = -0.05;
  double delta_hi = 0.05;
  // Continuous games: Gaussian noise on every opponent quantity with
  // standard deviation relative_std * quantity, projected back.
  double relative_std = 0.20;
  int draws = 10000;
};

struct PerturbationStats {
  std::vector<double> nominal;  // payoff at the unperturbed profile
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<double> min;
  std::vector<double> max;
  std::vector<double> mc_mean;  // Monte Carlo cross-check
  std::vector<double> mc_std;
};

// Finite games: mean and range exact (payoff is multilinear in the shifts);
// std exact for two players and Monte Carlo otherwise.
PerturbationStats FinitePerturbationStats(const FiniteGame& game,
                                          const StrategyProfile& profile,
                                          const PerturbationSpec& spec,
                                          std::uint64_t seed);

// Cournot: all statistics are Monte Carlo over spec.draws draws.
PerturbationStats CournotPerturbationStats(const CournotModel& model,
                                           const ActionProfile& actions,
                                           const PerturbationSpec& spec,
                                           std::uint64_t seed);

// Payoff of player i when every player follows `pure` except player j, who
// plays `deviation` with probability f.
double DeviationPayoff(const FiniteGame& game, std::size_t i,
                       const std::vector<std::size_t>& pure, std::size_t j,
                       std::size_t deviation, double f);

struct DeviationLine {
  double intercept = 0.0;
  double slope = 0.0;
};

DeviationLine FitDeviationLine(const FiniteGame& game, std::size_t i,
                               const std::vector<std::size_t>& pure,
                               std::size_t j, std::size_t deviation);

struct DeviationCurve {
  std::vector<double> f;
  std::vector<double> nash, sre, security;
  DeviationLine nash_line, sre_line, security_line;
  // Deviation mass where the robust profile starts to pay more.
  double crossing = 0.0;
};

// Vehicle payoff against a family that crosses with probability f, for the
// Nash profile (M,W), the robust profile (D,W) and the security action S.
DeviationCurve PedestrianDeviationCurve(int points = 101);

using PureSet = std::vector<std::vector<std::size_t>>;

struct Threshold {
  double grid_value = 0.0;  // first grid point showing the new set
  double bisected = 0.0;    // NaN when the bracket holds several changes
  PureSet before, after;
};

// Changes of the pure-equilibrium set along a grid, refined by bisection.
std::vector<Threshold> PureSetThresholds(const MetricGame& game,
                                         const AmbiguitySpec& base,
                                         const std::vector<double>& grid,
                                         double bisect_tol = 1e-6);

std::string FormatPureSet(const FiniteGame& game, const PureSet& set);

double SocialPayoff(const FiniteGame& game, const StrategyProfile& profile);

// Index of the equilibrium with the lowest total payoff, or -1 if empty.
int WorstEquilibrium(const FiniteGame& game,
                     const std::vector<Equilibrium>& eqs);

struct CournotSweepRow {
  double epsilon = 0.0;
  PureSre sre;
  std::vector<double> profits;  // nominal profits at the equilibrium
  PerturbationStats stats;
};

// Grid points run on a worker pool; row k uses seed + k.
std::vector<CournotSweepRow> SweepCournot(const CournotModel& model,
                                          const std::vector<double>& grid,
                                          const ConcaveOptions& options,
                                          const PerturbationSpec& spec,
                                          std::uint64_t seed, int threads = 0);

struct ExperimentConfig {
  std::string name;
  std::vector<double> grid;
  PerturbationSpec perturbation;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool deviation_curve = false;
  int threads = 0;
};

// Canonical grid per experiment: [0, 1] step 0.01 for the finite games and
// [0, 20] step 1 for Cournot. Throws ValidationError on unknown names.
ExperimentConfig DefaultExperimentConfig(const std::string& name);

struct ExperimentReport {
  std::vector<std::string> files;
  std::string summary;
};

// Runs one experiment, writes its CSV bundle and summary.txt into out_dir.
ExperimentReport RunExperiment(const ExperimentConfig& config);

// Plot-ready CSV for a finite sweep, one row per grid point using the
// worst equilibrium: epsilon, utility_p{i}, utility_p{i}_up, _down, _min,
// _max, then the same with _ne for the eps = 0 equilibrium. Costs are
// reported instead of payoffs when `costs` is set.
void WriteFiniteCurveCsv(std::ostream& out, const FiniteGame& game,
                         const std::vector<SweepRow>& rows,
                         const PerturbationSpec& spec, std::uint64_t seed,
                         bool costs);

// One row per (epsilon, equilibrium) with the sweep columns followed by
// utility_p{i}, mean_p{i}, std_p{i}, min_p{i}, max_p{i}.
void WriteFiniteStatsCsv(std::ostream& out, const FiniteGame& game,
                         const std::vector<SweepRow>& rows,
                         const PerturbationSpec& spec, std::uint64_t seed);

// epsilon, payoff_firm_{i}, payoff_firm_{i}_up, _down, _min, _max,
// out_firm_{i}_market_{t}, lambda_firm_{i}, value_firm_{i}, gap_firm_{i}.
void WriteCournotCsv(std::ostream& out, const CournotModel& model,
                     const std::vector<CournotSweepRow>& rows);

}  // namespace sre

#endif  // SRE_EXPERIMENTS_H
