#ifndef SRE_EQUILIBRIUM_H
#define SRE_EQUILIBRIUM_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sre/error.h"
#include "sre/game.h"
#include "sre/lcp.h"

namespace sre {

enum class Method { kLcp, kFixedPoint, kOracle };

const char* ToString(Method method);

struct Equilibrium {
  StrategyProfile profile;
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<double> gaps;
  Method method = Method::kLcp;
  double epsilon = 0.0;
};

struct VerifyReport {
  std::vector<double> gaps;         // best robust value minus own
  std::vector<double> values;       // robust value of the profile
  std::vector<double> best_values;  // robust best-response value
  std::vector<double> lambdas;      // optimal multiplier at the profile
  bool pass = false;
};

// Exact LP-based check that no player gains more than delta by deviating.
VerifyReport VerifySre(const MetricGame& game, const StrategyProfile& profile,
                       const AmbiguitySpec& spec, double delta);

// Per-player offsets into the LCP vector for the two-player system.
// Block order per player: p (n_i), lambda (1, absent at eps = 0),
// xi (m, stored negated), kappa (1), eta (m*m, or m at eps = 0), where
// m = n_{-i}.
struct LcpBlock {
  std::size_t p = 0, lambda = 0, xi = 0, kappa = 0, eta = 0;
  std::size_t num_actions = 0, num_opponent = 0;
  bool has_lambda = true;
  // Constant added to the player's payoffs so every entry is <= -1.
  double shift = 0.0;
};

struct SreLcp {
  LcpProblem problem;
  std::vector<LcpBlock> blocks;
  // Count of the optimality-system unknowns per player, including the
  // multipliers tau and omega that live in w:
  // n_i + 1 + m + 1 + n_i + 1 + m*m, summed over both players.
  std::size_t kkt_unknowns = 0;
};

// Stacks both players' robust best-response optimality conditions into one
// LCP whose solutions are the equilibria.
SreLcp AssembleLcp2Player(const MetricGame& game, const AmbiguitySpec& spec);

// Reads the strategies out of an LCP solution.
StrategyProfile RecoverProfile(const SreLcp& lcp, const Eigen::VectorXd& z);

struct SolveOptions {
  int n_starts = 8;
  // Cap on distinct LCP solutions explored by path following.
  std::size_t max_solutions = 64;
  std::uint64_t seed = 1;
  double dedup_tol = 1e-6;
  double verify_delta = 1e-6;
  LcpOptions lcp;
};

// Multi-start Lemke: the all-ones covering vector plus n_starts random ones,
// then complementary-pivoting paths out of every solution found, one per
// dropped label. Returns every distinct verified equilibrium; throws
// kNoEquilibrium if none. Not guaranteed to be complete.
std::vector<Equilibrium> SolveSre2Player(const MetricGame& game,
                                         const AmbiguitySpec& spec,
                                         const SolveOptions& options = {});

struct FixedPointOptions {
  double damping = 0.5;
  double min_damping = 1e-4;
  double tol = 1e-9;
  int max_iter = 5000;
  std::uint64_t seed = 1;
  double verify_delta = 1e-5;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, StrategyProfile last,
                   std::vector<double> gaps)
      : Error(ErrorKind::kNumerical, "numerical error: " + what),
        last_(std::move(last)),
        gaps_(std::move(gaps)) {}

  const StrategyProfile& last_iterate() const { return last_; }
  const std::vector<double>& gaps() const { return gaps_; }

 private:
  StrategyProfile last_;
  std::vector<double> gaps_;
};

// Damped simultaneous robust best responses p <- (1 - eta) p + eta BR(p),
// halving eta whenever the largest gap stops improving.
Equilibrium SolveSreNPlayer(const MetricGame& game, const AmbiguitySpec& spec,
                            const FixedPointOptions& options = {});

// Drops profiles within tol (l-infinity) of an earlier one.
std::vector<Equilibrium> Deduplicate(std::vector<Equilibrium> eqs,
                                     double tol = 1e-6);

double ProfileDistance(const StrategyProfile& a, const StrategyProfile& b);

// Profiles on the simplex grid with denominator `resolution` that pass
// VerifySre at delta. Throws if the grid exceeds 1e7 profiles.
std::vector<StrategyProfile> OracleGridEquilibria(const MetricGame& game,
                                                  const AmbiguitySpec& spec,
                                                  int resolution,
                                                  double delta);

// Pure profiles (one action index per player) that pass VerifySre at delta.
std::vector<std::vector<std::size_t>> PureEquilibria(const MetricGame& game,
                                                     const AmbiguitySpec& spec,
                                                     double delta = 1e-9);

StrategyProfile PureProfile(const FiniteGame& game,
                            const std::vector<std::size_t>& actions);

struct SweepRow {
  double epsilon = 0.0;
  std::vector<Equilibrium> equilibria;
};

struct SweepOptions {
  SolveOptions solve;
  FixedPointOptions fixed_point;
  int threads = 0;  // 0 means hardware concurrency
};

// One row per grid point; grid points run on a worker pool and rows come
// back in grid order. Row k uses seed options.solve.seed + k.
std::vector<SweepRow> SweepEpsilon(const MetricGame& game,
                                   const AmbiguitySpec& spec,
                                   const std::vector<double>& grid,
                                   const SweepOptions& options = {});

// Bisects a predicate that flips exactly once on [lo, hi] down to tol.
// Interior probes that contradict monotonicity raise a validation error.
double FindThreshold(const std::function<bool(double)>& predicate, double lo,
                     double hi, double tol = 1e-5, int probes = 16);

// Header and rows of the sweep CSV:
// epsilon, eq_index, method, p{player}_{action}..., lambda_{player}...,
// value_{player}..., gap_{player}...
void WriteSweepCsv(std::ostream& out, const FiniteGame& game,
                   const std::vector<SweepRow>& rows);

}  // namespace sre

#endif  // SRE_EQUILIBRIUM_H
