#ifndef SRE_CONCAVE_H
#define SRE_CONCAVE_H

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sre/error.h"
#include "sre/polytope.h"

namespace sre {

// u^i(a^i, a^{-i}) = a^i' Q a^i + a^i' B a^{-i} + q' a^i over the polytope
// `actions`; a^{-i} stacks the other players' actions in increasing order.
struct QuadraticPlayer {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd B;
  Eigen::VectorXd q;
  Polytope actions;
};

using ActionProfile = std::vector<Eigen::VectorXd>;

class QuadraticGame {
 public:
  QuadraticGame() = default;
  // Checks shapes, Q <= 0 (eigenvalues within 1e-8) and that every action
  // polytope is non-empty and bounded.
  explicit QuadraticGame(std::vector<QuadraticPlayer> players);

  std::size_t num_players() const { return players_.size(); }
  const QuadraticPlayer& player(std::size_t i) const { return players_[i]; }
  Eigen::Index dim(std::size_t i) const { return players_[i].q.size(); }

  Eigen::VectorXd Opponents(const ActionProfile& a, std::size_t i) const;
  double Payoff(std::size_t i, const ActionProfile& a) const;
  double Payoff(std::size_t i, const Eigen::VectorXd& a_i,
                const Eigen::VectorXd& a_minus_i) const;

  // Upper bound on |u^i| over the product of action polytopes.
  double PayoffBound(std::size_t i) const;

  // 2 PayoffBound(i) / eps^2, the cap on the surrogate multiplier.
  double LambdaBound(std::size_t i, double epsilon) const;

  // Polytope of the stacked opponents' actions.
  Polytope OpponentPolytope(std::size_t i) const;

 private:
  std::vector<QuadraticPlayer> players_;
  std::vector<Eigen::VectorXd> box_lo_, box_hi_;
};

void CheckActionProfile(const QuadraticGame& game, const ActionProfile& a);

enum class Adversary {
  kPolytopes,      // deviations stay in the opponents' action sets
  kUnconstrained,  // deviations range over all of R^n
};

struct SurrogateEval {
  double value = 0.0;
  Eigen::VectorXd grad_a;
  double grad_lambda = 0.0;
  // Worst-case opponent actions.
  Eigen::VectorXd worst;
};

// Surrogate payoff with type-2 Euclidean transport:
//   u(a, a^{-i}) - lambda eps^2
//   + max_{tau >= 0} -|B'a + G tau|^2 / (4 lambda) + tau'(A a^{-i} - d),
// where G stacks the opponents' constraint normals. The inner problem is a
// PSD LCP; lambda = 0 is the limit, an LP over the opponents' polytopes.
// Gradients follow from the optimal worst case.
SurrogateEval SurrogatePayoff(const QuadraticGame& game, std::size_t i,
                              const Eigen::VectorXd& a_i, double lambda,
                              const Eigen::VectorXd& a_minus_i, double epsilon,
                              Adversary adversary = Adversary::kPolytopes);

// u(a, a^{-i}) - eps |B'a|: the surrogate maximized over lambda when the
// adversary is unconstrained.
double RegularizedPayoffUnconstrained(const QuadraticGame& game, std::size_t i,
                                      const Eigen::VectorXd& a_i,
                                      const Eigen::VectorXd& a_minus_i,
                                      double epsilon);

struct LambdaOpt {
  double lambda = 0.0;
  double value = 0.0;
};

// sup over lambda in [0, bound] of the surrogate, by bisection on the sign of
// its derivative (the surrogate is concave in lambda).
LambdaOpt MaximizeOverLambda(const QuadraticGame& game, std::size_t i,
                             const Eigen::VectorXd& a_i,
                             const Eigen::VectorXd& a_minus_i, double epsilon,
                             double bound,
                             Adversary adversary = Adversary::kPolytopes);

struct PureSre {
  ActionProfile actions;
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<double> gaps;
  int iterations = 0;
  // Proximal weight in force at convergence.
  double gamma = 0.0;
  double epsilon = 0.0;
};

class ConcaveConvergenceError : public Error {
 public:
  ConcaveConvergenceError(const std::string& what, ActionProfile last,
                          std::vector<double> gaps)
      : Error(ErrorKind::kNumerical, "numerical error: " + what),
        last_(std::move(last)),
        gaps_(std::move(gaps)) {}

  const ActionProfile& last_iterate() const { return last_; }
  const std::vector<double>& gaps() const { return gaps_; }

 private:
  ActionProfile last_;
  std::vector<double> gaps_;
};

struct ConcaveOptions {
  double gamma = 1.0;
  double tol = 1e-6;
  int max_iter = 10000;
  bool gauss_seidel = false;
  double verify_delta = 1e-4;
  int verify_restarts = 4;
  std::uint64_t seed = 1;
  // Projected-gradient settings for each proximal subproblem.
  int inner_max_iter = 20000;
  double inner_tol = 1e-10;
};

// Proximal best responses
//   (a, lambda) <- argmax surrogate - gamma |a - a^k|^2 - gamma (lambda - l^k)^2
// over the action polytope and [0, LambdaBound]. Each subproblem is solved by
// projected gradient ascent with backtracking. At eps = 0 the multiplier is
// dropped and the iteration is a proximal Nash solve. The proximal weight is
// doubled whenever the iteration stops making progress. Throws
// ConcaveConvergenceError when the cap is hit or the fixed point fails
// VerifySreConcave.
PureSre SolveSreConcave(const QuadraticGame& game, double epsilon,
                        const ConcaveOptions& options = {},
                        const ActionProfile& start = {});

struct ConcaveReport {
  std::vector<double> gaps;
  std::vector<double> values;       // sup over lambda at the candidate
  std::vector<double> best_values;  // best deviation found
  bool pass = false;
};

// For each player: best surrogate value found by multi-start projected
// gradient over (a, lambda) minus the candidate's value sup over lambda.
ConcaveReport VerifySreConcave(const QuadraticGame& game,
                               const ActionProfile& candidate, double epsilon,
                               double delta, int restarts = 4,
                               std::uint64_t seed = 7);

// Worst-case payoff of player i at a profile: sup over lambda of the
// surrogate, or the nominal payoff at eps = 0.
double RobustPayoff(const QuadraticGame& game, std::size_t i,
                    const ActionProfile& a, double epsilon);

// Schema: {"players": [{"Q": [[...]], "B": [[...]], "q": [...],
//          "D": [[...]], "d": [...]}, ...]} with D holding one constraint
// normal per row.
QuadraticGame ParseQuadraticGame(const nlohmann::json& doc);

}  // namespace sre

#endif  // SRE_CONCAVE_H
