#include "sre/robust_response.h"

#include <cmath>

#include "sre/error.h"
#include "sre/lp.h"

namespace sre {
namespace {

void CheckInputs(const FiniteGame& game, std::size_t i,
                 const JointDistribution& center, const ActionMetric& metric,
                 double s, double epsilon) {
  if (i >= game.num_players()) throw ShapeError("player index out of range");
  if (center.dims() != game.OpponentDims(i)) {
    throw ShapeError("center is not over the opponents' actions");
  }
  if (metric.size() != game.NumOpponentProfiles(i)) {
    throw ShapeError("metric does not match the opponents' joint space");
  }
  if (!(s >= 1.0)) throw ValidationError("transport order s must be >= 1");
  if (!(epsilon >= 0.0)) throw ValidationError("radius must be >= 0");
}

LpSolution SolveOrThrow(const LpProblem& lp, const char* what) {
  LpSolution sol = SolveLp(lp);
  if (!sol.optimal()) {
    throw NumericalError(std::string(what) + " LP ended " +
                         ToString(sol.status));
  }
  return sol;
}

}  // namespace

RobustValue ComputeRobustValue(const FiniteGame& game, std::size_t i,
                               const MixedStrategy& p_i,
                               const JointDistribution& center,
                               const ActionMetric& metric, double s,
                               double epsilon) {
  CheckInputs(game, i, center, metric, s, epsilon);
  if (epsilon == 0.0) return {ExpectedPayoff(game, i, p_i, center), 0.0};
  const Eigen::VectorXd ubar = game.PayoffMatrix(i).transpose() * p_i.probs();
  const Eigen::MatrixXd cost = metric.PowerCost(s);
  const Eigen::Index m = ubar.size();

  // Columns: lambda, xi(0..m-1). Rows: xi(a) - lambda d(a,b)^s <= ubar(b).
  LpProblem lp(m * m, m + 1, ObjectiveSense::kMaximize);
  lp.objective[0] = -std::pow(epsilon, s);
  lp.objective.tail(m) = center.probs();
  for (Eigen::Index a = 0; a < m; ++a) {
    lp.SetFree(1 + a);
    for (Eigen::Index b = 0; b < m; ++b) {
      const Eigen::Index r = a * m + b;
      lp.constraints(r, 0) = -cost(a, b);
      lp.constraints(r, 1 + a) = 1.0;
      lp.SetRow(r, RowSense::kLessEqual, ubar[b]);
    }
  }
  LpSolution sol = SolveOrThrow(lp, "robust value");
  return {sol.objective, sol.primal[0]};
}

RobustValue ComputeRobustValue(const MetricGame& game, std::size_t i,
                               const StrategyProfile& profile,
                               const AmbiguitySpec& spec) {
  CheckProfile(game.game(), profile);
  return ComputeRobustValue(game.game(), i, profile[i],
                            ProductDistribution(profile, i),
                            game.OpponentMetric(i), spec.s,
                            spec.EpsilonFor(i));
}

RobustBestResponse ComputeRobustBestResponse(const FiniteGame& game,
                                             std::size_t i,
                                             const JointDistribution& center,
                                             const ActionMetric& metric,
                                             double s, double epsilon) {
  CheckInputs(game, i, center, metric, s, epsilon);
  const Eigen::MatrixXd& u = game.PayoffMatrix(i);
  const Eigen::Index n = u.rows(), m = u.cols();
  RobustBestResponse out;

  if (epsilon == 0.0) {
    LpProblem lp(1, n, ObjectiveSense::kMaximize);
    lp.objective = u * center.probs();
    lp.constraints.setOnes();
    lp.SetRow(0, RowSense::kEqual, 1.0);
    LpSolution sol = SolveOrThrow(lp, "nominal best response");
    out.strategy = MixedStrategy(sol.primal);
    out.xi = u.transpose() * out.strategy.probs();
    out.value = sol.objective;
    return out;
  }

  // Columns: p(0..n-1), lambda, xi(0..m-1).
  const Eigen::MatrixXd cost = metric.PowerCost(s);
  LpProblem lp(m * m + 1, n + 1 + m, ObjectiveSense::kMaximize);
  lp.objective[n] = -std::pow(epsilon, s);
  lp.objective.tail(m) = center.probs();
  for (Eigen::Index a = 0; a < m; ++a) {
    lp.SetFree(n + 1 + a);
    for (Eigen::Index b = 0; b < m; ++b) {
      const Eigen::Index r = a * m + b;
      lp.constraints.block(r, 0, 1, n) = -u.col(b).transpose();
      lp.constraints(r, n) = -cost(a, b);
      lp.constraints(r, n + 1 + a) = 1.0;
      lp.SetRow(r, RowSense::kLessEqual, 0.0);
    }
  }
  lp.constraints.block(m * m, 0, 1, n).setOnes();
  lp.SetRow(m * m, RowSense::kEqual, 1.0);
  LpSolution sol = SolveOrThrow(lp, "robust best response");
  out.strategy = MixedStrategy(Eigen::VectorXd(sol.primal.head(n)));
  out.lambda = std::max(sol.primal[n], 0.0);
  out.xi = sol.primal.tail(m);
  out.value = sol.objective;
  return out;
}

RobustBestResponse ComputeRobustBestResponse(const MetricGame& game,
                                             std::size_t i,
                                             const StrategyProfile& profile,
                                             const AmbiguitySpec& spec) {
  CheckProfile(game.game(), profile);
  return ComputeRobustBestResponse(game.game(), i,
                                   ProductDistribution(profile, i),
                                   game.OpponentMetric(i), spec.s,
                                   spec.EpsilonFor(i));
}

Security SecurityStrategy(const FiniteGame& game, std::size_t i) {
  if (i >= game.num_players()) throw ShapeError("player index out of range");
  const Eigen::MatrixXd& u = game.PayoffMatrix(i);
  const Eigen::Index n = u.rows(), m = u.cols();
  // Columns: p(0..n-1), t. Rows: t - p^T u(., b) <= 0, sum p = 1.
  LpProblem lp(m + 1, n + 1, ObjectiveSense::kMaximize);
  lp.objective[n] = 1.0;
  lp.SetFree(n);
  for (Eigen::Index b = 0; b < m; ++b) {
    lp.constraints.block(b, 0, 1, n) = -u.col(b).transpose();
    lp.constraints(b, n) = 1.0;
    lp.SetRow(b, RowSense::kLessEqual, 0.0);
  }
  lp.constraints.block(m, 0, 1, n).setOnes();
  lp.SetRow(m, RowSense::kEqual, 1.0);
  LpSolution sol = SolveOrThrow(lp, "security");
  return {MixedStrategy(Eigen::VectorXd(sol.primal.head(n))), sol.objective};
}

double DualLambdaBound(const FiniteGame& game, std::size_t i,
                       const AmbiguitySpec& spec) {
  const double eps = spec.EpsilonFor(i);
  if (eps <= 0.0) {
    throw ValidationError("dual multiplier bound undefined at zero radius");
  }
  return 2.0 * game.MaxAbsPayoff(i) / std::pow(eps, spec.s);
}

}  // namespace sre
