#include "sre/transport.h"

#include <cmath>

#include "sre/error.h"
#include "sre/lp.h"

namespace sre {
namespace {

Eigen::Index Cell(Eigen::Index a, Eigen::Index b, Eigen::Index n) {
  return a * n + b;
}

}  // namespace

OtResult OtDistance(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                    const ActionMetric& metric, double s) {
  const Eigen::Index n = mu.size();
  if (nu.size() != n || static_cast<Eigen::Index>(metric.size()) != n) {
    throw ShapeError("transport marginals and metric must share a space");
  }
  const Eigen::MatrixXd cost = metric.PowerCost(s);
  LpProblem lp(2 * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const Eigen::Index v = Cell(a, b, n);
      lp.objective[v] = cost(a, b);
      lp.constraints(a, v) = 1.0;
      lp.constraints(n + b, v) = 1.0;
    }
    lp.SetRow(a, RowSense::kEqual, mu[a]);
    lp.SetRow(n + a, RowSense::kEqual, nu[a]);
  }
  LpSolution sol = SolveLp(lp);
  if (!sol.optimal()) {
    throw NumericalError(std::string("transport LP ended ") +
                         ToString(sol.status));
  }
  OtResult out;
  out.distance = std::pow(std::max(sol.objective, 0.0), 1.0 / s);
  out.coupling = Eigen::Map<const Eigen::MatrixXd>(sol.primal.data(), n, n)
                     .transpose();
  return out;
}

OtResult OtDistance(const JointDistribution& mu, const JointDistribution& nu,
                    const ActionMetric& metric, double s) {
  if (mu.dims() != nu.dims()) {
    throw ShapeError("transport marginals live on different spaces");
  }
  return OtDistance(mu.probs(), nu.probs(), metric, s);
}

bool BallContains(const JointDistribution& center,
                  const JointDistribution& candidate,
                  const ActionMetric& metric, double s, double epsilon) {
  return OtDistance(center, candidate, metric, s).distance <=
         epsilon + kBallSlack;
}

WorstCase WorstCasePayoffPrimal(const FiniteGame& game, std::size_t i,
                                const MixedStrategy& p_i,
                                const JointDistribution& center,
                                const ActionMetric& metric, double s,
                                double epsilon) {
  if (i >= game.num_players()) throw ShapeError("player index out of range");
  const Eigen::MatrixXd& u = game.PayoffMatrix(i);
  if (static_cast<Eigen::Index>(p_i.size()) != u.rows()) {
    throw ShapeError("strategy length does not match player's action set");
  }
  if (center.dims() != game.OpponentDims(i)) {
    throw ShapeError("center is not over the opponents' actions");
  }
  const Eigen::Index n = u.cols();
  if (static_cast<Eigen::Index>(metric.size()) != n) {
    throw ShapeError("metric does not match the opponents' joint space");
  }
  const Eigen::VectorXd ubar = u.transpose() * p_i.probs();
  const Eigen::MatrixXd cost = metric.PowerCost(s);

  LpProblem lp(n + 1, n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const Eigen::Index v = Cell(a, b, n);
      lp.objective[v] = ubar[b];
      lp.constraints(a, v) = 1.0;
      lp.constraints(n, v) = cost(a, b);
    }
    lp.SetRow(a, RowSense::kEqual, center[a]);
  }
  lp.SetRow(n, RowSense::kLessEqual, std::pow(epsilon, s));
  LpSolution sol = SolveLp(lp);
  if (!sol.optimal()) {
    throw NumericalError(std::string("worst-case LP ended ") +
                         ToString(sol.status));
  }
  WorstCase out;
  out.coupling = Eigen::Map<const Eigen::MatrixXd>(sol.primal.data(), n, n)
                     .transpose();
  Eigen::VectorXd rho = out.coupling.colwise().sum().transpose();
  rho = rho.cwiseMax(0.0);
  rho /= rho.sum();
  out.worst = JointDistribution(center.dims(), rho);
  out.value = sol.objective;
  return out;
}

}  // namespace sre
