#ifndef SRE_ROBUST_RESPONSE_H
#define SRE_ROBUST_RESPONSE_H

#include <Eigen/Dense>
#include <cstddef>

#include "sre/game.h"

namespace sre {

struct RobustValue {
  double value = 0.0;
  double lambda = 0.0;
};

// sup_{lambda >= 0} -lambda eps^s + E_center[min_b {ubar(b) + lambda d(a,b)^s}]
// with ubar = p_i^T U^i, solved as an LP in (lambda, xi). At eps = 0 the
// nominal expectation is returned with lambda = 0.
RobustValue ComputeRobustValue(const FiniteGame& game, std::size_t i,
                               const MixedStrategy& p_i,
                               const JointDistribution& center,
                               const ActionMetric& metric, double s,
                               double epsilon);

// Convenience form: center is the product of the other players' strategies.
RobustValue ComputeRobustValue(const MetricGame& game, std::size_t i,
                               const StrategyProfile& profile,
                               const AmbiguitySpec& spec);

struct RobustBestResponse {
  MixedStrategy strategy;
  double lambda = 0.0;
  Eigen::VectorXd xi;  // one entry per opponent joint action
  double value = 0.0;
};

// Maximizes the robust value over player i's simplex with one LP in
// (p, lambda, xi).
RobustBestResponse ComputeRobustBestResponse(const FiniteGame& game,
                                             std::size_t i,
                                             const JointDistribution& center,
                                             const ActionMetric& metric,
                                             double s, double epsilon);

RobustBestResponse ComputeRobustBestResponse(const MetricGame& game,
                                             std::size_t i,
                                             const StrategyProfile& profile,
                                             const AmbiguitySpec& spec);

struct Security {
  MixedStrategy strategy;
  double value = 0.0;
};

// Maximin strategy of player i against arbitrary joint opponent play.
Security SecurityStrategy(const FiniteGame& game, std::size_t i);

// 2 max|u^i| / eps^s; the optimal lambda never needs to exceed it.
double DualLambdaBound(const FiniteGame& game, std::size_t i,
                       const AmbiguitySpec& spec);

}  // namespace sre

#endif  // SRE_ROBUST_RESPONSE_H
