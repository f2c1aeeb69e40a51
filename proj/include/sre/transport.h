#ifndef SRE_TRANSPORT_H
#define SRE_TRANSPORT_H

#include <Eigen/Dense>
#include <cstddef>

#include "sre/game.h"

namespace sre {

// gamma(a, b) moves mass from source atom a to target atom b.
using Coupling = Eigen::MatrixXd;

struct OtResult {
  double distance = 0.0;
  Coupling coupling;
};

// W_s(mu, nu) with ground cost d^s, solved as a transportation LP.
OtResult OtDistance(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                    const ActionMetric& metric, double s);
OtResult OtDistance(const JointDistribution& mu, const JointDistribution& nu,
                    const ActionMetric& metric, double s);

// Slack added to the radius in BallContains.
constexpr double kBallSlack = 1e-8;

// True iff W_s(center, candidate) <= epsilon + kBallSlack.
bool BallContains(const JointDistribution& center,
                  const JointDistribution& candidate,
                  const ActionMetric& metric, double s, double epsilon);

struct WorstCase {
  double value = 0.0;
  JointDistribution worst;
  Coupling coupling;
};

// min over rho in the epsilon-ball around `center` of U^i(p_i, rho), as one
// LP over couplings with the center as fixed first marginal.
WorstCase WorstCasePayoffPrimal(const FiniteGame& game, std::size_t i,
                                const MixedStrategy& p_i,
                                const JointDistribution& center,
                                const ActionMetric& metric, double s,
                                double epsilon);

}  // namespace sre

#endif  // SRE_TRANSPORT_H
