#ifndef SRE_GAME_H
#define SRE_GAME_H

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sre {

// Probability vector over one player's actions. Entries down to -1e-9 are
// clamped to zero and the vector renormalized; anything worse throws.
class MixedStrategy {
 public:
  static constexpr double kClampTolerance = 1e-9;

  MixedStrategy() = default;
  explicit MixedStrategy(Eigen::VectorXd probs);
  explicit MixedStrategy(const std::vector<double>& probs);

  static MixedStrategy Pure(std::size_t num_actions, std::size_t action);
  static MixedStrategy Uniform(std::size_t num_actions);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  const Eigen::VectorXd& probs() const { return probs_; }

  // Index of the action with mass 1 (within tol), or size() if mixed.
  std::size_t PureAction(double tol = 1e-9) const;
  std::vector<std::size_t> Support(double tol = 1e-9) const;

 private:
  Eigen::VectorXd probs_;
};

using StrategyProfile = std::vector<MixedStrategy>;

// Distribution over the product of some players' action sets, stored densely
// with the last coordinate varying fastest. Need not be a product measure.
class JointDistribution {
 public:
  JointDistribution() = default;
  JointDistribution(std::vector<std::size_t> dims, Eigen::VectorXd probs);

  static JointDistribution PointMass(std::vector<std::size_t> dims,
                                     std::size_t flat_index);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }

 private:
  std::vector<std::size_t> dims_;
  Eigen::VectorXd probs_;
};

// Distance matrix on a finite action set. The constructor checks the metric
// axioms and names the first offending entry when one fails.
class ActionMetric {
 public:
  ActionMetric() = default;
  explicit ActionMetric(Eigen::MatrixXd dist);

  // 0/1 distance; the induced transport distance is total variation.
  static ActionMetric TotalVariation(std::size_t num_actions);

  std::size_t size() const { return dist_.rows(); }
  double operator()(std::size_t a, std::size_t b) const { return dist_(a, b); }
  const Eigen::MatrixXd& matrix() const { return dist_; }
  double Diameter() const { return dist_.size() ? dist_.maxCoeff() : 0.0; }

  // Entrywise d^s.
  Eigen::MatrixXd PowerCost(double s) const;

 private:
  Eigen::MatrixXd dist_;
};

enum class JointRule {
  kSumOfCoordinates,
};

struct AmbiguitySpec {
  double s = 1.0;
  // Either a single radius shared by every player or one radius per player.
  std::vector<double> epsilon = {0.0};
  JointRule joint_rule = JointRule::kSumOfCoordinates;

  static AmbiguitySpec Uniform(double epsilon, double s = 1.0);

  double EpsilonFor(std::size_t player) const;
  AmbiguitySpec WithEpsilon(double eps) const;
  void Validate(std::size_t num_players) const;
};

// N-player normal-form game with dense payoff tensors.
class FiniteGame {
 public:
  FiniteGame() = default;
  // payoffs[i] is player i's tensor flattened row-major over
  // (a^1, ..., a^N), last player fastest.
  FiniteGame(std::vector<std::vector<std::string>> actions,
             std::vector<std::vector<double>> payoffs);

  // Bimatrix convenience constructor.
  static FiniteGame Bimatrix(std::vector<std::string> row_actions,
                             std::vector<std::string> col_actions,
                             const Eigen::MatrixXd& row_payoff,
                             const Eigen::MatrixXd& col_payoff);

  std::size_t num_players() const { return actions_.size(); }
  std::size_t num_actions(std::size_t i) const { return actions_[i].size(); }
  std::vector<std::size_t> Dims() const;
  const std::vector<std::string>& action_labels(std::size_t i) const {
    return actions_[i];
  }
  const std::vector<double>& payoff_tensor(std::size_t i) const {
    return payoffs_[i];
  }

  double Payoff(std::size_t i, std::span<const std::size_t> profile) const;

  // Dimensions of A^{-i}, players in increasing order.
  std::vector<std::size_t> OpponentDims(std::size_t i) const;
  std::size_t NumOpponentProfiles(std::size_t i) const;

  // |A^i| x |A^{-i}| matrix of u^i(a^i, a^{-i}); column = flat opponent index.
  const Eigen::MatrixXd& PayoffMatrix(std::size_t i) const {
    return matrices_[i];
  }

  double MinPayoff(std::size_t i) const { return matrices_[i].minCoeff(); }
  double MaxPayoff(std::size_t i) const { return matrices_[i].maxCoeff(); }
  double MaxAbsPayoff(std::size_t i) const {
    return matrices_[i].cwiseAbs().maxCoeff();
  }

  // Same game with every payoff tensor transformed by u -> scale * u + shift.
  FiniteGame Affine(double scale, double shift) const;

 private:
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<Eigen::MatrixXd> matrices_;
};

// Flat index helpers for row-major products (last coordinate fastest).
std::size_t FlatIndex(std::span<const std::size_t> dims,
                      std::span<const std::size_t> coords);
std::vector<std::size_t> Unflatten(std::span<const std::size_t> dims,
                                   std::size_t flat);

// U^i(p_i, sigma) = sum p_i(a) sigma(b) u^i(a, b).
double ExpectedPayoff(const FiniteGame& game, std::size_t i,
                      const MixedStrategy& p_i, const JointDistribution& sigma);

// Product of every player's strategy except `exclude`.
JointDistribution ProductDistribution(const StrategyProfile& profile,
                                      std::size_t exclude);

// Metric on A^{-i} built from per-player metrics.
ActionMetric JointMetric(std::span<const ActionMetric> metrics,
                         std::size_t exclude,
                         JointRule rule = JointRule::kSumOfCoordinates);

// Throws ShapeError unless the profile matches the game.
void CheckProfile(const FiniteGame& game, const StrategyProfile& profile);

// A finite game together with its action metrics; caches d^{-i} per player.
class MetricGame {
 public:
  MetricGame() = default;
  MetricGame(FiniteGame game, std::vector<ActionMetric> metrics,
             JointRule rule = JointRule::kSumOfCoordinates);

  // All metrics default to total variation.
  explicit MetricGame(FiniteGame game);

  const FiniteGame& game() const { return game_; }
  const std::vector<ActionMetric>& metrics() const { return metrics_; }
  const ActionMetric& OpponentMetric(std::size_t i) const {
    return opponent_metrics_[i];
  }
  std::size_t num_players() const { return game_.num_players(); }

  // Largest opponent-space diameter over players.
  double MaxDiameter() const;

 private:
  FiniteGame game_;
  std::vector<ActionMetric> metrics_;
  std::vector<ActionMetric> opponent_metrics_;
};

}  // namespace sre

#endif  // SRE_GAME_H
