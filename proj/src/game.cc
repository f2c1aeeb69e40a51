#include "sre/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sre/error.h"

namespace sre {
namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kMetricTolerance = 1e-9;

Eigen::VectorXd CleanProbabilities(Eigen::VectorXd probs, const char* what) {
  if (probs.size() == 0) {
    throw ValidationError(std::string(what) + " is empty");
  }
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    if (!std::isfinite(probs[k])) {
      throw ValidationError(std::string(what) + " has a non-finite entry");
    }
    if (probs[k] < -MixedStrategy::kClampTolerance) {
      std::ostringstream os;
      os << what << " entry " << k << " is negative (" << probs[k] << ")";
      throw ValidationError(os.str());
    }
    probs[k] = std::max(probs[k], 0.0);
  }
  double total = probs.sum();
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << what << " sums to " << total << ", not 1";
    throw ValidationError(os.str());
  }
  return probs / total;
}

std::size_t Product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

}  // namespace

MixedStrategy::MixedStrategy(Eigen::VectorXd probs)
    : probs_(CleanProbabilities(std::move(probs), "mixed strategy")) {}

MixedStrategy::MixedStrategy(const std::vector<double>& probs)
    : MixedStrategy(Eigen::VectorXd(
          Eigen::Map<const Eigen::VectorXd>(probs.data(), probs.size()))) {}

MixedStrategy MixedStrategy::Pure(std::size_t num_actions, std::size_t action) {
  if (action >= num_actions) throw ShapeError("pure action out of range");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(num_actions);
  p[action] = 1.0;
  return MixedStrategy(p);
}

MixedStrategy MixedStrategy::Uniform(std::size_t num_actions) {
  return MixedStrategy(Eigen::VectorXd::Constant(
      num_actions, 1.0 / static_cast<double>(num_actions)));
}

std::size_t MixedStrategy::PureAction(double tol) const {
  for (Eigen::Index k = 0; k < probs_.size(); ++k) {
    if (probs_[k] >= 1.0 - tol) return k;
  }
  return size();
}

std::vector<std::size_t> MixedStrategy::Support(double tol) const {
  std::vector<std::size_t> out;
  for (Eigen::Index k = 0; k < probs_.size(); ++k) {
    if (probs_[k] > tol) out.push_back(k);
  }
  return out;
}

JointDistribution::JointDistribution(std::vector<std::size_t> dims,
                                     Eigen::VectorXd probs)
    : dims_(std::move(dims)) {
  if (Product(dims_) != static_cast<std::size_t>(probs.size())) {
    throw ShapeError("joint distribution size does not match its dimensions");
  }
  probs_ = CleanProbabilities(std::move(probs), "joint distribution");
}

JointDistribution JointDistribution::PointMass(std::vector<std::size_t> dims,
                                               std::size_t flat_index) {
  std::size_t n = Product(dims);
  if (flat_index >= n) throw ShapeError("point mass index out of range");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p[flat_index] = 1.0;
  return JointDistribution(std::move(dims), std::move(p));
}

ActionMetric::ActionMetric(Eigen::MatrixXd dist) : dist_(std::move(dist)) {
  const Eigen::Index n = dist_.rows();
  if (n == 0 || dist_.cols() != n) {
    throw ValidationError("metric must be a non-empty square matrix");
  }
  double scale = std::max(1.0, dist_.cwiseAbs().maxCoeff());
  double tol = kMetricTolerance * scale;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      std::ostringstream where;
      where << "(" << a << "," << b << ")";
      if (!std::isfinite(dist_(a, b))) {
        throw ValidationError("metric entry " + where.str() + " not finite");
      }
      if (a == b && std::abs(dist_(a, b)) > tol) {
        throw ValidationError("metric diagonal entry " + where.str() +
                              " is not zero");
      }
      if (a != b && dist_(a, b) <= 0.0) {
        throw ValidationError("metric entry " + where.str() +
                              " must be positive off the diagonal");
      }
      if (std::abs(dist_(a, b) - dist_(b, a)) > tol) {
        throw ValidationError("metric is not symmetric at " + where.str());
      }
    }
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      for (Eigen::Index c = 0; c < n; ++c) {
        if (dist_(a, c) > dist_(a, b) + dist_(b, c) + tol) {
          std::ostringstream os;
          os << "metric violates the triangle inequality: d(" << a << "," << c
             << ")=" << dist_(a, c) << " > d(" << a << "," << b
             << ")+d(" << b << "," << c << ")=" << dist_(a, b) + dist_(b, c);
          throw ValidationError(os.str());
        }
      }
    }
  }
  dist_.diagonal().setZero();
}

ActionMetric ActionMetric::TotalVariation(std::size_t num_actions) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(num_actions, num_actions);
  d.diagonal().setZero();
  return ActionMetric(std::move(d));
}

Eigen::MatrixXd ActionMetric::PowerCost(double s) const {
  if (s == 1.0) return dist_;
  return dist_.array().pow(s).matrix();
}

AmbiguitySpec AmbiguitySpec::Uniform(double epsilon, double s) {
  AmbiguitySpec spec;
  spec.s = s;
  spec.epsilon = {epsilon};
  return spec;
}

double AmbiguitySpec::EpsilonFor(std::size_t player) const {
  if (epsilon.empty()) throw ValidationError("ambiguity radius missing");
  if (epsilon.size() == 1) return epsilon.front();
  if (player >= epsilon.size()) {
    throw ShapeError("no ambiguity radius for player " +
                     std::to_string(player));
  }
  return epsilon[player];
}

AmbiguitySpec AmbiguitySpec::WithEpsilon(double eps) const {
  AmbiguitySpec out = *this;
  out.epsilon = {eps};
  return out;
}

void AmbiguitySpec::Validate(std::size_t num_players) const {
  if (!(s >= 1.0) || !std::isfinite(s)) {
    throw ValidationError("transport order s must be >= 1");
  }
  if (epsilon.empty()) throw ValidationError("ambiguity radius missing");
  if (epsilon.size() != 1 && epsilon.size() != num_players) {
    throw ShapeError("expected one radius or one per player");
  }
  for (double e : epsilon) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw ValidationError("ambiguity radius must be finite and >= 0");
    }
  }
}

std::size_t FlatIndex(std::span<const std::size_t> dims,
                      std::span<const std::size_t> coords) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    flat = flat * dims[k] + coords[k];
  }
  return flat;
}

std::vector<std::size_t> Unflatten(std::span<const std::size_t> dims,
                                   std::size_t flat) {
  std::vector<std::size_t> coords(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    coords[k] = flat % dims[k];
    flat /= dims[k];
  }
  return coords;
}

FiniteGame::FiniteGame(std::vector<std::vector<std::string>> actions,
                       std::vector<std::vector<double>> payoffs)
    : actions_(std::move(actions)), payoffs_(std::move(payoffs)) {
  if (actions_.empty()) throw ValidationError("game needs at least 1 player");
  if (payoffs_.size() != actions_.size()) {
    throw ShapeError("need one payoff tensor per player");
  }
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i].empty()) {
      throw ValidationError("player " + std::to_string(i) +
                            " has an empty action set");
    }
  }
  const std::vector<std::size_t> dims = Dims();
  const std::size_t total = Product(dims);
  for (std::size_t i = 0; i < payoffs_.size(); ++i) {
    if (payoffs_[i].size() != total) {
      throw ShapeError("payoff tensor of player " + std::to_string(i) +
                       " has " + std::to_string(payoffs_[i].size()) +
                       " entries, expected " + std::to_string(total));
    }
    for (double v : payoffs_[i]) {
      if (!std::isfinite(v)) {
        throw ValidationError("payoff tensor of player " + std::to_string(i) +
                              " has a non-finite entry");
      }
    }
  }

  matrices_.resize(num_players());
  std::vector<std::size_t> coords(num_players());
  for (std::size_t i = 0; i < num_players(); ++i) {
    const std::vector<std::size_t> odims = OpponentDims(i);
    Eigen::MatrixXd m(dims[i], NumOpponentProfiles(i));
    for (std::size_t flat = 0; flat < total; ++flat) {
      coords = Unflatten(dims, flat);
      std::size_t opp = 0;
      for (std::size_t j = 0; j < num_players(); ++j) {
        if (j == i) continue;
        opp = opp * dims[j] + coords[j];
      }
      m(coords[i], opp) = payoffs_[i][flat];
    }
    matrices_[i] = std::move(m);
  }
}

FiniteGame FiniteGame::Bimatrix(std::vector<std::string> row_actions,
                                std::vector<std::string> col_actions,
                                const Eigen::MatrixXd& row_payoff,
                                const Eigen::MatrixXd& col_payoff) {
  const auto rows = static_cast<Eigen::Index>(row_actions.size());
  const auto cols = static_cast<Eigen::Index>(col_actions.size());
  if (row_payoff.rows() != rows || row_payoff.cols() != cols ||
      col_payoff.rows() != rows || col_payoff.cols() != cols) {
    throw ShapeError("bimatrix payoffs do not match the action sets");
  }
  std::vector<double> u1, u2;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      u1.push_back(row_payoff(r, c));
      u2.push_back(col_payoff(r, c));
    }
  }
  return FiniteGame({std::move(row_actions), std::move(col_actions)},
                    {std::move(u1), std::move(u2)});
}

std::vector<std::size_t> FiniteGame::Dims() const {
  std::vector<std::size_t> dims;
  for (const auto& a : actions_) dims.push_back(a.size());
  return dims;
}

double FiniteGame::Payoff(std::size_t i,
                          std::span<const std::size_t> profile) const {
  const std::vector<std::size_t> dims = Dims();
  if (profile.size() != dims.size()) throw ShapeError("profile length");
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (profile[k] >= dims[k]) throw ShapeError("action index out of range");
  }
  return payoffs_.at(i)[FlatIndex(dims, profile)];
}

std::vector<std::size_t> FiniteGame::OpponentDims(std::size_t i) const {
  std::vector<std::size_t> dims;
  for (std::size_t j = 0; j < actions_.size(); ++j) {
    if (j != i) dims.push_back(actions_[j].size());
  }
  return dims;
}

std::size_t FiniteGame::NumOpponentProfiles(std::size_t i) const {
  return Product(OpponentDims(i));
}

FiniteGame FiniteGame::Affine(double scale, double shift) const {
  auto payoffs = payoffs_;
  for (auto& tensor : payoffs) {
    for (double& v : tensor) v = scale * v + shift;
  }
  return FiniteGame(actions_, std::move(payoffs));
}

double ExpectedPayoff(const FiniteGame& game, std::size_t i,
                      const MixedStrategy& p_i,
                      const JointDistribution& sigma) {
  if (i >= game.num_players()) throw ShapeError("player index out of range");
  const Eigen::MatrixXd& u = game.PayoffMatrix(i);
  if (static_cast<Eigen::Index>(p_i.size()) != u.rows()) {
    throw ShapeError("strategy length does not match player's action set");
  }
  if (sigma.dims() != game.OpponentDims(i)) {
    throw ShapeError("joint distribution is not over the opponents' actions");
  }
  return p_i.probs().dot(u * sigma.probs());
}

JointDistribution ProductDistribution(const StrategyProfile& profile,
                                      std::size_t exclude) {
  if (exclude >= profile.size()) throw ShapeError("excluded player missing");
  std::vector<std::size_t> dims;
  Eigen::VectorXd probs = Eigen::VectorXd::Ones(1);
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j == exclude) continue;
    const Eigen::VectorXd& p = profile[j].probs();
    dims.push_back(p.size());
    Eigen::VectorXd next(probs.size() * p.size());
    for (Eigen::Index a = 0; a < probs.size(); ++a) {
      next.segment(a * p.size(), p.size()) = probs[a] * p;
    }
    probs = std::move(next);
  }
  return JointDistribution(std::move(dims), std::move(probs));
}

ActionMetric JointMetric(std::span<const ActionMetric> metrics,
                         std::size_t exclude, JointRule rule) {
  if (exclude >= metrics.size()) throw ShapeError("excluded player missing");
  if (rule != JointRule::kSumOfCoordinates) {
    throw ValidationError("unsupported joint metric rule");
  }
  // Sum-of-coordinates: build up the product space one player at a time.
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(1, 1);
  bool any = false;
  for (std::size_t j = 0; j < metrics.size(); ++j) {
    if (j == exclude) continue;
    const Eigen::MatrixXd& d = metrics[j].matrix();
    const Eigen::Index n = joint.rows(), m = d.rows();
    Eigen::MatrixXd next(n * m, n * m);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        next.block(a * m, b * m, m, m) =
            d.array() + joint(a, b);
      }
    }
    joint = std::move(next);
    any = true;
  }
  if (!any) throw ShapeError("joint metric needs at least one opponent");
  return ActionMetric(std::move(joint));
}

void CheckProfile(const FiniteGame& game, const StrategyProfile& profile) {
  if (profile.size() != game.num_players()) {
    throw ShapeError("profile has " + std::to_string(profile.size()) +
                     " strategies for " + std::to_string(game.num_players()) +
                     " players");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].size() != game.num_actions(i)) {
      throw ShapeError("strategy of player " + std::to_string(i) +
                       " has the wrong length");
    }
  }
}

MetricGame::MetricGame(FiniteGame game, std::vector<ActionMetric> metrics,
                       JointRule rule)
    : game_(std::move(game)), metrics_(std::move(metrics)) {
  if (metrics_.size() != game_.num_players()) {
    throw ShapeError("need one metric per player");
  }
  for (std::size_t i = 0; i < metrics_.size(); ++i) {
    if (metrics_[i].size() != game_.num_actions(i)) {
      throw ShapeError("metric of player " + std::to_string(i) +
                       " does not match its action set");
    }
  }
  if (game_.num_players() < 2) {
    throw ValidationError("robust computations need at least 2 players");
  }
  for (std::size_t i = 0; i < game_.num_players(); ++i) {
    opponent_metrics_.push_back(JointMetric(metrics_, i, rule));
  }
}

MetricGame::MetricGame(FiniteGame game)
    : MetricGame(
          [&] {
            std::vector<ActionMetric> m;
            for (std::size_t i = 0; i < game.num_players(); ++i) {
              m.push_back(ActionMetric::TotalVariation(game.num_actions(i)));
            }
            return MetricGame(std::move(game), std::move(m));
          }()) {}

double MetricGame::MaxDiameter() const {
  double d = 0.0;
  for (const auto& m : opponent_metrics_) d = std::max(d, m.Diameter());
  return d;
}

}  // namespace sre
