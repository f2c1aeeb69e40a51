#include "sre/cournot.h"

#include <cmath>
#include <sstream>

#include "sre/error.h"

namespace sre {
namespace {

Eigen::VectorXd JsonVector(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw ValidationError(std::string("cournot model needs array \"") + key +
                          "\"");
  }
  const nlohmann::json& j = doc[key];
  Eigen::VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v[k] = j[k].get<double>();
  return v;
}

}  // namespace

void CournotModel::Validate() const {
  if (alpha.size() == 0) throw ValidationError("no markets");
  if (beta.size() != alpha.size()) throw ShapeError("beta vs alpha length");
  if (cost.size() < 2) throw ValidationError("at least two firms required");
  if (capacity.size() != cost.size()) throw ShapeError("K vs c length");
  for (Eigen::Index t = 0; t < alpha.size(); ++t) {
    if (!std::isfinite(alpha[t]) || !(beta[t] > 0.0) ||
        !std::isfinite(beta[t])) {
      throw ValidationError("market " + std::to_string(t) +
                            ": need finite alpha and beta > 0");
    }
  }
  for (Eigen::Index i = 0; i < cost.size(); ++i) {
    if (!std::isfinite(cost[i]) || !(cost[i] < alpha.minCoeff())) {
      throw ValidationError("firm " + std::to_string(i) +
                            ": cost must be below every alpha");
    }
    if (!(capacity[i] > 0.0) || !std::isfinite(capacity[i])) {
      throw ValidationError("firm " + std::to_string(i) +
                            ": capacity must be positive");
    }
  }
}

QuadraticGame CournotGame(const CournotModel& model) {
  model.Validate();
  const Eigen::Index T = model.num_markets();
  const Eigen::Index n = model.num_firms();
  const Eigen::MatrixXd diag = model.beta.asDiagonal();
  std::vector<QuadraticPlayer> players;
  for (Eigen::Index i = 0; i < n; ++i) {
    QuadraticPlayer p;
    p.Q = -diag;
    p.B.resize(T, T * (n - 1));
    for (Eigen::Index k = 0; k < n - 1; ++k) p.B.middleCols(k * T, T) = -diag;
    p.q = model.alpha - Eigen::VectorXd::Constant(T, model.cost[i]);
    p.actions.A.resize(T + 1, T);
    p.actions.A.topRows(T) = -Eigen::MatrixXd::Identity(T, T);
    p.actions.A.row(T).setOnes();
    p.actions.b = Eigen::VectorXd::Zero(T + 1);
    p.actions.b[T] = model.capacity[i];
    players.push_back(std::move(p));
  }
  return QuadraticGame(std::move(players));
}

double CournotProfit(const CournotModel& model, std::size_t i,
                     const ActionProfile& a) {
  if (a.size() != model.num_firms()) throw ShapeError("profile size");
  double profit = 0.0;
  for (Eigen::Index t = 0; t < model.alpha.size(); ++t) {
    double total = 0.0;
    for (const auto& ai : a) total += ai[t];
    const double price = model.alpha[t] - model.beta[t] * total;
    profit += (price - model.cost[i]) * a[i][t];
  }
  return profit;
}

std::vector<double> CournotClosedFormSre(const CournotModel& model,
                                         double epsilon) {
  model.Validate();
  if (model.num_firms() != 2 || model.num_markets() != 1) {
    throw ValidationError("closed form needs two firms and one market");
  }
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  const double alpha = model.alpha[0];
  const double beta = model.beta[0];
  const double c0 = model.cost[0] + epsilon * beta;
  const double c1 = model.cost[1] + epsilon * beta;
  const std::vector<double> a{(alpha - 2.0 * c0 + c1) / (3.0 * beta),
                              (alpha - 2.0 * c1 + c0) / (3.0 * beta)};
  for (std::size_t i = 0; i < 2; ++i) {
    if (!(a[i] > 0.0)) {
      std::ostringstream msg;
      msg << "firm " << i << " quantity " << a[i]
          << " hits the boundary; use SolveSreConcave";
      throw ValidationError(msg.str());
    }
    if (a[i] > model.capacity[i]) {
      throw ValidationError("capacity binds; use SolveSreConcave");
    }
  }
  return a;
}

CournotModel ParseCournotModel(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("cournot model must be object");
  CournotModel m;
  m.alpha = JsonVector(doc, "alpha");
  m.beta = JsonVector(doc, "beta");
  m.cost = JsonVector(doc, "c");
  m.capacity = JsonVector(doc, "K");
  m.Validate();
  return m;
}

}  // namespace sre
