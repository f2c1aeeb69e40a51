#ifndef SRE_COURNOT_H
#define SRE_COURNOT_H

#include <Eigen/Dense>
#include <vector>

#include "json.hpp"
#include "sre/concave.h"

namespace sre {

// Firms sell a^i_t in markets t with inverse demand alpha_t - beta_t * total
// quantity, pay marginal cost c^i and are bound by sum_t a^i_t <= K^i.
struct CournotModel {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  Eigen::VectorXd cost;
  Eigen::VectorXd capacity;

  std::size_t num_firms() const { return cost.size(); }
  std::size_t num_markets() const { return alpha.size(); }
  void Validate() const;
};

// Q^i = -diag(beta), B^i = [-diag(beta) ...] over opponents,
// q^i = alpha - c^i, action set {a >= 0, sum a <= K^i}.
QuadraticGame CournotGame(const CournotModel& model);

// Profit of firm i, written out directly from the market formula.
double CournotProfit(const CournotModel& model, std::size_t i,
                     const ActionProfile& a);

// Duopoly in one market without binding capacities: Nash quantities of the
// game with marginal costs inflated to c^i + eps * beta. Throws if a
// quantity is not strictly positive; use SolveSreConcave there.
std::vector<double> CournotClosedFormSre(const CournotModel& model,
                                         double epsilon);

// Schema: {"alpha": [...], "beta": [...], "c": [...], "K": [...]}.
CournotModel ParseCournotModel(const nlohmann::json& doc);

}  // namespace sre

#endif  // SRE_COURNOT_H
