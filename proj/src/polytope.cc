#include "sre/polytope.h"

#include "sre/error.h"
#include "sre/lcp.h"
#include "sre/lp.h"

namespace sre {

bool Polytope::Contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim()) throw ShapeError("point dimension");
  if (A.rows() == 0) return true;
  return (A * x - b).maxCoeff() <= tol;
}

Eigen::VectorXd Polytope::Project(const Eigen::VectorXd& y) const {
  if (y.size() != dim()) throw ShapeError("point dimension");
  if (A.rows() == 0 || (A * y - b).maxCoeff() <= 0.0) return y;
  // x = y - A^T mu with 0 <= mu _|_ A A^T mu + (b - A y) >= 0.
  LcpProblem lcp{A * A.transpose(), b - A * y, {}};
  const LcpSolution sol = SolveLcp(lcp);
  if (!sol.solved()) {
    throw NumericalError(std::string("projection LCP ended ") +
                         ToString(sol.status));
  }
  return y - A.transpose() * sol.z;
}

Eigen::VectorXd Polytope::MinimizeLinear(const Eigen::VectorXd& c) const {
  const Eigen::Index n = dim();
  LpProblem lp(A.rows(), n);
  lp.objective = c;
  lp.constraints = A;
  lp.rhs = b;
  for (Eigen::Index j = 0; j < n; ++j) lp.SetFree(j);
  const LpSolution sol = SolveLp(lp);
  if (sol.status == LpStatus::kInfeasible) {
    throw ValidationError("polytope is empty");
  }
  if (sol.status == LpStatus::kUnbounded) {
    throw ValidationError("polytope is unbounded");
  }
  if (!sol.optimal()) throw NumericalError("polytope LP failed");
  return sol.primal;
}

void Polytope::BoundingBox(Eigen::VectorXd* lo, Eigen::VectorXd* hi) const {
  const Eigen::Index n = dim();
  lo->resize(n);
  hi->resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
    (*lo)[j] = MinimizeLinear(e)[j];
    (*hi)[j] = MinimizeLinear(-e)[j];
  }
}

Eigen::VectorXd Polytope::RandomPoint(std::mt19937_64& rng) const {
  Eigen::VectorXd lo, hi;
  BoundingBox(&lo, &hi);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(dim());
  for (Eigen::Index j = 0; j < dim(); ++j) {
    x[j] = lo[j] + u(rng) * (hi[j] - lo[j]);
  }
  return Project(x);
}

}  // namespace sre
