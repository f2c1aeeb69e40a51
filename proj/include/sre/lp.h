#ifndef SRE_LP_H
#define SRE_LP_H

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

namespace sre {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class ObjectiveSense { kMinimize, kMaximize };

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense linear program
//   opt  c^T x   s.t.  A_r x (<=, =, >=) b_r,  lower <= x <= upper.
// Bounds default to [0, +inf).
struct LpProblem {
  LpProblem() = default;
  LpProblem(std::size_t num_rows, std::size_t num_cols,
            ObjectiveSense sense = ObjectiveSense::kMinimize);

  std::size_t num_rows() const { return constraints.rows(); }
  std::size_t num_cols() const { return constraints.cols(); }

  void SetRow(std::size_t r, RowSense row_sense, double rhs_value) {
    senses[r] = row_sense;
    rhs[r] = rhs_value;
  }
  void SetFree(std::size_t col) {
    lower[col] = -kInf;
    upper[col] = kInf;
  }

  // Throws ShapeError/ValidationError on inconsistent data.
  void Validate() const;

  ObjectiveSense sense = ObjectiveSense::kMinimize;
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
  std::vector<RowSense> senses;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kMaxPivots };

const char* ToString(LpStatus status);

// Duals follow y_r = d(objective)/d(b_r) in the problem's own sense, and
// reduced_costs = c - A^T y.
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd primal;
  Eigen::VectorXd duals;
  Eigen::VectorXd reduced_costs;
  double objective = 0.0;
  std::size_t pivots = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  std::size_t max_pivots = 200000;
  // Consecutive degenerate pivots before switching from Dantzig to Bland;
  // 0 means 3 * (rows + cols).
  std::size_t stall_threshold = 0;
  // When set, every pivot is logged here.
  std::ostream* debug = nullptr;
};

LpSolution SolveLp(const LpProblem& problem, const LpOptions& options = {});

// Residuals of a candidate primal/dual pair, measured on the original data.
struct LpResiduals {
  double primal_infeasibility = 0.0;   // max row/bound violation
  double dual_infeasibility = 0.0;     // max wrong-signed dual or reduced cost
  double complementarity = 0.0;        // max |y_r * slack_r|, |r_j * gap_j|
  double duality_gap = 0.0;            // |c^T x - dual objective|
};

LpResiduals CheckLpSolution(const LpProblem& problem,
                            const LpSolution& solution);

}  // namespace sre

#endif  // SRE_LP_H
