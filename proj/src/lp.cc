#include "sre/lp.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sre/error.h"

namespace sre {
namespace {

// How an original variable maps onto standard-form columns:
//   x = offset + sign * x_std[col] (- x_std[col2] for free variables).
struct ColumnMap {
  double offset = 0.0;
  double sign = 1.0;
  Eigen::Index col = -1;
  Eigen::Index col2 = -1;
};

// min c^T x  s.t.  A x = b,  x >= 0, b >= 0, solved with a dense tableau.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd a, Eigen::VectorXd b, std::vector<Eigen::Index> basis,
          Eigen::Index num_real_cols, const LpOptions& options)
      : a_(std::move(a)),
        tab_(a_),
        beta_(std::move(b)),
        basis_(std::move(basis)),
        num_real_cols_(num_real_cols),
        options_(options) {
    stall_limit_ = options_.stall_threshold
                       ? options_.stall_threshold
                       : 3 * static_cast<std::size_t>(a_.rows() + a_.cols());
  }

  // Runs the simplex on `cost`; columns >= `enter_limit` never enter.
  LpStatus Run(const Eigen::VectorXd& cost, Eigen::Index enter_limit) {
    Eigen::VectorXd cb(basis_.size());
    for (std::size_t r = 0; r < basis_.size(); ++r) cb[r] = cost[basis_[r]];
    Eigen::VectorXd rc = cost.transpose() - cb.transpose() * tab_;
    bool bland = false;
    std::size_t degenerate_run = 0;
    while (true) {
      if (pivots_ >= options_.max_pivots) return LpStatus::kMaxPivots;
      // Entering column.
      Eigen::Index enter = -1;
      double best = -options_.optimality_tol;
      for (Eigen::Index j = 0; j < enter_limit; ++j) {
        if (rc[j] < best) {
          enter = j;
          if (bland) break;
          best = rc[j];
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      // Ratio test.
      Eigen::Index leave = -1;
      double best_ratio = kInf;
      for (Eigen::Index r = 0; r < tab_.rows(); ++r) {
        double coef = tab_(r, enter);
        if (coef <= options_.pivot_tol) continue;
        double ratio = std::max(beta_[r], 0.0) / coef;
        if (leave < 0 || ratio < best_ratio - 1e-12) {
          leave = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + 1e-12) {
          bool take = bland ? basis_[r] < basis_[leave]
                            : coef > tab_(leave, enter);
          if (take) {
            leave = r;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;

      if (best_ratio <= 1e-12) {
        if (++degenerate_run > stall_limit_) bland = true;
      } else {
        degenerate_run = 0;
      }
      Pivot(leave, enter);
      double factor = rc[enter];
      rc -= factor * tab_.row(leave).transpose();
      rc[enter] = 0.0;
      if (options_.debug) {
        *options_.debug << "lp pivot " << pivots_ << ": enter " << enter
                        << " leave row " << leave << (bland ? " [bland]" : "")
                        << "\n";
      }
    }
  }

  void Pivot(Eigen::Index row, Eigen::Index col) {
    double piv = tab_(row, col);
    tab_.row(row) /= piv;
    beta_[row] /= piv;
    for (Eigen::Index r = 0; r < tab_.rows(); ++r) {
      if (r == row) continue;
      double f = tab_(r, col);
      if (f == 0.0) continue;
      tab_.row(r) -= f * tab_.row(row);
      beta_[r] -= f * beta_[row];
      tab_(r, col) = 0.0;
    }
    basis_[row] = col;
    ++pivots_;
  }

  // Pivots artificial columns out of the basis where the row allows it.
  void DriveOutArtificials() {
    for (Eigen::Index r = 0; r < tab_.rows(); ++r) {
      if (basis_[r] < num_real_cols_) continue;
      Eigen::Index best = -1;
      double best_abs = options_.pivot_tol * 10;
      for (Eigen::Index j = 0; j < num_real_cols_; ++j) {
        if (std::abs(tab_(r, j)) > best_abs) {
          best_abs = std::abs(tab_(r, j));
          best = j;
        }
      }
      if (best >= 0) Pivot(r, best);
    }
  }

  double ArtificialMass() const {
    double mass = 0.0;
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (basis_[r] >= num_real_cols_) mass += std::abs(beta_[r]);
    }
    return mass;
  }

  // Recomputes the basic solution and duals from the original matrix.
  void Finish(const Eigen::VectorXd& b, const Eigen::VectorXd& cost,
              Eigen::VectorXd* x, Eigen::VectorXd* y) const {
    const Eigen::Index m = a_.rows();
    Eigen::MatrixXd basis_matrix(m, m);
    Eigen::VectorXd cb(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      basis_matrix.col(r) = a_.col(basis_[r]);
      cb[r] = cost[basis_[r]];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    Eigen::VectorXd xb = lu.solve(b);
    *y = lu.transpose().solve(cb);
    if (!xb.allFinite() || !y->allFinite()) {
      xb = beta_;
      *y = Eigen::VectorXd::Zero(m);
    }
    *x = Eigen::VectorXd::Zero(a_.cols());
    for (Eigen::Index r = 0; r < m; ++r) (*x)[basis_[r]] = std::max(xb[r], 0.0);
  }

  std::size_t pivots() const { return pivots_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd tab_;
  Eigen::VectorXd beta_;
  std::vector<Eigen::Index> basis_;
  Eigen::Index num_real_cols_;
  const LpOptions& options_;
  std::size_t pivots_ = 0;
  std::size_t stall_limit_ = 0;
};

}  // namespace

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kMaxPivots:
      return "max-pivots";
  }
  return "unknown";
}

LpProblem::LpProblem(std::size_t num_rows, std::size_t num_cols,
                     ObjectiveSense objective_sense)
    : sense(objective_sense),
      objective(Eigen::VectorXd::Zero(num_cols)),
      constraints(Eigen::MatrixXd::Zero(num_rows, num_cols)),
      rhs(Eigen::VectorXd::Zero(num_rows)),
      senses(num_rows, RowSense::kLessEqual),
      lower(Eigen::VectorXd::Zero(num_cols)),
      upper(Eigen::VectorXd::Constant(num_cols, kInf)) {}

void LpProblem::Validate() const {
  const Eigen::Index n = constraints.cols(), m = constraints.rows();
  if (objective.size() != n || lower.size() != n || upper.size() != n) {
    throw ShapeError("LP column data has inconsistent length");
  }
  if (rhs.size() != m || static_cast<Eigen::Index>(senses.size()) != m) {
    throw ShapeError("LP row data has inconsistent length");
  }
  if (!rhs.allFinite() || !constraints.allFinite() || !objective.allFinite()) {
    throw ValidationError("LP data must be finite");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInf || upper[j] == -kInf) {
      throw ValidationError("LP variable " + std::to_string(j) +
                            " has invalid bounds");
    }
  }
}

LpSolution SolveLp(const LpProblem& problem, const LpOptions& options) {
  problem.Validate();
  const Eigen::Index n = problem.num_cols();
  const Eigen::Index m = problem.num_rows();
  const double sign = problem.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;

  // Structural columns.
  std::vector<ColumnMap> maps(n);
  std::vector<Eigen::Index> bounded_cols;  // need an explicit upper-bound row
  Eigen::Index num_struct = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = problem.lower[j], hi = problem.upper[j];
    ColumnMap& cm = maps[j];
    if (std::isfinite(lo)) {
      cm = {lo, 1.0, num_struct++, -1};
      if (std::isfinite(hi)) bounded_cols.push_back(j);
    } else if (std::isfinite(hi)) {
      cm = {hi, -1.0, num_struct++, -1};
    } else {
      cm = {0.0, 1.0, num_struct, num_struct + 1};
      num_struct += 2;
    }
  }

  const Eigen::Index rows = m + static_cast<Eigen::Index>(bounded_cols.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, num_struct);
  Eigen::VectorXd b(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(num_struct);
  std::vector<RowSense> senses(problem.senses);
  double cost_offset = 0.0;

  b.head(m) = problem.rhs;
  for (Eigen::Index j = 0; j < n; ++j) {
    const ColumnMap& cm = maps[j];
    const double cj = sign * problem.objective[j];
    a.block(0, cm.col, m, 1) = cm.sign * problem.constraints.col(j);
    c[cm.col] = cm.sign * cj;
    if (cm.col2 >= 0) {
      a.block(0, cm.col2, m, 1) = -problem.constraints.col(j);
      c[cm.col2] = -cj;
    }
    if (cm.offset != 0.0) {
      b.head(m) -= cm.offset * problem.constraints.col(j);
      cost_offset += cj * cm.offset;
    }
  }
  for (std::size_t k = 0; k < bounded_cols.size(); ++k) {
    const Eigen::Index j = bounded_cols[k];
    a(m + k, maps[j].col) = 1.0;
    b[m + k] = problem.upper[j] - problem.lower[j];
    senses.push_back(RowSense::kLessEqual);
  }

  // Slacks.
  Eigen::Index num_slack = 0;
  for (RowSense s : senses) num_slack += s != RowSense::kEqual;
  const Eigen::Index real_cols = num_struct + num_slack;
  std::vector<Eigen::Index> slack_of_row(rows, -1);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(rows, real_cols);
  full.leftCols(num_struct) = a;
  {
    Eigen::Index s = num_struct;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (senses[r] == RowSense::kEqual) continue;
      full(r, s) = senses[r] == RowSense::kLessEqual ? 1.0 : -1.0;
      slack_of_row[r] = s++;
    }
  }
  std::vector<double> row_flip(rows, 1.0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (b[r] < 0) {
      full.row(r) *= -1.0;
      b[r] = -b[r];
      row_flip[r] = -1.0;
    }
  }

  // Initial basis: unit slacks where available, artificials elsewhere.
  std::vector<Eigen::Index> basis(rows, -1);
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index r = 0; r < rows; ++r) {
    Eigen::Index s = slack_of_row[r];
    if (s >= 0 && full(r, s) == 1.0) {
      basis[r] = s;
    } else {
      art_rows.push_back(r);
    }
  }
  const Eigen::Index total_cols =
      real_cols + static_cast<Eigen::Index>(art_rows.size());
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(rows, total_cols);
  tab.leftCols(real_cols) = full;
  for (std::size_t k = 0; k < art_rows.size(); ++k) {
    tab(art_rows[k], real_cols + k) = 1.0;
    basis[art_rows[k]] = real_cols + k;
  }

  Tableau tableau(tab, b, basis, real_cols, options);
  LpSolution sol;

  if (!art_rows.empty()) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total_cols);
    phase1.tail(art_rows.size()).setOnes();
    LpStatus st = tableau.Run(phase1, total_cols);
    sol.pivots = tableau.pivots();
    if (st == LpStatus::kMaxPivots) {
      sol.status = st;
      return sol;
    }
    double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (tableau.ArtificialMass() > options.feasibility_tol * scale) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    tableau.DriveOutArtificials();
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(total_cols);
  phase2.head(num_struct) = c;
  LpStatus st = tableau.Run(phase2, real_cols);
  sol.pivots = tableau.pivots();
  sol.status = st;
  if (st != LpStatus::kOptimal) return sol;

  Eigen::VectorXd x_std, y_std;
  tableau.Finish(b, phase2, &x_std, &y_std);

  sol.primal.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const ColumnMap& cm = maps[j];
    double v = cm.offset + cm.sign * x_std[cm.col];
    if (cm.col2 >= 0) v -= x_std[cm.col2];
    sol.primal[j] = v;
  }
  sol.duals.resize(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    sol.duals[r] = sign * row_flip[r] * y_std[r];
  }
  sol.reduced_costs =
      problem.objective - problem.constraints.transpose() * sol.duals;
  sol.objective = problem.objective.dot(sol.primal);
  (void)cost_offset;
  return sol;
}

LpResiduals CheckLpSolution(const LpProblem& problem,
                            const LpSolution& solution) {
  LpResiduals res;
  const double sign = problem.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  const Eigen::VectorXd& x = solution.primal;
  const Eigen::VectorXd ax = problem.constraints * x;
  double dual_obj = 0.0;
  for (Eigen::Index r = 0; r < ax.size(); ++r) {
    const double slack = problem.rhs[r] - ax[r];
    const double y = sign * solution.duals[r];
    switch (problem.senses[r]) {
      case RowSense::kLessEqual:
        res.primal_infeasibility = std::max(res.primal_infeasibility, -slack);
        res.dual_infeasibility = std::max(res.dual_infeasibility, y);
        break;
      case RowSense::kGreaterEqual:
        res.primal_infeasibility = std::max(res.primal_infeasibility, slack);
        res.dual_infeasibility = std::max(res.dual_infeasibility, -y);
        break;
      case RowSense::kEqual:
        res.primal_infeasibility =
            std::max(res.primal_infeasibility, std::abs(slack));
        break;
    }
    res.complementarity = std::max(res.complementarity, std::abs(y * slack));
    dual_obj += problem.rhs[r] * y;
  }
  const Eigen::VectorXd rc =
      sign * problem.objective - problem.constraints.transpose() * (sign * solution.duals);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double lo = problem.lower[j], hi = problem.upper[j];
    res.primal_infeasibility =
        std::max({res.primal_infeasibility, lo - x[j], x[j] - hi});
    if (rc[j] > 0) {
      if (std::isfinite(lo)) {
        dual_obj += rc[j] * lo;
        res.complementarity = std::max(res.complementarity, rc[j] * (x[j] - lo));
      } else {
        res.dual_infeasibility = std::max(res.dual_infeasibility, rc[j]);
      }
    } else if (rc[j] < 0) {
      if (std::isfinite(hi)) {
        dual_obj += rc[j] * hi;
        res.complementarity =
            std::max(res.complementarity, -rc[j] * (hi - x[j]));
      } else {
        res.dual_infeasibility = std::max(res.dual_infeasibility, -rc[j]);
      }
    }
  }
  res.duality_gap = std::abs(sign * problem.objective.dot(x) - dual_obj);
  return res;
}

}  // namespace sre
