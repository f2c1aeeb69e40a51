#ifndef SRE_LCP_H
#define SRE_LCP_H

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace sre {

// Mixed linear complementarity problem: find z with w = M z + q and
//   0 <= z_j  _|_  w_j >= 0   for complementary j,
//   z_j free,     w_j  = 0    for j marked free.
struct LcpProblem {
  Eigen::MatrixXd M;
  Eigen::VectorXd q;
  // Empty means every index is complementary.
  std::vector<bool> free;

  std::size_t size() const { return q.size(); }
  bool IsFree(std::size_t j) const { return !free.empty() && free[j]; }
  void Validate() const;
};

enum class LcpStatus { kSolved, kRayTermination, kMaxPivots };

const char* ToString(LcpStatus status);

struct LcpSolution {
  LcpStatus status = LcpStatus::kRayTermination;
  Eigen::VectorXd z;
  Eigen::VectorXd w;
  std::size_t pivots = 0;
  // True when the free block could not be eliminated directly and was
  // split into differences of nonnegative variables.
  bool used_split = false;
  // Final complementary basis (variable k < n is w_k, k >= n is z_{k-n});
  // only filled for pure problems.
  std::vector<std::size_t> basis;

  bool solved() const { return status == LcpStatus::kSolved; }
};

struct LcpOptions {
  double pivot_tol = 1e-9;
  std::size_t max_pivots = 100000;
  // When set, every pivot is logged here.
  std::ostream* debug = nullptr;
};

// Lemke's method with lexicographic ratio tests. `covering` must be strictly
// positive on complementary indices; entries on free indices are ignored.
// Free variables are eliminated through the equality rows before the
// artificial column enters.
LcpSolution SolveLcp(const LcpProblem& problem,
                     const Eigen::VectorXd& covering,
                     const LcpOptions& options = {});

// Same with the all-ones covering vector.
LcpSolution SolveLcp(const LcpProblem& problem,
                     const LcpOptions& options = {});

// Complementary pivoting from a solved pure LCP: the nonbasic member of pair
// `label` enters and pivoting continues until that pair is complementary
// again, as in a Lemke-Howson path. The end point may be a new solution.
LcpSolution TraverseFrom(const LcpProblem& problem, const LcpSolution& start,
                         std::size_t label, const LcpOptions& options = {});

struct LcpResiduals {
  double z_negativity = 0.0;     // max(-z_j) over complementary j
  double w_negativity = 0.0;     // max(-w_j) over complementary j
  double complementarity = 0.0;  // max |z_j w_j| over complementary j
  double equality = 0.0;         // max |w_j| over free j

  bool Ok(double feas_tol = 1e-7, double comp_tol = 1e-6) const {
    return z_negativity <= feas_tol && w_negativity <= feas_tol &&
           complementarity <= comp_tol && equality <= feas_tol;
  }
};

// Recomputes w from scratch; does not trust the solver's w.
LcpResiduals CheckLcp(const LcpProblem& problem, const Eigen::VectorXd& z);

}  // namespace sre

#endif  // SRE_LCP_H
