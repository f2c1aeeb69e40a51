#include "sre/lcp.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sre/error.h"

namespace sre {
namespace {

struct PureResult {
  LcpStatus status;
  Eigen::VectorXd z;
  std::size_t pivots;
  std::vector<std::size_t> basis;
};

// Complementary pivoting tableau for a pure LCP. Columns: [w (n) | z (n) |
// z0 | rhs]; rows hold the system  w - M z - d z0 = q. Variable k < n is
// w_k, n <= k < 2n is z_{k-n}, 2n is the artificial z0.
class Lemke {
 public:
  Lemke(const Eigen::MatrixXd& m, const Eigen::VectorXd& q,
        const Eigen::VectorXd& d, const LcpOptions& options)
      : m_(m), q_(q), n_(q.size()), options_(options) {
    t_.resize(n_, 2 * n_ + 2);
    t_.leftCols(n_).setIdentity();
    t_.middleCols(n_, n_) = -m;
    t_.col(z0()) = -d;
    t_.col(rhs()) = q;
    basis_.resize(n_);
    for (Eigen::Index r = 0; r < n_; ++r) basis_[r] = r;
  }

  // Lemke's method from the trivial basis.
  PureResult Run() {
    if (n_ == 0 || q_.minCoeff() >= 0) return Result(LcpStatus::kSolved);
    // Initial pivot: z0 replaces the row with the most negative q_r / d_r.
    // Ties go to the largest index, the lexicographic choice for the identity
    // starting basis.
    Eigen::Index row = -1;
    double most_negative = 0.0;
    for (Eigen::Index r = 0; r < n_; ++r) {
      const double v = q_[r] / -t_(r, z0());
      if (v < 0 && (row < 0 || v <= most_negative + 1e-12 * -most_negative)) {
        most_negative = std::min(most_negative, v);
        row = r;
      }
    }
    Eigen::Index leaving = basis_[row];
    Pivot(row, z0());
    return Follow(Complement(leaving), z0());
  }

  // Starts at a complementary feasible basis, brings in the nonbasic member of
  // pair `label`, and pivots until that pair is complementary again.
  PureResult Traverse(const std::vector<std::size_t>& basis,
                      std::size_t label) {
    Eigen::MatrixXd bm(n_, n_);
    std::vector<bool> basic(2 * n_, false);
    for (Eigen::Index r = 0; r < n_; ++r) {
      bm.col(r) = Column(basis[r]);
      basic[basis[r]] = true;
      basis_[r] = basis[r];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
    t_ = lu.solve(t_);
    if (!t_.allFinite()) return Result(LcpStatus::kRayTermination);
    const Eigen::Index enter = basic[label] ? label + n_ : label;
    return Follow(enter, enter < n_ ? enter + n_ : enter - n_);
  }

 private:
  Eigen::Index z0() const { return 2 * n_; }
  Eigen::Index rhs() const { return 2 * n_ + 1; }
  Eigen::Index Complement(Eigen::Index k) const {
    return k < n_ ? k + n_ : k - n_;
  }

  Eigen::VectorXd Column(Eigen::Index k) const {
    if (k < n_) return Eigen::VectorXd::Unit(n_, k);
    return -m_.col(k - n_);
  }

  void Pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index r = 0; r < n_; ++r) {
      if (r == row) continue;
      const double f = t_(r, col);
      if (f != 0.0) t_.row(r) -= f * t_.row(row);
    }
    basis_[row] = col;
    ++pivots_;
    if (options_.debug) {
      *options_.debug << "lcp pivot " << pivots_ << ": enter " << col
                      << " at row " << row << "\n";
    }
  }

  // Lexicographic comparison of rows a and b scaled by their entries in
  // `col`, over (rhs, B^{-1}).
  bool LexLess(Eigen::Index a, Eigen::Index b, Eigen::Index col) const {
    const double pa = t_(a, col), pb = t_(b, col);
    double va = t_(a, rhs()) / pa, vb = t_(b, rhs()) / pb;
    const double scale = 1e-12 * std::max({1.0, std::abs(va), std::abs(vb)});
    if (va < vb - scale) return true;
    if (va > vb + scale) return false;
    for (Eigen::Index k = 0; k < n_; ++k) {
      va = t_(a, k) / pa;
      vb = t_(b, k) / pb;
      if (va < vb - 1e-12) return true;
      if (va > vb + 1e-12) return false;
    }
    return false;
  }

  // Complementary pivoting until `target` leaves the basis.
  PureResult Follow(Eigen::Index enter, Eigen::Index target) {
    while (true) {
      if (pivots_ >= options_.max_pivots) return Result(LcpStatus::kMaxPivots);
      Eigen::Index row = -1;
      for (Eigen::Index r = 0; r < n_; ++r) {
        if (t_(r, enter) <= options_.pivot_tol) continue;
        if (row < 0) {
          row = r;
          continue;
        }
        // Prefer the target leaving on an exact tie so the path ends.
        if (LexLess(r, row, enter) ||
            (basis_[r] == static_cast<std::size_t>(target) &&
             !LexLess(row, r, enter))) {
          row = r;
        }
      }
      if (row < 0) return Result(LcpStatus::kRayTermination);
      const Eigen::Index leaving = basis_[row];
      Pivot(row, enter);
      if (leaving == target) return Result(LcpStatus::kSolved);
      enter = Complement(leaving);
    }
  }

  // Recomputes the basic solution from the original columns to shed the
  // round-off accumulated in the tableau.
  PureResult Result(LcpStatus status) const {
    PureResult out{status, Eigen::VectorXd::Zero(n_), pivots_, {}};
    if (status != LcpStatus::kSolved) return out;
    out.basis.assign(basis_.begin(), basis_.end());
    Eigen::MatrixXd bm(n_, n_);
    for (Eigen::Index r = 0; r < n_; ++r) bm.col(r) = Column(basis_[r]);
    Eigen::VectorXd values =
        n_ ? Eigen::VectorXd(Eigen::PartialPivLU<Eigen::MatrixXd>(bm).solve(q_))
           : Eigen::VectorXd();
    if (!values.allFinite()) values = t_.col(rhs());
    for (Eigen::Index r = 0; r < n_; ++r) {
      if (basis_[r] >= static_cast<std::size_t>(n_)) {
        out.z[basis_[r] - n_] = std::max(values[r], 0.0);
      }
    }
    return out;
  }

  const Eigen::MatrixXd& m_;
  const Eigen::VectorXd& q_;
  const Eigen::Index n_;
  const LcpOptions& options_;
  Eigen::MatrixXd t_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

// Replaces every free pair (z_j free, w_j = 0) by z_j = u_j - v_j with rows
// w_j+ = (Mz+q)_j >= 0 _|_ u_j and w_j- = -(Mz+q)_j >= 0 _|_ v_j.
LcpSolution SolveBySplitting(const LcpProblem& problem,
                             const Eigen::VectorXd& covering,
                             const LcpOptions& options) {
  const Eigen::Index n = problem.size();
  std::vector<Eigen::Index> free_idx;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (problem.IsFree(j)) free_idx.push_back(j);
  }
  const Eigen::Index k = free_idx.size();
  // Split LCP coordinates: the original n (free j now means u_j), then v's.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + k, n + k);
  Eigen::VectorXd q(n + k), d(n + k);
  m.topLeftCorner(n, n) = problem.M;
  q.head(n) = problem.q;
  for (Eigen::Index a = 0; a < k; ++a) {
    const Eigen::Index j = free_idx[a];
    m.block(0, n + a, n, 1) = -problem.M.col(j);
    m.block(n + a, 0, 1, n) = -problem.M.row(j);
    for (Eigen::Index b = 0; b < k; ++b) {
      m(n + a, n + b) = problem.M(j, free_idx[b]);
    }
    q[n + a] = -problem.q[j];
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    d[j] = problem.IsFree(j) ? 1.0 : covering[j];
  }
  d.tail(k).setOnes();
  PureResult res = Lemke(m, q, d, options).Run();
  LcpSolution sol;
  sol.status = res.status;
  sol.pivots = res.pivots;
  sol.used_split = true;
  if (res.status != LcpStatus::kSolved) return sol;
  sol.z = res.z.head(n);
  for (Eigen::Index a = 0; a < k; ++a) sol.z[free_idx[a]] -= res.z[n + a];
  sol.w = problem.M * sol.z + problem.q;
  return sol;
}

}  // namespace

const char* ToString(LcpStatus status) {
  switch (status) {
    case LcpStatus::kSolved:
      return "solved";
    case LcpStatus::kRayTermination:
      return "ray-termination";
    case LcpStatus::kMaxPivots:
      return "max-pivots";
  }
  return "unknown";
}

void LcpProblem::Validate() const {
  if (M.rows() != M.cols()) throw ShapeError("LCP matrix must be square");
  if (M.rows() != q.size()) throw ShapeError("LCP q length must match M");
  if (!free.empty() && free.size() != size()) {
    throw ShapeError("LCP free mask length must match q");
  }
  if (!M.allFinite() || !q.allFinite()) {
    throw ValidationError("LCP data must be finite");
  }
}

LcpSolution SolveLcp(const LcpProblem& problem, const LcpOptions& options) {
  return SolveLcp(problem, Eigen::VectorXd::Ones(problem.size()), options);
}

LcpSolution SolveLcp(const LcpProblem& problem, const Eigen::VectorXd& covering,
                     const LcpOptions& options) {
  problem.Validate();
  const Eigen::Index n = problem.size();
  if (covering.size() != n) throw ShapeError("covering vector length");
  std::vector<Eigen::Index> cidx, fidx;
  for (Eigen::Index j = 0; j < n; ++j) {
    (problem.IsFree(j) ? fidx : cidx).push_back(j);
    if (!problem.IsFree(j) && !(covering[j] > 0)) {
      throw ValidationError("covering vector must be positive");
    }
  }
  const Eigen::Index nc = cidx.size(), nf = fidx.size();

  Eigen::MatrixXd mcc(nc, nc), mcf(nc, nf), mfc(nf, nc), mff(nf, nf);
  Eigen::VectorXd qc(nc), qf(nf), dc(nc);
  for (Eigen::Index a = 0; a < nc; ++a) {
    qc[a] = problem.q[cidx[a]];
    dc[a] = covering[cidx[a]];
    for (Eigen::Index b = 0; b < nc; ++b) mcc(a, b) = problem.M(cidx[a], cidx[b]);
    for (Eigen::Index b = 0; b < nf; ++b) mcf(a, b) = problem.M(cidx[a], fidx[b]);
  }
  for (Eigen::Index a = 0; a < nf; ++a) {
    qf[a] = problem.q[fidx[a]];
    for (Eigen::Index b = 0; b < nc; ++b) mfc(a, b) = problem.M(fidx[a], cidx[b]);
    for (Eigen::Index b = 0; b < nf; ++b) mff(a, b) = problem.M(fidx[a], fidx[b]);
  }

  // Pivot the free block into the basis: z_F = -M_FF^{-1}(q_F + M_FC z_C).
  Eigen::MatrixXd m_red = mcc;
  Eigen::VectorXd q_red = qc;
  Eigen::MatrixXd sol_fc;
  Eigen::VectorXd sol_f;
  if (nf > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(mff);
    lu.setThreshold(options.pivot_tol);
    if (!lu.isInvertible()) return SolveBySplitting(problem, covering, options);
    sol_fc = lu.solve(mfc);
    sol_f = lu.solve(qf);
    m_red -= mcf * sol_fc;
    q_red -= mcf * sol_f;
  }

  PureResult res = Lemke(m_red, q_red, dc, options).Run();
  LcpSolution sol;
  sol.status = res.status;
  sol.pivots = res.pivots;
  if (nf == 0) sol.basis = res.basis;
  if (res.status != LcpStatus::kSolved) return sol;
  sol.z = Eigen::VectorXd::Zero(n);
  for (Eigen::Index a = 0; a < nc; ++a) sol.z[cidx[a]] = res.z[a];
  if (nf > 0) {
    Eigen::VectorXd zf = -(sol_f + sol_fc * res.z);
    for (Eigen::Index a = 0; a < nf; ++a) sol.z[fidx[a]] = zf[a];
  }
  sol.w = problem.M * sol.z + problem.q;
  if (!CheckLcp(problem, sol.z).Ok() && nf > 0) {
    LcpSolution split = SolveBySplitting(problem, covering, options);
    if (split.solved()) return split;
  }
  return sol;
}

LcpSolution TraverseFrom(const LcpProblem& problem, const LcpSolution& start,
                         std::size_t label, const LcpOptions& options) {
  problem.Validate();
  const std::size_t n = problem.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (problem.IsFree(j)) {
      throw ValidationError("path traversal needs a pure LCP");
    }
  }
  if (!start.solved() || start.basis.size() != n || label >= n) {
    throw ValidationError("traversal needs a solved start with its basis");
  }
  const Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  PureResult res = Lemke(problem.M, problem.q, d, options)
                       .Traverse(start.basis, label);
  LcpSolution sol;
  sol.status = res.status;
  sol.pivots = res.pivots;
  if (!sol.solved()) return sol;
  sol.basis = res.basis;
  sol.z = res.z;
  sol.w = problem.M * sol.z + problem.q;
  return sol;
}

LcpResiduals CheckLcp(const LcpProblem& problem, const Eigen::VectorXd& z) {
  LcpResiduals r;
  if (z.size() != problem.q.size()) throw ShapeError("LCP z length");
  const Eigen::VectorXd w = problem.M * z + problem.q;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (problem.IsFree(j)) {
      r.equality = std::max(r.equality, std::abs(w[j]));
    } else {
      r.z_negativity = std::max(r.z_negativity, -z[j]);
      r.w_negativity = std::max(r.w_negativity, -w[j]);
      r.complementarity = std::max(r.complementarity, std::abs(z[j] * w[j]));
    }
  }
  return r;
}

}  // namespace sre
