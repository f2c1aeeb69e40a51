#ifndef SRE_TESTS_ORACLES_H
#define SRE_TESTS_ORACLES_H

// Brute-force reference implementations used only by tests. None of them
// shares code with the library solvers.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace sre::oracle {

// Calls f on every k-subset of {0, ..., n-1}.
template <typename F>
void ForEachSubset(int n, int k, F f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// max c'x s.t. A x <= b, x >= 0 by vertex enumeration. nullopt when the
// feasible set is empty. Assumes the optimum is attained.
inline std::optional<double> VertexLp(const Eigen::VectorXd& c,
                                      const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b) {
  const int n = c.size();
  const int m = A.rows();
  Eigen::MatrixXd G(m + n, n);
  Eigen::VectorXd h(m + n);
  G << A, -Eigen::MatrixXd::Identity(n, n);
  h << b, Eigen::VectorXd::Zero(n);
  std::optional<double> best;
  ForEachSubset(m + n, n, [&](const std::vector<int>& rows) {
    Eigen::MatrixXd S(n, n);
    Eigen::VectorXd r(n);
    for (int k = 0; k < n; ++k) {
      S.row(k) = G.row(rows[k]);
      r[k] = h[rows[k]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (lu.rank() < n) return;
    const Eigen::VectorXd x = lu.solve(r);
    if ((G * x - h).maxCoeff() > 1e-9) return;
    const double v = c.dot(x);
    if (!best || v > *best) best = v;
  });
  return best;
}

// Every solution of 0 <= z _|_ M z + q >= 0 found by trying each set of
// basic z variables.
inline std::vector<Eigen::VectorXd> SupportEnumerationLcp(
    const Eigen::MatrixXd& M, const Eigen::VectorXd& q) {
  const int n = q.size();
  std::vector<Eigen::VectorXd> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int j = 0; j < n; ++j) {
      if (mask & (1 << j)) s.push_back(j);
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    if (!s.empty()) {
      Eigen::MatrixXd Ms(s.size(), s.size());
      Eigen::VectorXd qs(s.size());
      for (std::size_t a = 0; a < s.size(); ++a) {
        qs[a] = q[s[a]];
        for (std::size_t b = 0; b < s.size(); ++b) Ms(a, b) = M(s[a], s[b]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(Ms);
      if (lu.rank() < static_cast<int>(s.size())) continue;
      const Eigen::VectorXd zs = lu.solve(-qs);
      for (std::size_t a = 0; a < s.size(); ++a) z[s[a]] = zs[a];
    }
    const Eigen::VectorXd w = M * z + q;
    if (z.minCoeff() >= -1e-9 && w.minCoeff() >= -1e-9) out.push_back(z);
  }
  return out;
}

// Nash equilibria of a nondegenerate bimatrix game by support enumeration
// over equal-size supports. Returns (x, y) pairs.
inline std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>
SupportEnumerationNash(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const int m = A.rows(), n = A.cols();
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> out;
  for (int k = 1; k <= std::min(m, n); ++k) {
    ForEachSubset(m, k, [&](const std::vector<int>& I) {
      ForEachSubset(n, k, [&](const std::vector<int>& J) {
        // y on J makes rows in I indifferent; x on I does the same for J.
        Eigen::MatrixXd Ly(k + 1, k + 1), Lx(k + 1, k + 1);
        Ly.setZero();
        Lx.setZero();
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) {
            Ly(a, b) = A(I[a], J[b]);
            Lx(a, b) = B(I[b], J[a]);
          }
          Ly(a, k) = -1.0;
          Lx(a, k) = -1.0;
          Ly(k, a) = 1.0;
          Lx(k, a) = 1.0;
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
        rhs[k] = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> luy(Ly), lux(Lx);
        if (luy.rank() <= k || lux.rank() <= k) return;
        const Eigen::VectorXd sy = luy.solve(rhs), sx = lux.solve(rhs);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(m), y = Eigen::VectorXd::Zero(n);
        for (int a = 0; a < k; ++a) {
          x[I[a]] = sx[a];
          y[J[a]] = sy[a];
        }
        if (x.minCoeff() < -1e-12 || y.minCoeff() < -1e-12) return;
        const double u1 = sy[k], u2 = sx[k];
        if ((A * y).maxCoeff() > u1 + 1e-9) return;
        if ((B.transpose() * x).maxCoeff() > u2 + 1e-9) return;
        out.emplace_back(x, y);
      });
    });
  }
  return out;
}

// Largest gain from a pure deviation in a bimatrix game.
inline double BimatrixNashGap(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) {
  const double g1 = (A * y).maxCoeff() - x.dot(A * y);
  const double g2 = (B.transpose() * x).maxCoeff() - x.dot(B * y);
  return std::max(g1, g2);
}

// Transport cost of the monotone (north-west corner) coupling on atoms
// ordered along a line; optimal for costs convex in |i - j|.
inline double NorthWestCornerCost(Eigen::VectorXd mu, Eigen::VectorXd nu,
                                  const Eigen::MatrixXd& cost) {
  std::size_t i = 0, j = 0;
  double total = 0.0;
  while (i < static_cast<std::size_t>(mu.size()) &&
         j < static_cast<std::size_t>(nu.size())) {
    const double m = std::min(mu[i], nu[j]);
    total += m * cost(i, j);
    mu[i] -= m;
    nu[j] -= m;
    if (mu[i] <= 1e-15) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

// Worst case of E_rho[ubar] over the total-variation ball: move up to eps
// mass from the best atoms onto the worst one.
inline double TvWorstCase(const Eigen::VectorXd& center,
                          const Eigen::VectorXd& ubar, double eps) {
  const double lo = ubar.minCoeff();
  std::vector<int> order(center.size());
  for (int k = 0; k < center.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return ubar[a] > ubar[b]; });
  double budget = eps;
  double value = center.dot(ubar);
  for (int k : order) {
    const double moved = std::min(budget, center[k]);
    value -= moved * (ubar[k] - lo);
    budget -= moved;
    if (budget <= 0.0) break;
  }
  return value;
}

// Euclidean projection onto {x : A x <= b} by Dykstra's algorithm.
inline Eigen::VectorXd DykstraProject(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& y,
                                      int sweeps = 20000) {
  const int m = A.rows();
  Eigen::VectorXd x = y;
  std::vector<Eigen::VectorXd> inc(m, Eigen::VectorXd::Zero(y.size()));
  for (int it = 0; it < sweeps; ++it) {
    // x alone can repeat across a sweep while the increments still move, so
    // both must settle.
    double change = 0.0;
    for (int k = 0; k < m; ++k) {
      const Eigen::VectorXd z = x + inc[k];
      const double viol = A.row(k).dot(z) - b[k];
      const Eigen::VectorXd p =
          viol > 0 ? Eigen::VectorXd(z - viol / A.row(k).squaredNorm() *
                                              A.row(k).transpose())
                   : z;
      change = std::max(change, (z - p - inc[k]).lpNorm<Eigen::Infinity>());
      change = std::max(change, (p - x).lpNorm<Eigen::Infinity>());
      inc[k] = z - p;
      x = p;
    }
    if (change < 1e-14) break;
  }
  return x;
}

// min over x in {A x <= b} of g'x + lambda |x - center|^2 by projected
// gradient with Dykstra projections.
inline double InnerMinimum(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& g, double lambda,
                           const Eigen::VectorXd& center,
                           Eigen::VectorXd* argmin = nullptr) {
  const double step = 1.0 / (4.0 * lambda);
  Eigen::VectorXd x = DykstraProject(A, b, center);
  for (int it = 0; it < 5000; ++it) {
    const Eigen::VectorXd grad = g + 2.0 * lambda * (x - center);
    const Eigen::VectorXd next = DykstraProject(A, b, x - step * grad, 2000);
    const double move = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    if (move < 1e-13) break;
  }
  if (argmin) *argmin = x;
  return g.dot(x) + lambda * (x - center).squaredNorm();
}

// Symmetric capacitated Cournot Nash: per market
// a_t = max(0, (alpha_t - c - mu) / ((n + 1) beta_t)) with mu >= 0 chosen so
// that sum_t a_t <= K, found by bisection.
inline Eigen::VectorXd SymmetricCournotNash(const Eigen::VectorXd& alpha,
                                            const Eigen::VectorXd& beta,
                                            double c, double K, int n) {
  auto quantities = [&](double mu) {
    Eigen::VectorXd a(alpha.size());
    for (int t = 0; t < alpha.size(); ++t) {
      a[t] = std::max(0.0, (alpha[t] - c - mu) / ((n + 1) * beta[t]));
    }
    return a;
  };
  if (quantities(0.0).sum() <= K) return quantities(0.0);
  double lo = 0.0, hi = alpha.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (quantities(mid).sum() > K ? lo : hi) = mid;
  }
  return quantities(hi);
}

}  // namespace sre::oracle

#endif  // SRE_TESTS_ORACLES_H
