#include "sre/concave.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

namespace sre {
namespace {

constexpr double kNsdTol = 1e-8;

Eigen::MatrixXd JsonMatrix(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be a matrix");
  const Eigen::Index rows = j.size();
  Eigen::Index cols = rows > 0 ? j[0].size() : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) {
      throw ShapeError(what + " rows have different lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Eigen::VectorXd JsonVector(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be a vector");
  Eigen::VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v[k] = j[k].get<double>();
  return v;
}

// Box projection for the multiplier coordinate.
double Clamp(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

struct AscentPoint {
  Eigen::VectorXd a;
  double lambda = 0.0;
};

struct AscentEval {
  double value;
  Eigen::VectorXd grad_a;
  double grad_lambda;
};

// Projected gradient ascent with backtracking on a concave objective over
// polytope x [0, lambda_max]. With lambda_max <= 0 the multiplier stays fixed
// at zero.
AscentPoint ProjectedAscent(
    const std::function<AscentEval(const AscentPoint&)>& f,
    const Polytope& set, double lambda_max, AscentPoint x, int max_iter,
    double tol, double* final_value) {
  const bool use_lambda = lambda_max > 0.0;
  x.a = set.Project(x.a);
  x.lambda = use_lambda ? Clamp(x.lambda, 0.0, lambda_max) : 0.0;
  AscentEval cur = f(x);
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    bool accepted = false;
    AscentPoint next;
    AscentEval next_eval{};
    double change = 0.0;
    for (int bt = 0; bt < 80; ++bt) {
      next.a = set.Project(x.a + step * cur.grad_a);
      next.lambda =
          use_lambda ? Clamp(x.lambda + step * cur.grad_lambda, 0.0,
                             lambda_max)
                     : 0.0;
      const Eigen::VectorXd da = next.a - x.a;
      const double dl = next.lambda - x.lambda;
      const double sq = da.squaredNorm() + dl * dl;
      change = std::max(da.cwiseAbs().maxCoeff(), std::abs(dl));
      if (sq == 0.0) break;
      next_eval = f(next);
      // Curvature along the step must stay below 1 / step. Unlike a pure
      // sufficient-increase test this stays reliable once value differences
      // fall below rounding.
      const double curvature = -((next_eval.grad_a - cur.grad_a).dot(da) +
                                 (next_eval.grad_lambda - cur.grad_lambda) * dl);
      if (curvature <= sq / step &&
          next_eval.value >= cur.value - 1e-12 * (1.0 + std::abs(cur.value))) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    x = next;
    cur = next_eval;
    const double scale = 1.0 + std::max(x.a.cwiseAbs().maxCoeff(),
                                        std::abs(x.lambda));
    if (change <= tol * scale) {
      // A short step only means convergence if a unit step would also be
      // short; otherwise the backtracking has collapsed on a stiff region.
      const double residual = std::max(
          (set.Project(x.a + cur.grad_a) - x.a).cwiseAbs().maxCoeff(),
          use_lambda ? std::abs(Clamp(x.lambda + cur.grad_lambda, 0.0,
                                      lambda_max) -
                                x.lambda)
                     : 0.0);
      if (residual <= std::sqrt(tol) * scale || step < 1e-8) break;
    }
    step *= 2.0;
  }
  if (final_value != nullptr) *final_value = cur.value;
  return x;
}

// Maximum of a concave function on [0, hi] by golden-section search over the
// interior, which is kept above 1e-12 hi; end points are never evaluated.
// `argmax` receives the best point seen.
double GoldenSectionMax(const std::function<double(double)>& f, double hi,
                        double rel_tol, double* argmax = nullptr) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 1e-12 * hi;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  double best = f1, best_x = x1;
  if (f2 > best) best = f2, best_x = x2;
  while (hi - lo > rel_tol * hi) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
      if (f2 > best) best = f2, best_x = x2;
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
      if (f1 > best) best = f1, best_x = x1;
    }
  }
  if (argmax != nullptr) *argmax = best_x;
  return best;
}

}  // namespace

QuadraticGame::QuadraticGame(std::vector<QuadraticPlayer> players)
    : players_(std::move(players)) {
  const std::size_t n = players_.size();
  if (n < 2) throw ValidationError("a game needs at least two players");
  Eigen::Index total = 0;
  for (const auto& p : players_) total += p.q.size();
  for (std::size_t i = 0; i < n; ++i) {
    const QuadraticPlayer& p = players_[i];
    const Eigen::Index d = p.q.size();
    const std::string tag = "player " + std::to_string(i) + ": ";
    if (d == 0) throw ShapeError(tag + "empty action vector");
    if (p.Q.rows() != d || p.Q.cols() != d) throw ShapeError(tag + "Q");
    if (p.B.rows() != d || p.B.cols() != total - d) {
      throw ShapeError(tag + "B must be dim x (sum of opponent dims)");
    }
    if (p.actions.A.cols() != d || p.actions.A.rows() != p.actions.b.size()) {
      throw ShapeError(tag + "constraint shapes");
    }
    if (!p.Q.allFinite() || !p.B.allFinite() || !p.q.allFinite() ||
        !p.actions.A.allFinite() || !p.actions.b.allFinite()) {
      throw ValidationError(tag + "non-finite data");
    }
    const Eigen::MatrixXd sym = 0.5 * (p.Q + p.Q.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    if (eig.eigenvalues().maxCoeff() > kNsdTol) {
      throw ValidationError(tag + "Q is not negative semidefinite");
    }
    Eigen::VectorXd lo, hi;
    try {
      p.actions.BoundingBox(&lo, &hi);
    } catch (const Error& e) {
      throw ValidationError(tag + "action set: " + e.what());
    }
    box_lo_.push_back(lo);
    box_hi_.push_back(hi);
  }
}

Eigen::VectorXd QuadraticGame::Opponents(const ActionProfile& a,
                                         std::size_t i) const {
  Eigen::Index total = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j != i) total += a[j].size();
  }
  Eigen::VectorXd out(total);
  Eigen::Index pos = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j == i) continue;
    out.segment(pos, a[j].size()) = a[j];
    pos += a[j].size();
  }
  return out;
}

double QuadraticGame::Payoff(std::size_t i, const Eigen::VectorXd& a_i,
                             const Eigen::VectorXd& a_minus_i) const {
  const QuadraticPlayer& p = players_.at(i);
  if (a_i.size() != p.q.size()) throw ShapeError("own action dimension");
  if (a_minus_i.size() != p.B.cols()) {
    throw ShapeError("opponent action dimension");
  }
  return a_i.dot(p.Q * a_i) + a_i.dot(p.B * a_minus_i) + p.q.dot(a_i);
}

double QuadraticGame::Payoff(std::size_t i, const ActionProfile& a) const {
  CheckActionProfile(*this, a);
  return Payoff(i, a[i], Opponents(a, i));
}

double QuadraticGame::PayoffBound(std::size_t i) const {
  auto magnitude = [&](std::size_t j) {
    return Eigen::VectorXd(box_lo_[j].cwiseAbs().cwiseMax(box_hi_[j].cwiseAbs()));
  };
  const QuadraticPlayer& p = players_.at(i);
  const Eigen::VectorXd own = magnitude(i);
  Eigen::VectorXd opp(p.B.cols());
  Eigen::Index pos = 0;
  for (std::size_t j = 0; j < players_.size(); ++j) {
    if (j == i) continue;
    opp.segment(pos, dim(j)) = magnitude(j);
    pos += dim(j);
  }
  return own.dot(p.Q.cwiseAbs() * own) + own.dot(p.B.cwiseAbs() * opp) +
         p.q.cwiseAbs().dot(own);
}

double QuadraticGame::LambdaBound(std::size_t i, double epsilon) const {
  if (!(epsilon > 0.0)) {
    throw ValidationError("multiplier bound undefined at zero radius");
  }
  return 2.0 * PayoffBound(i) / (epsilon * epsilon);
}

Polytope QuadraticGame::OpponentPolytope(std::size_t i) const {
  Eigen::Index rows = 0, cols = 0;
  for (std::size_t j = 0; j < players_.size(); ++j) {
    if (j == i) continue;
    rows += players_[j].actions.A.rows();
    cols += dim(j);
  }
  Polytope out{Eigen::MatrixXd::Zero(rows, cols), Eigen::VectorXd(rows)};
  Eigen::Index r = 0, c = 0;
  for (std::size_t j = 0; j < players_.size(); ++j) {
    if (j == i) continue;
    const Polytope& pj = players_[j].actions;
    out.A.block(r, c, pj.A.rows(), pj.A.cols()) = pj.A;
    out.b.segment(r, pj.b.size()) = pj.b;
    r += pj.A.rows();
    c += pj.A.cols();
  }
  return out;
}

void CheckActionProfile(const QuadraticGame& game, const ActionProfile& a) {
  if (a.size() != game.num_players()) throw ShapeError("profile size");
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].size() != game.dim(j)) {
      throw ShapeError("action dimension of player " + std::to_string(j));
    }
  }
}

SurrogateEval SurrogatePayoff(const QuadraticGame& game, std::size_t i,
                              const Eigen::VectorXd& a_i, double lambda,
                              const Eigen::VectorXd& a_minus_i, double epsilon,
                              Adversary adversary) {
  const QuadraticPlayer& p = game.player(i);
  if (a_i.size() != p.q.size()) throw ShapeError("own action dimension");
  if (a_minus_i.size() != p.B.cols()) {
    throw ShapeError("opponent action dimension");
  }
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be nonnegative");
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  const Eigen::VectorXd g = p.B.transpose() * a_i;
  SurrogateEval out;
  if (lambda > 0.0) {
    // The inner minimum of g'x + lambda |x - a^{-i}|^2 is the projection of
    // the unconstrained minimizer.
    const Eigen::VectorXd target = a_minus_i - g / (2.0 * lambda);
    const bool far = g.norm() > 2e8 * lambda * (1.0 + a_minus_i.norm());
    if (adversary == Adversary::kUnconstrained) {
      out.worst = target;
    } else if (far && !target.allFinite()) {
      out.worst = game.OpponentPolytope(i).MinimizeLinear(g);
    } else {
      out.worst = game.OpponentPolytope(i).Project(target);
    }
    if (adversary == Adversary::kPolytopes && far) {
      // Projections of points this far away lose the relevant digits; the
      // best vertex of the linear part is then an equally good minimizer.
      const Eigen::VectorXd vertex =
          game.OpponentPolytope(i).MinimizeLinear(g);
      auto inner = [&](const Eigen::VectorXd& x) {
        return g.dot(x) + lambda * (x - a_minus_i).squaredNorm();
      };
      if (inner(vertex) < inner(out.worst)) out.worst = vertex;
    }
  } else {
    if (adversary == Adversary::kUnconstrained) {
      throw NumericalError(
          "inner problem is unbounded at lambda = 0 without constraints");
    }
    out.worst = game.OpponentPolytope(i).MinimizeLinear(g);
  }
  const double dist2 = (out.worst - a_minus_i).squaredNorm();
  out.value = game.Payoff(i, a_i, out.worst) + lambda * dist2 -
              lambda * epsilon * epsilon;
  out.grad_a = (p.Q + p.Q.transpose()) * a_i + p.q + p.B * out.worst;
  out.grad_lambda = dist2 - epsilon * epsilon;
  return out;
}

double RegularizedPayoffUnconstrained(const QuadraticGame& game,
                                      std::size_t i,
                                      const Eigen::VectorXd& a_i,
                                      const Eigen::VectorXd& a_minus_i,
                                      double epsilon) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  const double penalty = (game.player(i).B.transpose() * a_i).norm();
  return game.Payoff(i, a_i, a_minus_i) - epsilon * penalty;
}

LambdaOpt MaximizeOverLambda(const QuadraticGame& game, std::size_t i,
                             const Eigen::VectorXd& a_i,
                             const Eigen::VectorXd& a_minus_i, double epsilon,
                             double bound, Adversary adversary) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  if (epsilon == 0.0) return {0.0, game.Payoff(i, a_i, a_minus_i)};
  if (!(bound > 0.0)) throw ValidationError("lambda bound must be positive");
  auto eval = [&](double l) {
    return SurrogatePayoff(game, i, a_i, l, a_minus_i, epsilon, adversary);
  };
  const SurrogateEval top = eval(bound);
  if (top.grad_lambda >= 0.0) return {bound, top.value};
  if (adversary == Adversary::kPolytopes) {
    const SurrogateEval zero = eval(0.0);
    if (zero.grad_lambda <= 0.0) return {0.0, zero.value};
  }
  double lo = 0.0, hi = bound;
  for (int it = 0; it < 400 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (eval(mid).grad_lambda > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // The surrogate is concave in lambda, so the better end point is kept.
  const double l = lo > 0.0 ? lo : hi;
  const double v_lo = eval(l).value;
  const double v_hi = eval(hi).value;
  return v_hi > v_lo ? LambdaOpt{hi, v_hi} : LambdaOpt{l, v_lo};
}

double RobustPayoff(const QuadraticGame& game, std::size_t i,
                    const ActionProfile& a, double epsilon) {
  CheckActionProfile(game, a);
  const Eigen::VectorXd opp = game.Opponents(a, i);
  if (epsilon == 0.0) return game.Payoff(i, a[i], opp);
  return MaximizeOverLambda(game, i, a[i], opp, epsilon,
                            game.LambdaBound(i, epsilon))
      .value;
}

ConcaveReport VerifySreConcave(const QuadraticGame& game,
                               const ActionProfile& candidate, double epsilon,
                               double delta, int restarts,
                               std::uint64_t seed) {
  CheckActionProfile(game, candidate);
  ConcaveReport report;
  report.pass = true;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const QuadraticPlayer& p = game.player(i);
    if (!p.actions.Contains(candidate[i])) {
      throw ValidationError("candidate action of player " +
                            std::to_string(i) + " is outside its set");
    }
    const Eigen::VectorXd opp = game.Opponents(candidate, i);
    const double bound = epsilon > 0.0 ? game.LambdaBound(i, epsilon) : 0.0;
    // phi(a) = sup over lambda of the surrogate; concave, with gradient
    // given by the surrogate's at the maximizing lambda.
    auto phi = [&](const AscentPoint& x) {
      const LambdaOpt opt =
          MaximizeOverLambda(game, i, x.a, opp, epsilon, bound);
      if (epsilon == 0.0) {
        const Eigen::VectorXd grad =
            (p.Q + p.Q.transpose()) * x.a + p.q + p.B * opp;
        return AscentEval{opt.value, grad, 0.0};
      }
      const SurrogateEval s =
          SurrogatePayoff(game, i, x.a, opt.lambda, opp, epsilon);
      return AscentEval{opt.value, s.grad_a, 0.0};
    };
    const double value = phi({candidate[i], 0.0}).value;
    double best = value;
    std::vector<Eigen::VectorXd> starts{candidate[i]};
    for (int r = 0; r < restarts; ++r) {
      starts.push_back(p.actions.RandomPoint(rng));
    }
    for (const Eigen::VectorXd& s : starts) {
      double v = 0.0;
      ProjectedAscent(phi, p.actions, 0.0, {s, 0.0}, 5000, 1e-11, &v);
      best = std::max(best, v);
    }
    if (epsilon > 0.0) {
      // phi has kinks where the optimal multiplier is zero, which can stall
      // the ascent above. For fixed lambda > 0 the surrogate is smooth in the
      // action, and its best value is concave in lambda.
      Eigen::VectorXd warm = candidate[i];
      auto at_lambda = [&](double l) {
        auto f = [&](const AscentPoint& x) {
          const SurrogateEval s =
              SurrogatePayoff(game, i, x.a, l, opp, epsilon);
          return AscentEval{s.value, s.grad_a, 0.0};
        };
        double v = 0.0;
        warm = ProjectedAscent(f, p.actions, 0.0, {warm, 0.0}, 5000, 1e-11, &v)
                   .a;
        return v;
      };
      best = std::max(best, GoldenSectionMax(at_lambda, bound, 1e-9));
    }
    const double gap = best - value;
    report.values.push_back(value);
    report.best_values.push_back(best);
    report.gaps.push_back(gap);
    if (!(gap <= delta)) report.pass = false;
  }
  return report;
}

PureSre SolveSreConcave(const QuadraticGame& game, double epsilon,
                        const ConcaveOptions& options,
                        const ActionProfile& start) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("epsilon must be finite and nonnegative");
  }
  if (!(options.gamma > 0.0)) throw ValidationError("gamma must be positive");
  const std::size_t n = game.num_players();
  ActionProfile a(n);
  if (start.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::VectorXd lo, hi;
      game.player(i).actions.BoundingBox(&lo, &hi);
      a[i] = game.player(i).actions.Project(0.5 * (lo + hi));
    }
  } else {
    CheckActionProfile(game, start);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = game.player(i).actions.Project(start[i]);
    }
  }
  std::vector<double> bounds(n, 0.0);
  if (epsilon > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      bounds[i] = game.LambdaBound(i, epsilon);
    }
  }
  std::vector<double> lambdas(n, 0.0);

  double gamma = options.gamma;
  double best_change = std::numeric_limits<double>::infinity();
  ActionProfile best_a = a;
  std::vector<double> best_l = lambdas;
  int stale = 0;
  int it = 0;
  bool converged = false;
  for (; it < options.max_iter; ++it) {
    const ActionProfile snapshot = a;
    const std::vector<double> snapshot_l = lambdas;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const QuadraticPlayer& p = game.player(i);
      const Eigen::VectorXd opp =
          game.Opponents(options.gauss_seidel ? a : snapshot, i);
      const Eigen::VectorXd center = snapshot[i];
      const double center_l = snapshot_l[i];
      auto prox = [&](const AscentPoint& x) {
        AscentEval e;
        if (epsilon == 0.0) {
          e.value = game.Payoff(i, x.a, opp);
          e.grad_a = (p.Q + p.Q.transpose()) * x.a + p.q + p.B * opp;
          e.grad_lambda = 0.0;
        } else {
          const SurrogateEval s =
              SurrogatePayoff(game, i, x.a, x.lambda, opp, epsilon);
          e.value = s.value;
          e.grad_a = s.grad_a;
          e.grad_lambda = s.grad_lambda;
        }
        const Eigen::VectorXd da = x.a - center;
        const double dl = x.lambda - center_l;
        e.value -= gamma * (da.squaredNorm() + dl * dl);
        e.grad_a -= 2.0 * gamma * da;
        e.grad_lambda -= 2.0 * gamma * dl;
        return e;
      };
      double next_value = 0.0;
      AscentPoint next =
          ProjectedAscent(prox, p.actions, bounds[i], {center, center_l},
                          options.inner_max_iter, options.inner_tol,
                          &next_value);
      if (epsilon > 0.0) {
        // Close to lambda = 0 the joint problem is too stiff for gradient
        // steps, so the joint answer only seeds a search over lambda. For
        // fixed lambda the problem in the action is smooth, and its optimal
        // value is concave in lambda.
        Eigen::VectorXd warm = next.a;
        std::vector<std::pair<double, Eigen::VectorXd>> seen;
        auto at_lambda = [&](double l) {
          auto f = [&](const AscentPoint& x) {
            AscentEval e = prox({x.a, l});
            e.grad_lambda = 0.0;
            return e;
          };
          double v = 0.0;
          warm = ProjectedAscent(f, p.actions, 0.0, {warm, l},
                                 options.inner_max_iter, options.inner_tol, &v)
                     .a;
          seen.emplace_back(l, warm);
          return v;
        };
        double l_best = 0.0;
        double v_best = GoldenSectionMax(at_lambda, bounds[i], 1e-12, &l_best);
        const double v_zero = at_lambda(0.0);
        if (v_zero >= v_best) v_best = v_zero, l_best = 0.0;
        if (v_best > next_value) {
          for (const auto& [l, x] : seen) {
            if (l == l_best) next = {x, l};
          }
        }
      }
      change = std::max(change, (next.a - center).cwiseAbs().maxCoeff());
      change = std::max(change, std::abs(next.lambda - center_l));
      a[i] = next.a;
      lambdas[i] = next.lambda;
    }
    if (!std::isfinite(change)) {
      a = best_a;
      lambdas = best_l;
      gamma *= 2.0;
      stale = 0;
      continue;
    }
    if (change <= options.tol) {
      converged = true;
      ++it;
      break;
    }
    if (change < best_change) {
      best_change = change;
      best_a = a;
      best_l = lambdas;
      stale = 0;
    } else if (++stale >= 200) {
      // No progress: a heavier proximal term damps the best-response map.
      a = best_a;
      lambdas = best_l;
      gamma *= 2.0;
      stale = 0;
    }
  }

  PureSre out;
  out.actions = a;
  out.iterations = it;
  out.gamma = gamma;
  out.epsilon = epsilon;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd opp = game.Opponents(a, i);
    const LambdaOpt opt =
        MaximizeOverLambda(game, i, a[i], opp, epsilon, bounds[i]);
    out.lambdas.push_back(opt.lambda);
    out.values.push_back(opt.value);
  }
  const ConcaveReport report =
      VerifySreConcave(game, a, epsilon, options.verify_delta,
                       options.verify_restarts, options.seed);
  out.gaps = report.gaps;
  if (!converged) {
    std::ostringstream msg;
    msg << "proximal iteration did not converge in " << options.max_iter
        << " iterations";
    throw ConcaveConvergenceError(msg.str(), a, report.gaps);
  }
  if (!report.pass) {
    throw ConcaveConvergenceError(
        "proximal fixed point failed verification", a, report.gaps);
  }
  return out;
}

QuadraticGame ParseQuadraticGame(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("players") ||
      !doc["players"].is_array()) {
    throw ValidationError("quadratic game needs a \"players\" array");
  }
  std::vector<QuadraticPlayer> players;
  for (std::size_t i = 0; i < doc["players"].size(); ++i) {
    const nlohmann::json& j = doc["players"][i];
    const std::string tag = "players[" + std::to_string(i) + "].";
    for (const char* key : {"Q", "B", "q", "D", "d"}) {
      if (!j.contains(key)) throw ValidationError(tag + key + " is missing");
    }
    QuadraticPlayer p;
    p.Q = JsonMatrix(j["Q"], tag + "Q");
    p.B = JsonMatrix(j["B"], tag + "B");
    p.q = JsonVector(j["q"], tag + "q");
    p.actions.A = JsonMatrix(j["D"], tag + "D");
    p.actions.b = JsonVector(j["d"], tag + "d");
    if (p.actions.A.rows() == 0) {
      p.actions.A.resize(0, p.q.size());
    }
    // An empty opponent block in JSON ([]) has no column count.
    if (p.B.rows() == 0) p.B.resize(p.q.size(), 0);
    players.push_back(std::move(p));
  }
  return QuadraticGame(std::move(players));
}

}  // namespace sre
