#include "sre/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "sre/robust_response.h"

namespace sre {

const char* ToString(Method method) {
  switch (method) {
    case Method::kLcp:
      return "lcp";
    case Method::kFixedPoint:
      return "fixed-point";
    case Method::kOracle:
      return "oracle";
  }
  return "unknown";
}

VerifyReport VerifySre(const MetricGame& game, const StrategyProfile& profile,
                       const AmbiguitySpec& spec, double delta) {
  CheckProfile(game.game(), profile);
  spec.Validate(game.num_players());
  VerifyReport report;
  report.pass = true;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const RobustValue own = ComputeRobustValue(game, i, profile, spec);
    const RobustBestResponse best =
        ComputeRobustBestResponse(game, i, profile, spec);
    const double gap = best.value - own.value;
    report.gaps.push_back(gap);
    report.values.push_back(own.value);
    report.best_values.push_back(best.value);
    report.lambdas.push_back(own.lambda);
    if (gap > delta) report.pass = false;
  }
  return report;
}

SreLcp AssembleLcp2Player(const MetricGame& game, const AmbiguitySpec& spec) {
  if (game.num_players() != 2) {
    throw ValidationError("the LCP formulation needs exactly 2 players");
  }
  spec.Validate(2);
  SreLcp out;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    LcpBlock b;
    b.num_actions = game.game().num_actions(i);
    b.num_opponent = game.game().num_actions(1 - i);
    b.has_lambda = spec.EpsilonFor(i) > 0.0;
    b.shift = -1.0 - game.game().MaxPayoff(i);
    const std::size_t m = b.num_opponent;
    b.p = offset;
    offset += b.num_actions;
    b.lambda = offset;
    if (b.has_lambda) ++offset;
    b.xi = offset;
    offset += m;
    b.kappa = offset++;
    b.eta = offset;
    offset += b.has_lambda ? m * m : m;
    out.blocks.push_back(b);
    out.kkt_unknowns += 2 * b.num_actions + 3 + m + m * m;
  }

  const std::size_t n = offset;
  LcpProblem& lcp = out.problem;
  lcp.M = Eigen::MatrixXd::Zero(n, n);
  lcp.q = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < 2; ++i) {
    const LcpBlock& b = out.blocks[i];
    const LcpBlock& o = out.blocks[1 - i];
    const Eigen::MatrixXd u =
        game.game().PayoffMatrix(i).array() + b.shift;
    const std::size_t m = b.num_opponent;
    const double eps_s = std::pow(spec.EpsilonFor(i), spec.s);
    const Eigen::MatrixXd cost = game.OpponentMetric(i).PowerCost(spec.s);

    // Enumerates the coupling cells (a, c) kept in eta, with column index.
    auto for_each_cell = [&](auto&& f) {
      std::size_t k = b.eta;
      for (std::size_t a = 0; a < m; ++a) {
        if (b.has_lambda) {
          for (std::size_t c = 0; c < m; ++c) f(a, c, k++);
        } else {
          f(a, a, k++);
        }
      }
    };

    // With u <= -1 every row below is the KKT system of player i's robust
    // best-response LP written with zeta = -xi >= 0 and sum p >= 1, which
    // makes the player's own block skew-symmetric.
    // -kappa - sum_{a,c} u(x,c) eta(a,c)  _|_  p(x)
    for (std::size_t x = 0; x < b.num_actions; ++x) {
      lcp.M(b.p + x, b.kappa) = -1.0;
      for_each_cell([&](std::size_t, std::size_t c, std::size_t k) {
        lcp.M(b.p + x, k) = -u(x, c);
      });
    }
    // eps^s - sum d^s eta  _|_  lambda
    if (b.has_lambda) {
      lcp.q[b.lambda] = eps_s;
      for_each_cell([&](std::size_t a, std::size_t c, std::size_t k) {
        lcp.M(b.lambda, k) = -cost(a, c);
      });
    }
    // p^{-i}(a) - sum_c eta(a,c)  _|_  zeta(a)
    for_each_cell([&](std::size_t a, std::size_t, std::size_t k) {
      lcp.M(b.xi + a, k) = -1.0;
    });
    for (std::size_t a = 0; a < m; ++a) lcp.M(b.xi + a, o.p + a) = 1.0;
    // sum p - 1  _|_  kappa
    for (std::size_t x = 0; x < b.num_actions; ++x) lcp.M(b.kappa, b.p + x) = 1.0;
    lcp.q[b.kappa] = -1.0;
    // zeta(a) + sum_x u(x,c) p(x) + lambda d^s(a,c)  _|_  eta(a,c)
    for_each_cell([&](std::size_t a, std::size_t c, std::size_t k) {
      for (std::size_t x = 0; x < b.num_actions; ++x) lcp.M(k, b.p + x) = u(x, c);
      if (b.has_lambda) lcp.M(k, b.lambda) = cost(a, c);
      lcp.M(k, b.xi + a) = 1.0;
    });
  }
  return out;
}

StrategyProfile RecoverProfile(const SreLcp& lcp, const Eigen::VectorXd& z) {
  StrategyProfile profile;
  for (const LcpBlock& b : lcp.blocks) {
    Eigen::VectorXd p = z.segment(b.p, b.num_actions).cwiseMax(0.0);
    const double total = p.sum();
    if (!(total > 0)) throw NumericalError("LCP returned an empty strategy");
    profile.emplace_back(Eigen::VectorXd(p / total));
  }
  return profile;
}

double ProfileDistance(const StrategyProfile& a, const StrategyProfile& b) {
  if (a.size() != b.size()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return INFINITY;
    d = std::max(d, (a[i].probs() - b[i].probs()).cwiseAbs().maxCoeff());
  }
  return d;
}

std::vector<Equilibrium> Deduplicate(std::vector<Equilibrium> eqs,
                                     double tol) {
  std::vector<Equilibrium> out;
  for (auto& e : eqs) {
    bool seen = std::any_of(out.begin(), out.end(), [&](const Equilibrium& k) {
      return ProfileDistance(k.profile, e.profile) <= tol;
    });
    if (!seen) out.push_back(std::move(e));
  }
  return out;
}

namespace {

Equilibrium MakeEquilibrium(StrategyProfile profile, const VerifyReport& r,
                            Method method, double epsilon) {
  Equilibrium e;
  e.profile = std::move(profile);
  e.lambdas = r.lambdas;
  e.values = r.values;
  e.gaps = r.gaps;
  e.method = method;
  e.epsilon = epsilon;
  return e;
}

double SpecEpsilon(const AmbiguitySpec& spec) {
  return spec.epsilon.empty() ? 0.0 : spec.epsilon.front();
}

}  // namespace

std::vector<Equilibrium> SolveSre2Player(const MetricGame& game,
                                         const AmbiguitySpec& spec,
                                         const SolveOptions& options) {
  const SreLcp lcp = AssembleLcp2Player(game, spec);
  const std::size_t n = lcp.problem.size();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> log_scale(-1.0, 1.0);

  // LCP solutions reached so far, in discovery order.
  std::vector<LcpSolution> solutions;
  auto add = [&](LcpSolution sol) {
    if (!sol.solved() || !CheckLcp(lcp.problem, sol.z).Ok()) return;
    for (const auto& known : solutions) {
      if ((known.z - sol.z).cwiseAbs().maxCoeff() <= 1e-9) return;
    }
    solutions.push_back(std::move(sol));
  };
  for (int start = 0; start <= options.n_starts; ++start) {
    Eigen::VectorXd covering = Eigen::VectorXd::Ones(n);
    if (start > 0) {
      for (std::size_t k = 0; k < n; ++k) {
        covering[k] = std::pow(10.0, log_scale(rng));
      }
    }
    add(SolveLcp(lcp.problem, covering, options.lcp));
  }
  // Lemke-Howson style paths out of every solution, one per dropped label.
  for (std::size_t k = 0;
       k < solutions.size() && solutions.size() < options.max_solutions; ++k) {
    for (std::size_t label = 0; label < n; ++label) {
      add(TraverseFrom(lcp.problem, solutions[k], label, options.lcp));
    }
  }

  std::vector<Equilibrium> found;
  for (const auto& sol : solutions) {
    StrategyProfile profile;
    try {
      profile = RecoverProfile(lcp, sol.z);
    } catch (const Error&) {
      continue;
    }
    const VerifyReport r =
        VerifySre(game, profile, spec, options.verify_delta);
    if (!r.pass) continue;
    found.push_back(
        MakeEquilibrium(std::move(profile), r, Method::kLcp, SpecEpsilon(spec)));
  }
  found = Deduplicate(std::move(found), options.dedup_tol);
  if (found.empty()) {
    throw Error(ErrorKind::kNoEquilibrium, "no equilibrium found");
  }
  return found;
}

Equilibrium SolveSreNPlayer(const MetricGame& game, const AmbiguitySpec& spec,
                            const FixedPointOptions& options) {
  spec.Validate(game.num_players());
  const std::size_t num = game.num_players();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  StrategyProfile p;
  for (std::size_t i = 0; i < num; ++i) {
    Eigen::VectorXd v(game.game().num_actions(i));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = unif(rng);
    p.emplace_back(Eigen::VectorXd(v / v.sum()));
  }

  double eta = options.damping;
  double best_gap = INFINITY;
  int stale = 0;
  std::vector<double> gaps(num);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    StrategyProfile next = p;
    double max_gap = 0.0;
    for (std::size_t i = 0; i < num; ++i) {
      const RobustBestResponse br = ComputeRobustBestResponse(game, i, p, spec);
      const double own = ComputeRobustValue(game, i, p, spec).value;
      gaps[i] = br.value - own;
      max_gap = std::max(max_gap, gaps[i]);
      if (gaps[i] > options.tol) {
        next[i] = MixedStrategy(Eigen::VectorXd(
            (1.0 - eta) * p[i].probs() + eta * br.strategy.probs()));
      }
    }
    if (max_gap <= options.tol) {
      const VerifyReport r = VerifySre(game, p, spec, options.verify_delta);
      if (!r.pass) {
        throw ConvergenceError("fixed point failed verification", p, r.gaps);
      }
      return MakeEquilibrium(p, r, Method::kFixedPoint, SpecEpsilon(spec));
    }
    if (max_gap < best_gap * (1.0 - 1e-3)) {
      best_gap = max_gap;
      stale = 0;
    } else if (++stale >= 8) {
      eta *= 0.5;
      stale = 0;
      if (eta < options.min_damping) break;
    }
    p = std::move(next);
  }
  throw ConvergenceError("damped best responses did not converge", p, gaps);
}

StrategyProfile PureProfile(const FiniteGame& game,
                            const std::vector<std::size_t>& actions) {
  if (actions.size() != game.num_players()) {
    throw ShapeError("pure profile needs one action per player");
  }
  StrategyProfile p;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    p.push_back(MixedStrategy::Pure(game.num_actions(i), actions[i]));
  }
  return p;
}

std::vector<std::vector<std::size_t>> PureEquilibria(const MetricGame& game,
                                                     const AmbiguitySpec& spec,
                                                     double delta) {
  const std::vector<std::size_t> dims = game.game().Dims();
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<std::size_t> actions = Unflatten(dims, flat);
    if (VerifySre(game, PureProfile(game.game(), actions), spec, delta).pass) {
      out.push_back(std::move(actions));
    }
  }
  return out;
}

namespace {

// All vectors of `parts` nonnegative integers summing to `total`.
void Compositions(int total, std::size_t parts, std::vector<int>* current,
                  std::vector<std::vector<int>>* out) {
  if (current->size() + 1 == parts) {
    current->push_back(total);
    out->push_back(*current);
    current->pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    current->push_back(k);
    Compositions(total - k, parts, current, out);
    current->pop_back();
  }
}

double Binomial(double n, double k) {
  double r = 1.0;
  for (int j = 1; j <= static_cast<int>(k); ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace

std::vector<StrategyProfile> OracleGridEquilibria(const MetricGame& game,
                                                  const AmbiguitySpec& spec,
                                                  int resolution,
                                                  double delta) {
  if (resolution < 1) throw ValidationError("grid resolution must be >= 1");
  const std::size_t num = game.num_players();
  double count = 1.0;
  for (std::size_t i = 0; i < num; ++i) {
    const double n = static_cast<double>(game.game().num_actions(i));
    count *= Binomial(resolution + n - 1, n - 1);
  }
  if (count > 1e7) {
    throw ValidationError("oracle grid has more than 1e7 profiles");
  }
  std::vector<std::vector<MixedStrategy>> grids(num);
  for (std::size_t i = 0; i < num; ++i) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    Compositions(resolution, game.game().num_actions(i), &cur, &comps);
    for (const auto& c : comps) {
      Eigen::VectorXd v(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) v[k] = c[k];
      grids[i].emplace_back(Eigen::VectorXd(v / resolution));
    }
  }
  std::vector<StrategyProfile> out;
  std::vector<std::size_t> idx(num, 0);
  while (true) {
    StrategyProfile p;
    for (std::size_t i = 0; i < num; ++i) p.push_back(grids[i][idx[i]]);
    if (VerifySre(game, p, spec, delta).pass) out.push_back(std::move(p));
    std::size_t i = num;
    while (i > 0) {
      --i;
      if (++idx[i] < grids[i].size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

}  // namespace sre
