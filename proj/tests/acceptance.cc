// Acceptance checks: one PASS/FAIL line per criterion, exit code 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "sre/concave.h"
#include "sre/cournot.h"
#include "sre/equilibrium.h"
#include "sre/experiments.h"
#include "sre/game_io.h"
#include "sre/robust_response.h"
#include "sre/transport.h"

namespace sre {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

Eigen::VectorXd RandomSimplex(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd p(n);
  for (int k = 0; k < n; ++k) p[k] = e(rng);
  return p / p.sum();
}

ActionMetric RandomMetric(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd pts(n, 2);
  for (int k = 0; k < n; ++k) pts.row(k) << u(rng), u(rng);
  Eigen::MatrixXd d(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) d(a, b) = (pts.row(a) - pts.row(b)).norm();
  }
  return ActionMetric(d);
}

FiniteGame RandomBimatrix(std::mt19937_64& rng, int m, int n, bool zero_sum) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Eigen::MatrixXd A(m, n), B(m, n);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) {
      A(r, c) = u(rng);
      B(r, c) = zero_sum ? -A(r, c) : u(rng);
    }
  }
  return FiniteGame::Bimatrix(std::vector<std::string>(m, "r"),
                              std::vector<std::string>(n, "c"), A, B);
}

std::string Vec(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  os << ")";
  return os.str();
}

bool HasProfile(const std::vector<Equilibrium>& eqs, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y, double tol) {
  for (const auto& eq : eqs) {
    if ((eq.profile[0].probs() - x).lpNorm<Eigen::Infinity>() <= tol &&
        (eq.profile[1].probs() - y).lpNorm<Eigen::Infinity>() <= tol) {
      return true;
    }
  }
  return false;
}

void PedestrianThresholds(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  const MetricGame game(PedestrianGame());
  const auto ts = PureSetThresholds(game, AmbiguitySpec::Uniform(0.0),
                                    MakeGrid(0, 1, 0.01), 1e-7);
  const double secs = Seconds(start);
  const double grid[] = {0.03, 0.11, 0.65};
  const double exact[] = {1.0 / 46, 1.0 / 10, 9.0 / 14};
  out.detail << ts.size() << " changes at";
  for (const auto& t : ts) {
    out.detail << " " << t.grid_value << " (bisected " << t.bisected << ")";
  }
  out.detail << "; " << secs << " s";
  out.Require(ts.size() == 3, "three set changes");
  for (std::size_t k = 0; k < std::min<std::size_t>(ts.size(), 3); ++k) {
    out.Require(std::abs(ts[k].grid_value - grid[k]) < 1e-12,
                "grid point " + std::to_string(grid[k]));
    out.Require(std::abs(ts[k].bisected - exact[k]) < 1e-3,
                "bisected threshold " + std::to_string(exact[k]));
  }
  out.Require(secs < 30.0, "runtime < 30 s");
}

void PedestrianEquilibria(Outcome& out) {
  const MetricGame game(PedestrianGame());
  const auto at001 = SolveSre2Player(game, AmbiguitySpec::Uniform(0.01));
  out.detail << "eps=0.01: " << at001.size() << " equilibria";
  for (const auto& eq : at001) {
    out.detail << " " << Vec(eq.profile[0].probs()) << "/"
               << Vec(eq.profile[1].probs());
  }
  out.Require(at001.size() == 3, "three equilibria at 0.01");
  out.Require(HasProfile(at001, Eigen::Vector3d(1, 0, 0), Eigen::Vector2d(1, 0),
                         1e-4),
              "(M,W) at 0.01");
  out.Require(HasProfile(at001, Eigen::Vector3d(0, 0, 1), Eigen::Vector2d(0, 1),
                         1e-4),
              "(S,C) at 0.01");
  out.Require(HasProfile(at001, Eigen::Vector3d(0, 0.55, 0.45),
                         Eigen::Vector2d(5.0 / 14, 9.0 / 14), 1e-4),
              "mixed point (0, .55, .45)/(5/14, 9/14) at 0.01");
  for (const auto& [eps, action] :
       std::vector<std::pair<double, std::size_t>>{{0.3, 1}, {0.8, 2}}) {
    const auto eqs = SolveSre2Player(game, AmbiguitySpec::Uniform(eps));
    const bool ok = eqs.size() == 1 &&
                    eqs[0].profile[0].PureAction() == action &&
                    eqs[0].profile[1].PureAction() == 0;
    out.detail << "; eps=" << eps << ": " << eqs.size() << " equilibria";
    out.Require(ok, "unique expected equilibrium at " + std::to_string(eps));
  }
}

void DeviationCurves(Outcome& out) {
  const FiniteGame game = PedestrianGame();
  const DeviationCurve curve = PedestrianDeviationCurve(1001);
  const Eigen::MatrixXd& u = game.PayoffMatrix(0);
  double worst = 0.0;
  for (std::size_t k = 0; k < curve.f.size(); ++k) {
    const double f = curve.f[k];
    // Expectation oracle straight from the payoff table.
    const auto expect = [&](int a) { return (1 - f) * u(a, 0) + f * u(a, 1); };
    worst = std::max({worst, std::abs(curve.nash[k] - expect(0)),
                      std::abs(curve.sre[k] - expect(1)),
                      std::abs(curve.security[k] - expect(2)),
                      std::abs(curve.nash[k] - (10 - 60 * f)),
                      std::abs(curve.sre[k] - (9 - 14 * f)),
                      std::abs(curve.security[k])});
  }
  out.detail << "max deviation from 10-60f, 9-14f, 0: " << worst
             << "; curves cross at f = " << curve.crossing;
  out.Require(worst <= 1e-10, "affine forms within 1e-10");
  out.Require(std::abs(curve.crossing - 1.0 / 46) < 1e-10, "crossing at 1/46");
}

void Duality(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(2, 4);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int m = size(rng), n = size(rng);
    const FiniteGame game = RandomBimatrix(rng, m, n, false);
    const ActionMetric metric = trial % 3 == 0
                                    ? ActionMetric::TotalVariation(n)
                                    : RandomMetric(rng, n);
    const double s = trial % 2 ? 2.0 : 1.0;
    const double eps =
        std::uniform_real_distribution<double>(0.0, metric.Diameter())(rng);
    const MixedStrategy p(RandomSimplex(rng, m));
    const JointDistribution center({static_cast<std::size_t>(n)},
                                   RandomSimplex(rng, n));
    const double primal =
        WorstCasePayoffPrimal(game, 0, p, center, metric, s, eps).value;
    const double dual = ComputeRobustValue(game, 0, p, center, metric, s, eps).value;
    worst = std::max(worst, std::abs(primal - dual));
  }
  const double secs = Seconds(start);
  out.detail << "500 instances, max |primal - dual| = " << worst << "; " << secs
             << " s";
  out.Require(worst <= 1e-6, "agreement within 1e-6");
  out.Require(secs < 60.0, "runtime < 60 s");
}

void Interpolation(Outcome& out) {
  std::mt19937_64 rng(99);
  double worst_nash = 0.0, worst_security = 0.0;
  int empty = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = trial % 2 ? 3 : 2;
    const FiniteGame g = RandomBimatrix(rng, k, k, false);
    const MetricGame game(g, {RandomMetric(rng, k), RandomMetric(rng, k)});
    const auto eqs = SolveSre2Player(game, AmbiguitySpec::Uniform(0.0));
    if (eqs.empty()) ++empty;
    for (const auto& eq : eqs) {
      worst_nash = std::max(
          worst_nash, oracle::BimatrixNashGap(g.PayoffMatrix(0),
                                              g.PayoffMatrix(1).transpose(),
                                              eq.profile[0].probs(),
                                              eq.profile[1].probs()));
    }
    AmbiguitySpec full;
    full.epsilon = {game.OpponentMetric(0).Diameter(),
                    game.OpponentMetric(1).Diameter()};
    const StrategyProfile center = {MixedStrategy(RandomSimplex(rng, k)),
                                    MixedStrategy(RandomSimplex(rng, k))};
    for (std::size_t i = 0; i < 2; ++i) {
      const double robust =
          ComputeRobustBestResponse(game, i, center, full).value;
      worst_security = std::max(
          worst_security, std::abs(robust - SecurityStrategy(g, i).value));
    }
  }
  out.detail << "max Nash gap at eps=0: " << worst_nash
             << "; max |robust BR - security| at diameter: " << worst_security;
  out.Require(empty == 0, "an equilibrium for every game");
  out.Require(worst_nash <= 1e-6, "classical Nash check at 1e-6");
  out.Require(worst_security <= 1e-7, "security value within 1e-7");
}

void ZeroSum(Outcome& out) {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + trial % 3, n = 2 + (trial / 3) % 3;
    const FiniteGame g = RandomBimatrix(rng, m, n, true);
    const MetricGame game(g);
    const double maximin = SecurityStrategy(g, 0).value;
    const double diam = game.MaxDiameter();
    for (double eps : {0.0, 0.3 * diam, diam}) {
      for (const auto& eq :
           SolveSre2Player(game, AmbiguitySpec::Uniform(eps))) {
        worst = std::max({worst, std::abs(eq.values[0] - maximin),
                          std::abs(eq.values[1] + maximin)});
        ++checked;
      }
    }
  }
  out.detail << checked << " equilibria, max |robust value - maximin| = "
             << worst;
  out.Require(worst <= 1e-6, "robust values equal maximin within 1e-6");
}

void VerifierAsOracle(Outcome& out) {
  int emitted = 0, violations = 0;
  const double delta = SolveOptions{}.verify_delta;
  for (const char* name : {"pedestrian", "inspection", "free_rider",
                           "congestion", "congestion_nobridge"}) {
    const GameDocument doc =
        LoadGameFile(std::string(SRE_DATA_DIR) + "/" + name + ".json");
    const MetricGame game(doc.game, doc.metrics);
    for (double eps : MakeGrid(0, 1, 0.05)) {
      const AmbiguitySpec spec = doc.Spec(eps);
      for (const auto& eq : SolveSre2Player(game, spec)) {
        ++emitted;
        if (!VerifySre(game, eq.profile, spec, delta).pass) ++violations;
      }
    }
  }
  // Fixed-point path on random three-player games.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double fp_delta = FixedPointOptions{}.verify_delta;
  int fp_failures = 0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> payoffs(3, std::vector<double>(8));
    for (auto& t : payoffs) {
      for (double& v : t) v = u(rng);
    }
    const MetricGame game(
        FiniteGame(std::vector<std::vector<std::string>>(3, {"a", "b"}),
                   payoffs));
    const AmbiguitySpec spec = AmbiguitySpec::Uniform(0.1 * trial);
    try {
      const Equilibrium eq = SolveSreNPlayer(game, spec);
      ++emitted;
      if (!VerifySre(game, eq.profile, spec, fp_delta).pass) ++violations;
    } catch (const ConvergenceError&) {
      ++fp_failures;  // nothing emitted
    }
  }
  // Concave path on the Cournot models.
  const double concave_delta = ConcaveOptions{}.verify_delta;
  for (const CournotModel& model :
       {CournotSymmetricModel(), CournotAsymmetricModel()}) {
    const QuadraticGame game = CournotGame(model);
    for (double eps : {0.0, 2.0, 7.0, 15.0}) {
      try {
        const PureSre sre = SolveSreConcave(game, eps);
        ++emitted;
        if (!VerifySreConcave(game, sre.actions, eps, concave_delta, 8, 123)
                 .pass) {
          ++violations;
        }
      } catch (const ConcaveConvergenceError&) {
        ++fp_failures;
      }
    }
  }
  out.detail << emitted << " emitted equilibria re-verified, " << violations
             << " violations (" << fp_failures
             << " runs ended without emitting)";
  out.Require(violations == 0, "zero verification violations");
}

void Coordination(Outcome& out) {
  const MetricGame inspection(InspectionGame());
  for (double eps : {0.1, 0.2, 0.3, 0.4}) {
    const auto eqs = SolveSre2Player(inspection, AmbiguitySpec::Uniform(eps));
    out.Require(!eqs.empty(), "inspection equilibrium exists");
    for (const auto& eq : eqs) {
      const double p1 = ExpectedPayoff(inspection.game(), 0, eq.profile[0],
                                       ProductDistribution(eq.profile, 0));
      const double p2 = ExpectedPayoff(inspection.game(), 1, eq.profile[1],
                                       ProductDistribution(eq.profile, 1));
      out.detail << "eps=" << eps << ": (" << p1 << ", " << p2 << "); ";
      out.Require(p1 > 5.0 && p2 > -2.5,
                  "inspection above (5, -2.5) at " + std::to_string(eps));
    }
  }
  const MetricGame free_rider(FreeRiderGame());
  const auto eqs = SolveSre2Player(free_rider, AmbiguitySpec::Uniform(1.0));
  out.Require(!eqs.empty(), "free-rider equilibrium exists");
  for (const auto& eq : eqs) {
    for (std::size_t i = 0; i < 2; ++i) {
      const double p = ExpectedPayoff(free_rider.game(), i, eq.profile[i],
                                      ProductDistribution(eq.profile, i));
      out.detail << "free rider p" << i + 1 << " at eps=1: " << p << "; ";
      out.Require(std::abs(p - 0.6) < 1e-6, "free-rider payoff 0.6");
    }
  }
}

void Braess(Outcome& out) {
  const FiniteGame no_bridge = CongestionGame(false);
  const StrategyProfile security = {SecurityStrategy(no_bridge, 0).strategy,
                                    SecurityStrategy(no_bridge, 1).strategy};
  const double benchmark = -SocialPayoff(no_bridge, security);
  const StrategyProfile half = {MixedStrategy::Uniform(2),
                                MixedStrategy::Uniform(2)};
  out.detail << "no-bridge security mix " << security[0][0]
             << ", benchmark cost " << benchmark << " (exact 50/50 mix gives "
             << -SocialPayoff(no_bridge, half) << "); ";

  const MetricGame game(CongestionGame(true));
  const std::vector<double> grid = MakeGrid(0, 1, 0.01);
  const auto rows = SweepEpsilon(game, AmbiguitySpec::Uniform(0.0), grid);
  double prev = std::numeric_limits<double>::infinity();
  double reached_at = -1.0;
  std::vector<std::string> increases;
  for (const auto& row : rows) {
    const int w = WorstEquilibrium(game.game(), row.equilibria);
    if (w < 0) {
      out.Require(false, "equilibrium at every grid point");
      continue;
    }
    const double cost = -SocialPayoff(game.game(), row.equilibria[w].profile);
    if (cost > prev + 1e-9) {
      std::ostringstream os;
      os << row.epsilon << " (" << prev << " -> " << cost << ")";
      increases.push_back(os.str());
    }
    if (reached_at < 0 && std::abs(cost - benchmark) < 1e-6) {
      reached_at = row.epsilon;
    }
    prev = cost;
  }
  out.detail << "worst-equilibrium cost " << -SocialPayoff(
                    game.game(),
                    rows.front().equilibria[WorstEquilibrium(
                        game.game(), rows.front().equilibria)].profile)
             << " at 0, " << prev << " at 1; benchmark first reached at eps="
             << reached_at << "; increases at:";
  for (const auto& s : increases) out.detail << " " << s;
  out.Require(increases.empty(), "worst social cost nonincreasing in eps");
  out.Require(reached_at >= 0, "benchmark reached");
}

void CournotIdentities(Outcome& out) {
  const CournotModel model = ParseCournotModel(
      ReadJsonFile(std::string(SRE_DATA_DIR) + "/cournot_duopoly.json"));
  const QuadraticGame game = CournotGame(model);
  const std::vector<double> nash = CournotClosedFormSre(model, 0.0);
  ConcaveOptions options;
  options.tol = 1e-9;
  double worst_q = 0.0, worst_lambda = 0.0;
  for (double eps : {1.0, 10.0, 30.0}) {
    const PureSre sre = SolveSreConcave(game, eps, options);
    for (std::size_t i = 0; i < 2; ++i) {
      worst_q = std::max(worst_q,
                         std::abs(sre.actions[i][0] - (nash[i] - eps / 3)));
      const Eigen::VectorXd opp = game.Opponents(sre.actions, i);
      const LambdaOpt opt =
          MaximizeOverLambda(game, i, sre.actions[i], opp, eps,
                             game.LambdaBound(i, eps), Adversary::kUnconstrained);
      const double formula =
          (game.player(i).B.transpose() * sre.actions[i]).norm() / (2 * eps);
      worst_lambda = std::max(worst_lambda, std::abs(opt.lambda - formula));
    }
  }
  out.detail << "Nash " << nash[0] << ", " << nash[1]
             << "; max |a - (Nash - eps/3)| = " << worst_q
             << "; max |lambda - |B'a|/(2 eps)| = " << worst_lambda;
  out.Require(worst_q <= 1e-5, "quantities within 1e-5");
  out.Require(worst_lambda <= 1e-6, "multiplier within 1e-6");
}

void CournotExperiment(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  const CournotModel model = CournotSymmetricModel();
  const QuadraticGame game = CournotGame(model);
  PerturbationSpec spec;
  spec.draws = 1000;
  std::vector<CournotSweepRow> rows;
  try {
    rows = SweepCournot(model, MakeGrid(0, 20, 1), ConcaveOptions{}, spec, 1);
  } catch (const Error& e) {
    out.Require(false, std::string("sweep converged: ") + e.what());
    return;
  }
  int failed_verification = 0;
  std::vector<std::string> increases;
  double better_until = 0.0;
  bool still_better = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double eps = rows[k].epsilon;
    if (!VerifySreConcave(game, rows[k].sre.actions, eps, 1e-4).pass) {
      ++failed_verification;
    }
    if (k > 0) {
      for (std::size_t i = 0; i < model.num_firms(); ++i) {
        if (rows[k].sre.actions[i].sum() >
            rows[k - 1].sre.actions[i].sum() + 1e-6) {
          increases.push_back("firm " + std::to_string(i + 1) + " at " +
                              std::to_string(eps));
        }
      }
      bool better = true;
      for (std::size_t i = 0; i < model.num_firms(); ++i) {
        better = better && rows[k].profits[i] > rows[0].profits[i];
      }
      still_better = still_better && better;
      if (still_better) better_until = eps;
    }
  }
  const double secs = Seconds(start);
  out.detail << rows.size() << " grid points, " << failed_verification
             << " failed verification; production per firm "
             << rows.front().sre.actions[0].sum() << " -> "
             << rows.back().sre.actions[0].sum()
             << "; all firms above Nash profit " << rows[0].profits[0]
             << " for eps in (0, " << better_until << "]; " << secs << " s";
  out.Require(failed_verification == 0, "verification at 1e-4");
  out.Require(increases.empty(), "production nonincreasing");
  out.Require(better_until > 0.0, "SRE above Nash on an initial range");
  out.Require(secs < 300.0, "runtime < 5 min");
}

QuadraticGame RandomQuadraticGame(std::mt19937_64& rng, int players, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<QuadraticPlayer> ps(players);
  for (auto& p : ps) {
    Eigen::MatrixXd G(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) G(r, c) = u(rng);
    }
    p.Q = -(G * G.transpose() + 0.1 * Eigen::MatrixXd::Identity(dim, dim));
    p.B.resize(dim, dim * (players - 1));
    for (int r = 0; r < p.B.rows(); ++r) {
      for (int c = 0; c < p.B.cols(); ++c) p.B(r, c) = 2 * u(rng);
    }
    p.q.resize(dim);
    for (int k = 0; k < dim; ++k) p.q[k] = 5 * u(rng);
    p.actions.A.resize(2 * dim + 1, dim);
    p.actions.A << Eigen::MatrixXd::Identity(dim, dim),
        -Eigen::MatrixXd::Identity(dim, dim), Eigen::RowVectorXd::Ones(dim);
    p.actions.b.resize(2 * dim + 1);
    p.actions.b << Eigen::VectorXd::Constant(dim, 10.0),
        Eigen::VectorXd::Zero(dim), 12.0;
  }
  return QuadraticGame(std::move(ps));
}

void NumericalHygiene(Outcome& out) {
  std::mt19937_64 rng(404);
  const double h = 1e-5;
  double worst_grad = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const QuadraticGame game = RandomQuadraticGame(rng, 2 + trial % 3, 1 + trial % 3);
    const std::size_t i = trial % game.num_players();
    const Eigen::VectorXd a = game.player(i).actions.RandomPoint(rng);
    const Eigen::VectorXd center = game.OpponentPolytope(i).RandomPoint(rng);
    const double lambda = std::uniform_real_distribution<double>(0.05, 5.0)(rng);
    const double eps = 0.5;
    const SurrogateEval ev = SurrogatePayoff(game, i, a, lambda, center, eps);
    const auto value = [&](const Eigen::VectorXd& x, double l) {
      return SurrogatePayoff(game, i, x, l, center, eps).value;
    };
    const auto rel = [](double fd, double an) {
      return std::abs(fd - an) / std::max(1.0, std::abs(an));
    };
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      Eigen::VectorXd up = a, down = a;
      up[k] += h;
      down[k] -= h;
      worst_grad = std::max(
          worst_grad,
          rel((value(up, lambda) - value(down, lambda)) / (2 * h), ev.grad_a[k]));
    }
    worst_grad = std::max(
        worst_grad,
        rel((value(a, lambda + h) - value(a, lambda - h)) / (2 * h),
            ev.grad_lambda));
  }
  double worst_axiom = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 4;
    const double s = trial % 2 ? 2.0 : 1.0;
    const ActionMetric metric = RandomMetric(rng, n);
    const Eigen::VectorXd p = RandomSimplex(rng, n), q = RandomSimplex(rng, n),
                          r = RandomSimplex(rng, n);
    const double pq = OtDistance(p, q, metric, s).distance;
    const double qp = OtDistance(q, p, metric, s).distance;
    const double qr = OtDistance(q, r, metric, s).distance;
    const double pr = OtDistance(p, r, metric, s).distance;
    const double pp = OtDistance(p, p, metric, s).distance;
    worst_axiom = std::max({worst_axiom, pp, -pq, std::abs(pq - qp),
                            pr - pq - qr});
  }
  out.detail << "max relative gradient error " << worst_grad
             << " (200 instances); max metric-axiom violation " << worst_axiom
             << " (1000 triples)";
  out.Require(worst_grad <= 1e-4, "gradients within 1e-4");
  out.Require(worst_axiom <= 1e-8, "metric axioms within 1e-8");
}

}  // namespace
}  // namespace sre

int main() {
  using Check = std::pair<const char*, std::function<void(sre::Outcome&)>>;
  const std::vector<Check> checks = {
      {"pedestrian thresholds", sre::PedestrianThresholds},
      {"pedestrian equilibria", sre::PedestrianEquilibria},
      {"deviation curves", sre::DeviationCurves},
      {"duality", sre::Duality},
      {"interpolation", sre::Interpolation},
      {"zero-sum invariance", sre::ZeroSum},
      {"verifier as oracle", sre::VerifierAsOracle},
      {"coordination via robustification", sre::Coordination},
      {"braess taming", sre::Braess},
      {"cournot identities", sre::CournotIdentities},
      {"cournot experiment", sre::CournotExperiment},
      {"numerical hygiene", sre::NumericalHygiene},
  };
  int failures = 0;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    sre::Outcome out;
    try {
      checks[k].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    if (!out.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", k + 1,
                checks[k].first, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures == 0 ? 0 : 1;
}
