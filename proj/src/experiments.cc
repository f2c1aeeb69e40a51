#include "sre/experiments.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "sre/error.h"
#include "sre/robust_response.h"

namespace sre {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(k) for k in [0, n) on a pool; the first exception is rethrown.
template <typename F>
void ParallelFor(std::size_t n, int threads, F body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  unsigned count = threads > 0
                       ? static_cast<unsigned>(threads)
                       : std::max(1u, std::thread::hardware_concurrency());
  count = std::min<unsigned>(count, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double Round12(double x) { return std::round(x * 1e12) / 1e12; }

// Moments of clamp(delta, a, b) for delta ~ U[lo, hi].
void ClampedUniformMoments(double lo, double hi, double a, double b,
                           double* m1, double* m2) {
  if (hi <= lo) {
    const double c = std::clamp(lo, a, b);
    *m1 = c;
    *m2 = c * c;
    return;
  }
  const double len = hi - lo;
  double s1 = 0.0, s2 = 0.0;
  const double below = std::max(0.0, std::min(hi, a) - lo);
  s1 += below * a;
  s2 += below * a * a;
  const double above = std::max(0.0, hi - std::max(lo, b));
  s1 += above * b;
  s2 += above * b * b;
  const double x0 = std::max(lo, a), x1 = std::min(hi, b);
  if (x1 > x0) {
    s1 += 0.5 * (x1 * x1 - x0 * x0);
    s2 += (x1 * x1 * x1 - x0 * x0 * x0) / 3.0;
  }
  *m1 = s1 / len;
  *m2 = s2 / len;
}

// Feasible shift range [a, b] for moving mass from action 1 to action 0.
void ShiftRange(const MixedStrategy& p, double* a, double* b) {
  *a = -p.probs()[0];
  *b = p.probs()[1];
}

MixedStrategy Shifted(const MixedStrategy& p, double delta) {
  Eigen::VectorXd v = p.probs();
  double a, b;
  ShiftRange(p, &a, &b);
  const double d = std::clamp(delta, a, b);
  v[0] += d;
  v[1] -= d;
  v = v.cwiseMax(0.0);
  return MixedStrategy(Eigen::VectorXd(v / v.sum()));
}

double PayoffAt(const FiniteGame& game, std::size_t i,
                const StrategyProfile& profile) {
  return ExpectedPayoff(game, i, profile[i], ProductDistribution(profile, i));
}

void MeanStd(const std::vector<double>& xs, double* mean, double* sd) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= xs.size();
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  *mean = m;
  *sd = xs.size() > 1 ? std::sqrt(v / xs.size()) : 0.0;
}

void WriteFile(const std::filesystem::path& path,
               const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  body(out);
}

}  // namespace

FiniteGame PedestrianGame() {
  Eigen::MatrixXd u1(3, 2), u2(3, 2);
  u1 << 10, -50, 9, -5, 0, 0;
  u2 << -1, -100, -1, -10, -1, 10;
  return FiniteGame::Bimatrix({"M", "D", "S"}, {"W", "C"}, u1, u2);
}

FiniteGame InspectionGame() {
  Eigen::MatrixXd u1(2, 2), u2(2, 2);
  u1 << 0, 10, 5, 5;
  u2 << -5, -10, 0, 5;
  return FiniteGame::Bimatrix({"S", "W"}, {"I", "NI"}, u1, u2);
}

FiniteGame FreeRiderGame() {
  Eigen::MatrixXd u1(2, 2), u2(2, 2);
  u1 << 0.6, 0.6, 1, 0;
  u2 << 0.6, 1, 0.6, 0;
  return FiniteGame::Bimatrix({"C", "NC"}, {"C", "NC"}, u1, u2);
}

FiniteGame CongestionGame(bool with_bridge) {
  Eigen::MatrixXd c1(4, 4), c2(4, 4);
  c1 << 19, 14, 19, 14,  //
      14, 20, 20, 14,    //
      16, 17, 22, 11,    //
      19, 19, 19, 19;
  c2 << 19, 14, 16, 19,  //
      14, 20, 17, 19,    //
      19, 20, 22, 19,    //
      14, 14, 11, 19;
  if (!with_bridge) {
    return FiniteGame::Bimatrix({"SAT", "SBT"}, {"SAT", "SBT"},
                                -c1.topLeftCorner(2, 2),
                                -c2.topLeftCorner(2, 2));
  }
  const std::vector<std::string> paths{"SAT", "SBT", "SABT", "SBAT"};
  return FiniteGame::Bimatrix(paths, paths, -c1, -c2);
}

CournotModel CournotSymmetricModel() {
  CournotModel m;
  m.alpha = Eigen::Vector3d(100, 120, 110);
  m.beta = Eigen::Vector3d(0.8, 0.6, 0.7);
  m.cost = Eigen::Vector4d::Constant(40);
  m.capacity = Eigen::Vector4d::Constant(100);
  return m;
}

CournotModel CournotAsymmetricModel() {
  CournotModel m = CournotSymmetricModel();
  m.cost = Eigen::Vector4d(40, 45, 50, 55);
  m.capacity = Eigen::Vector4d(100, 120, 90, 80);
  return m;
}

const std::vector<std::string>& ExperimentNames() {
  static const std::vector<std::string> names{
      "pedestrian", "inspection",        "free_rider",
      "congestion", "cournot_symmetric", "cournot_asymmetric"};
  return names;
}

std::vector<double> MakeGrid(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
    throw ValidationError("grid bounds must be finite");
  }
  if (!(step > 0.0)) throw ValidationError("grid step must be positive");
  if (hi < lo) throw ValidationError("grid needs lo <= hi");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  if (n > 1000000) throw ValidationError("grid has too many points");
  std::vector<double> grid;
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(Round12(lo + k * step));
  return grid;
}

std::vector<double> ParseGrid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad grid entry '" + item + "'");
    }
  }
  if (parts.size() != 3) throw ValidationError("grid must be lo:hi:step");
  return MakeGrid(parts[0], parts[1], parts[2]);
}

PerturbationStats FinitePerturbationStats(const FiniteGame& game,
                                          const StrategyProfile& profile,
                                          const PerturbationSpec& spec,
                                          std::uint64_t seed) {
  CheckProfile(game, profile);
  if (spec.delta_hi < spec.delta_lo) {
    throw ValidationError("perturbation range needs lo <= hi");
  }
  const std::size_t n = game.num_players();
  for (std::size_t j = 0; j < n; ++j) {
    if (game.num_actions(j) < 2) {
      throw ValidationError("perturbation needs two actions per player");
    }
  }
  PerturbationStats out;
  // Expected strategies under the shift; exact mean by multilinearity.
  StrategyProfile expected = profile;
  std::vector<std::array<double, 2>> ends(n);
  for (std::size_t j = 0; j < n; ++j) {
    double a, b, m1, m2;
    ShiftRange(profile[j], &a, &b);
    ClampedUniformMoments(spec.delta_lo, spec.delta_hi, a, b, &m1, &m2);
    expected[j] = Shifted(profile[j], m1);
    ends[j] = {std::clamp(spec.delta_lo, a, b), std::clamp(spec.delta_hi, a, b)};
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(spec.delta_lo, spec.delta_hi);
  const int draws = std::max(spec.draws, 1);
  std::vector<std::vector<double>> samples(n);
  for (int d = 0; d < draws; ++d) {
    StrategyProfile pert = profile;
    for (std::size_t j = 0; j < n; ++j) {
      const double delta = spec.delta_hi > spec.delta_lo ? unif(rng)
                                                         : spec.delta_lo;
      pert[j] = Shifted(profile[j], delta);
    }
    for (std::size_t i = 0; i < n; ++i) {
      StrategyProfile mixed = pert;
      mixed[i] = profile[i];
      samples[i].push_back(PayoffAt(game, i, mixed));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.nominal.push_back(PayoffAt(game, i, profile));
    StrategyProfile mean_profile = expected;
    mean_profile[i] = profile[i];
    out.mean.push_back(PayoffAt(game, i, mean_profile));
    // Extremes of a multilinear function sit at corners of the shift box.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const std::size_t corners = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      if (mask & (std::size_t{1} << i)) continue;
      StrategyProfile c = profile;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c[j] = Shifted(profile[j], ends[j][(mask >> j) & 1]);
      }
      const double v = PayoffAt(game, i, c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.min.push_back(lo);
    out.max.push_back(hi);
    double mc_mean, mc_std;
    MeanStd(samples[i], &mc_mean, &mc_std);
    out.mc_mean.push_back(mc_mean);
    out.mc_std.push_back(mc_std);
    if (n == 2) {
      // u = u0 + slope * clamp(delta): variance from the clamped moments.
      const std::size_t j = 1 - i;
      double a, b, m1, m2;
      ShiftRange(profile[j], &a, &b);
      ClampedUniformMoments(spec.delta_lo, spec.delta_hi, a, b, &m1, &m2);
      StrategyProfile unit = profile;
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(game.num_actions(j));
      dir[0] = 1.0;
      dir[1] = -1.0;
      const Eigen::MatrixXd& u = game.PayoffMatrix(i);
      const double slope = profile[i].probs().dot(u * dir);
      out.std.push_back(std::abs(slope) * std::sqrt(std::max(0.0, m2 - m1 * m1)));
    } else {
      out.std.push_back(mc_std);
    }
  }
  return out;
}

PerturbationStats CournotPerturbationStats(const CournotModel& model,
                                           const ActionProfile& actions,
                                           const PerturbationSpec& spec,
                                           std::uint64_t seed) {
  const QuadraticGame game = CournotGame(model);
  CheckActionProfile(game, actions);
  const std::size_t n = actions.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int draws = std::max(spec.draws, 1);
  std::vector<std::vector<double>> samples(n);
  for (int d = 0; d < draws; ++d) {
    ActionProfile pert = actions;
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::VectorXd noise(actions[j].size());
      for (Eigen::Index t = 0; t < noise.size(); ++t) {
        noise[t] = gauss(rng) * spec.relative_std * actions[j][t];
      }
      pert[j] = game.player(j).actions.Project(actions[j] + noise);
    }
    for (std::size_t i = 0; i < n; ++i) {
      ActionProfile mixed = pert;
      mixed[i] = actions[i];
      samples[i].push_back(CournotProfit(model, i, mixed));
    }
  }
  PerturbationStats out;
  for (std::size_t i = 0; i < n; ++i) {
    double m, sd;
    MeanStd(samples[i], &m, &sd);
    out.nominal.push_back(CournotProfit(model, i, actions));
    out.mean.push_back(m);
    out.std.push_back(sd);
    out.mc_mean.push_back(m);
    out.mc_std.push_back(sd);
    out.min.push_back(*std::min_element(samples[i].begin(), samples[i].end()));
    out.max.push_back(*std::max_element(samples[i].begin(), samples[i].end()));
  }
  return out;
}

double DeviationPayoff(const FiniteGame& game, std::size_t i,
                       const std::vector<std::size_t>& pure, std::size_t j,
                       std::size_t deviation, double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("f must be in [0, 1]");
  StrategyProfile profile = PureProfile(game, pure);
  if (j >= game.num_players() || deviation >= game.num_actions(j)) {
    throw ShapeError("deviation index");
  }
  Eigen::VectorXd p = (1.0 - f) * profile[j].probs();
  p[deviation] += f;
  profile[j] = MixedStrategy(p);
  return PayoffAt(game, i, profile);
}

DeviationLine FitDeviationLine(const FiniteGame& game, std::size_t i,
                               const std::vector<std::size_t>& pure,
                               std::size_t j, std::size_t deviation) {
  const double at0 = DeviationPayoff(game, i, pure, j, deviation, 0.0);
  const double at1 = DeviationPayoff(game, i, pure, j, deviation, 1.0);
  return {at0, at1 - at0};
}

DeviationCurve PedestrianDeviationCurve(int points) {
  if (points < 2) throw ValidationError("need at least two points");
  const FiniteGame game = PedestrianGame();
  constexpr std::size_t kM = 0, kD = 1, kS = 2, kW = 0, kC = 1;
  DeviationCurve curve;
  curve.nash_line = FitDeviationLine(game, 0, {kM, kW}, 1, kC);
  curve.sre_line = FitDeviationLine(game, 0, {kD, kW}, 1, kC);
  curve.security_line = FitDeviationLine(game, 0, {kS, kW}, 1, kC);
  for (int k = 0; k < points; ++k) {
    const double f = static_cast<double>(k) / (points - 1);
    curve.f.push_back(f);
    curve.nash.push_back(DeviationPayoff(game, 0, {kM, kW}, 1, kC, f));
    curve.sre.push_back(DeviationPayoff(game, 0, {kD, kW}, 1, kC, f));
    curve.security.push_back(DeviationPayoff(game, 0, {kS, kW}, 1, kC, f));
  }
  curve.crossing = (curve.sre_line.intercept - curve.nash_line.intercept) /
                   (curve.nash_line.slope - curve.sre_line.slope);
  return curve;
}

std::vector<Threshold> PureSetThresholds(const MetricGame& game,
                                         const AmbiguitySpec& base,
                                         const std::vector<double>& grid,
                                         double bisect_tol) {
  auto pure_at = [&](double eps) {
    PureSet set = PureEquilibria(game, base.WithEpsilon(eps));
    std::sort(set.begin(), set.end());
    return set;
  };
  std::vector<PureSet> sets(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) sets[k] = pure_at(grid[k]);
  std::vector<Threshold> out;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (sets[k] == sets[k - 1]) continue;
    Threshold t;
    t.grid_value = grid[k];
    t.before = sets[k - 1];
    t.after = sets[k];
    try {
      const PureSet& target = sets[k];
      t.bisected = FindThreshold(
          [&](double eps) { return pure_at(eps) == target; }, grid[k - 1],
          grid[k], bisect_tol);
    } catch (const Error&) {
      t.bisected = kNaN;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string FormatPureSet(const FiniteGame& game, const PureSet& set) {
  std::string s = "{";
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (k > 0) s += ", ";
    s += "(";
    for (std::size_t i = 0; i < set[k].size(); ++i) {
      if (i > 0) s += ",";
      s += game.action_labels(i)[set[k][i]];
    }
    s += ")";
  }
  return s + "}";
}

double SocialPayoff(const FiniteGame& game, const StrategyProfile& profile) {
  double total = 0.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    total += PayoffAt(game, i, profile);
  }
  return total;
}

int WorstEquilibrium(const FiniteGame& game,
                     const std::vector<Equilibrium>& eqs) {
  int worst = -1;
  double worst_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    const double v = SocialPayoff(game, eqs[k].profile);
    if (v < worst_value - 1e-12) {
      worst_value = v;
      worst = static_cast<int>(k);
    }
  }
  return worst;
}

std::vector<CournotSweepRow> SweepCournot(const CournotModel& model,
                                          const std::vector<double>& grid,
                                          const ConcaveOptions& options,
                                          const PerturbationSpec& spec,
                                          std::uint64_t seed, int threads) {
  const QuadraticGame game = CournotGame(model);
  std::vector<CournotSweepRow> rows(grid.size());
  ParallelFor(grid.size(), threads, [&](std::size_t k) {
    ConcaveOptions opt = options;
    opt.seed = options.seed + k;
    CournotSweepRow& row = rows[k];
    row.epsilon = grid[k];
    row.sre = SolveSreConcave(game, grid[k], opt);
    for (std::size_t i = 0; i < model.num_firms(); ++i) {
      row.profits.push_back(CournotProfit(model, i, row.sre.actions));
    }
    row.stats = CournotPerturbationStats(model, row.sre.actions, spec, seed + k);
  });
  return rows;
}

ExperimentConfig DefaultExperimentConfig(const std::string& name) {
  const auto& names = ExperimentNames();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ValidationError("unknown experiment '" + name + "'; options: " +
                          list);
  }
  ExperimentConfig config;
  config.name = name;
  config.grid = name.rfind("cournot", 0) == 0 ? MakeGrid(0.0, 20.0, 1.0)
                                               : MakeGrid(0.0, 1.0, 0.01);
  return config;
}

void WriteFiniteCurveCsv(std::ostream& out, const FiniteGame& game,
                         const std::vector<SweepRow>& rows,
                         const PerturbationSpec& spec, std::uint64_t seed,
                         bool costs) {
  const std::size_t n = game.num_players();
  const double sign = costs ? -1.0 : 1.0;
  out << "epsilon";
  for (const char* tag : {"", "_ne"}) {
    for (std::size_t i = 1; i <= n; ++i) {
      const std::string c = "utility_p" + std::to_string(i) + tag;
      out << "," << c << "," << c << "_up," << c << "_down," << c << "_min,"
          << c << "_max";
    }
  }
  out << "\n" << std::setprecision(10);
  // The comparison equilibrium is the worst one at the first grid point.
  PerturbationStats ne;
  bool have_ne = false;
  if (!rows.empty()) {
    const int w = WorstEquilibrium(game, rows.front().equilibria);
    if (w >= 0) {
      ne = FinitePerturbationStats(game, rows.front().equilibria[w].profile,
                                   spec, seed);
      have_ne = true;
    }
  }
  auto emit = [&](const PerturbationStats* s) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s == nullptr) {
        out << ",,,,,";
        continue;
      }
      const double lo = sign > 0 ? s->min[i] : -s->max[i];
      const double hi = sign > 0 ? s->max[i] : -s->min[i];
      out << "," << sign * s->nominal[i] << "," << sign * s->mean[i] + s->std[i]
          << "," << sign * s->mean[i] - s->std[i] << "," << lo << "," << hi;
    }
  };
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out << rows[k].epsilon;
    const int w = WorstEquilibrium(game, rows[k].equilibria);
    if (w >= 0) {
      const PerturbationStats s = FinitePerturbationStats(
          game, rows[k].equilibria[w].profile, spec, seed + k);
      emit(&s);
    } else {
      emit(nullptr);
    }
    emit(have_ne ? &ne : nullptr);
    out << "\n";
  }
}

void WriteFiniteStatsCsv(std::ostream& out, const FiniteGame& game,
                         const std::vector<SweepRow>& rows,
                         const PerturbationSpec& spec, std::uint64_t seed) {
  std::ostringstream base;
  WriteSweepCsv(base, game, rows);
  std::istringstream lines(base.str());
  std::string line;
  std::getline(lines, line);
  const std::size_t n = game.num_players();
  out << line;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string p = "_p" + std::to_string(i);
    out << ",utility" << p << ",mean" << p << ",std" << p << ",min" << p
        << ",max" << p;
  }
  out << "\n" << std::setprecision(10);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (const Equilibrium& eq : rows[k].equilibria) {
      std::getline(lines, line);
      const PerturbationStats s =
          FinitePerturbationStats(game, eq.profile, spec, seed + k);
      out << line;
      for (std::size_t i = 0; i < n; ++i) {
        out << "," << s.nominal[i] << "," << s.mean[i] << "," << s.std[i]
            << "," << s.min[i] << "," << s.max[i];
      }
      out << "\n";
    }
  }
}

void WriteCournotCsv(std::ostream& out, const CournotModel& model,
                     const std::vector<CournotSweepRow>& rows) {
  const std::size_t n = model.num_firms();
  const std::size_t T = model.num_markets();
  out << "epsilon";
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string c = "payoff_firm_" + std::to_string(i);
    out << "," << c << "," << c << "_up," << c << "_down," << c << "_min,"
        << c << "_max";
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t t = 1; t <= T; ++t) {
      out << ",out_firm_" << i << "_market_" << t;
    }
  }
  for (const char* c : {"lambda_firm_", "value_firm_", "gap_firm_"}) {
    for (std::size_t i = 1; i <= n; ++i) out << "," << c << i;
  }
  out << "\n" << std::setprecision(10);
  for (const CournotSweepRow& row : rows) {
    out << row.epsilon;
    for (std::size_t i = 0; i < n; ++i) {
      out << "," << row.profits[i] << "," << row.stats.mean[i] + row.stats.std[i]
          << "," << row.stats.mean[i] - row.stats.std[i] << ","
          << row.stats.min[i] << "," << row.stats.max[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < T; ++t) out << "," << row.sre.actions[i][t];
    }
    for (double v : row.sre.lambdas) out << "," << v;
    for (double v : row.sre.values) out << "," << v;
    for (double v : row.sre.gaps) out << "," << v;
    out << "\n";
  }
}

namespace {

std::string Fmt(double x, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

void RunFinite(const ExperimentConfig& config, const FiniteGame& game,
               bool costs, ExperimentReport* report) {
  const std::filesystem::path dir(config.out_dir);
  const MetricGame mg(game);
  const AmbiguitySpec base = AmbiguitySpec::Uniform(0.0);
  SweepOptions sweep;
  sweep.solve.seed = config.seed;
  sweep.threads = config.threads;
  const std::vector<SweepRow> rows =
      SweepEpsilon(mg, base, config.grid, sweep);
  std::ostringstream summary;
  summary << "experiment " << config.name << ": " << rows.size()
          << " grid points\n";

  const auto sweep_path = dir / (config.name + "_sweep.csv");
  WriteFile(sweep_path, [&](std::ostream& out) {
    WriteFiniteStatsCsv(out, game, rows, config.perturbation, config.seed);
  });
  const auto curve_path = dir / (config.name + "_curves.csv");
  WriteFile(curve_path, [&](std::ostream& out) {
    WriteFiniteCurveCsv(out, game, rows, config.perturbation, config.seed,
                        costs);
  });
  report->files.push_back(sweep_path.string());
  report->files.push_back(curve_path.string());

  // Headline comparison: worst equilibrium against the eps = 0 one.
  const double sign = costs ? -1.0 : 1.0;
  const char* unit = costs ? "cost" : "payoff";
  int w0 = rows.empty() ? -1 : WorstEquilibrium(game, rows.front().equilibria);
  std::vector<double> ne_values;
  if (w0 >= 0) {
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      ne_values.push_back(
          PayoffAt(game, i, rows.front().equilibria[w0].profile));
    }
  }
  std::size_t empty = 0;
  for (const SweepRow& r : rows) empty += r.equilibria.empty();
  summary << "grid points without a verified equilibrium: " << empty << "\n";
  summary << "worst equilibrium " << unit << " per player (eps: values)\n";
  for (const SweepRow& r : rows) {
    const int w = WorstEquilibrium(game, r.equilibria);
    if (w < 0) continue;
    summary << "  " << Fmt(r.epsilon) << ":";
    bool all_better = !ne_values.empty();
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const double v = PayoffAt(game, i, r.equilibria[w].profile);
      summary << " " << Fmt(sign * v);
      if (!ne_values.empty() && !(v > ne_values[i] + 1e-9)) all_better = false;
    }
    if (all_better) summary << "  (all players better than eps = 0)";
    summary << "\n";
  }

  const std::vector<Threshold> thresholds =
      PureSetThresholds(mg, base, config.grid);
  summary << "pure equilibrium set changes: " << thresholds.size() << "\n";
  for (const Threshold& t : thresholds) {
    summary << "  grid " << Fmt(t.grid_value) << ", bisected "
            << Fmt(t.bisected, 8) << ": " << FormatPureSet(game, t.before)
            << " -> " << FormatPureSet(game, t.after) << "\n";
  }
  report->summary += summary.str();
}

void RunCongestionBenchmark(const ExperimentConfig& config,
                            ExperimentReport* report) {
  const FiniteGame small = CongestionGame(false);
  SweepOptions sweep;
  sweep.solve.seed = config.seed;
  sweep.threads = config.threads;
  const std::vector<SweepRow> rows = SweepEpsilon(
      MetricGame(small), AmbiguitySpec::Uniform(0.0), config.grid, sweep);
  const auto path =
      std::filesystem::path(config.out_dir) / "congestion_small_curves.csv";
  WriteFile(path, [&](std::ostream& out) {
    WriteFiniteCurveCsv(out, small, rows, config.perturbation, config.seed,
                        true);
  });
  report->files.push_back(path.string());
  const Security s0 = SecurityStrategy(small, 0);
  const Security s1 = SecurityStrategy(small, 1);
  const StrategyProfile sec{s0.strategy, s1.strategy};
  report->summary += "no-bridge security profile (" +
                     Fmt(s0.strategy.probs()[0]) + ", " +
                     Fmt(s0.strategy.probs()[1]) + ") with social cost " +
                     Fmt(-SocialPayoff(small, sec), 8) + "\n";
}

void RunCournot(const ExperimentConfig& config, const CournotModel& model,
                ExperimentReport* report) {
  ConcaveOptions options;
  options.seed = config.seed;
  const std::vector<CournotSweepRow> rows = SweepCournot(
      model, config.grid, options, config.perturbation, config.seed,
      config.threads);
  const auto path =
      std::filesystem::path(config.out_dir) / (config.name + "_curves.csv");
  WriteFile(path, [&](std::ostream& out) { WriteCournotCsv(out, model, rows); });
  report->files.push_back(path.string());

  std::ostringstream summary;
  summary << "experiment " << config.name << ": " << rows.size()
          << " grid points\n";
  const std::size_t n = model.num_firms();
  bool monotone = true;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[k].sre.actions[i].sum() >
          rows[k - 1].sre.actions[i].sum() + 1e-6) {
        monotone = false;
      }
    }
  }
  summary << "total production nonincreasing in eps: "
          << (monotone ? "yes" : "no") << "\n";
  // Initial range where every firm earns more than at eps = 0.
  double above_until = rows.empty() ? 0.0 : rows.front().epsilon;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(rows[k].profits[i] > rows.front().profits[i])) all = false;
    }
    if (!all) break;
    above_until = rows[k].epsilon;
  }
  summary << "all firms above the Nash profit for eps in (0, "
          << Fmt(above_until) << "]\n";
  summary << "eps: profits | total production\n";
  for (const CournotSweepRow& r : rows) {
    summary << "  " << Fmt(r.epsilon) << ":";
    for (double p : r.profits) summary << " " << Fmt(p);
    summary << " |";
    for (const auto& a : r.sre.actions) summary << " " << Fmt(a.sum());
    summary << "\n";
  }
  report->summary += summary.str();
}

void RunDeviationCurve(const ExperimentConfig& config,
                       ExperimentReport* report) {
  const DeviationCurve curve = PedestrianDeviationCurve();
  const auto path =
      std::filesystem::path(config.out_dir) / "pedestrian_deviation.csv";
  WriteFile(path, [&](std::ostream& out) {
    out << "f,utility_ne,utility_sre,utility_security\n"
        << std::setprecision(12);
    for (std::size_t k = 0; k < curve.f.size(); ++k) {
      out << curve.f[k] << "," << curve.nash[k] << "," << curve.sre[k] << ","
          << curve.security[k] << "\n";
    }
  });
  report->files.push_back(path.string());
  auto line = [](const DeviationLine& l) {
    return Fmt(l.intercept) + (l.slope < 0 ? " - " : " + ") +
           Fmt(std::abs(l.slope)) + " f";
  };
  report->summary += "deviation curve: NE " + line(curve.nash_line) +
                     ", SRE " + line(curve.sre_line) + ", security " +
                     line(curve.security_line) + "; crossing at f = " +
                     Fmt(curve.crossing, 10) + "\n";
}

}  // namespace

ExperimentReport RunExperiment(const ExperimentConfig& config) {
  DefaultExperimentConfig(config.name);  // validates the name
  if (config.grid.empty()) throw ValidationError("empty epsilon grid");
  std::filesystem::create_directories(config.out_dir);
  ExperimentReport report;
  if (config.name == "pedestrian") {
    RunFinite(config, PedestrianGame(), false, &report);
    if (config.deviation_curve) RunDeviationCurve(config, &report);
  } else if (config.name == "inspection") {
    RunFinite(config, InspectionGame(), false, &report);
  } else if (config.name == "free_rider") {
    RunFinite(config, FreeRiderGame(), false, &report);
  } else if (config.name == "congestion") {
    RunFinite(config, CongestionGame(true), true, &report);
    RunCongestionBenchmark(config, &report);
  } else if (config.name == "cournot_symmetric") {
    RunCournot(config, CournotSymmetricModel(), &report);
  } else {
    RunCournot(config, CournotAsymmetricModel(), &report);
  }
  const auto path = std::filesystem::path(config.out_dir) / "summary.txt";
  WriteFile(path, [&](std::ostream& out) { out << report.summary; });
  report.files.push_back(path.string());
  return report;
}

}  // namespace sre
