// Command-line front end: solve, sweep, verify, reproduce, oracle.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sre/concave.h"
#include "sre/cournot.h"
#include "sre/equilibrium.h"
#include "sre/experiments.h"
#include "sre/game_io.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNoEquilibrium = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

enum class FileKind { kFinite, kCournot, kQuadratic };

FileKind Classify(const json& doc) {
  if (doc.is_object() && doc.contains("alpha")) return FileKind::kCournot;
  if (doc.is_object() && doc.contains("players") &&
      doc["players"].is_array()) {
    return FileKind::kQuadratic;
  }
  return FileKind::kFinite;
}

std::vector<double> ParseNumbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw sre::ValidationError("bad number '" + item + "'");
    }
  }
  return out;
}

// "0.5,0.5;1,0" -> one vector per player.
std::vector<std::vector<double>> ParseProfile(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) out.push_back(ParseNumbers(part));
  if (out.empty()) throw sre::ValidationError("empty profile");
  return out;
}

json StrategiesJson(const sre::FiniteGame& game,
                    const sre::StrategyProfile& profile) {
  json players = json::array();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    json p = json::object();
    for (std::size_t a = 0; a < profile[i].size(); ++a) {
      p[game.action_labels(i)[a]] = profile[i].probs()[a];
    }
    players.push_back(p);
  }
  return players;
}

json EquilibriumJson(const sre::FiniteGame& game, const sre::Equilibrium& eq) {
  return {{"epsilon", eq.epsilon},
          {"method", sre::ToString(eq.method)},
          {"strategies", StrategiesJson(game, eq.profile)},
          {"lambdas", eq.lambdas},
          {"values", eq.values},
          {"gaps", eq.gaps}};
}

void PrintEquilibria(std::ostream& out, const sre::FiniteGame& game,
                     const std::vector<sre::Equilibrium>& eqs,
                     const std::string& format) {
  if (format == "json") {
    json doc = json::array();
    for (const auto& eq : eqs) doc.push_back(EquilibriumJson(game, eq));
    out << doc.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    sre::WriteSweepCsv(out, game,
                       {sre::SweepRow{eqs.empty() ? 0.0 : eqs[0].epsilon, eqs}});
    return;
  }
  out << std::setprecision(8);
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    const auto& eq = eqs[k];
    out << "equilibrium " << k << " (" << sre::ToString(eq.method)
        << ", eps " << eq.epsilon << ")\n";
    for (std::size_t i = 0; i < eq.profile.size(); ++i) {
      out << "  player " << i << ":";
      for (std::size_t a = 0; a < eq.profile[i].size(); ++a) {
        out << " " << game.action_labels(i)[a] << "="
            << eq.profile[i].probs()[a];
      }
      out << "  lambda " << eq.lambdas[i] << "  value " << eq.values[i]
          << "  gap " << eq.gaps[i] << "\n";
    }
  }
}

void PrintPureSre(std::ostream& out, const sre::PureSre& sre,
                  const std::string& format) {
  if (format == "json") {
    json actions = json::array();
    for (const auto& a : sre.actions) {
      actions.push_back(std::vector<double>(a.data(), a.data() + a.size()));
    }
    out << json{{"epsilon", sre.epsilon},
                {"actions", actions},
                {"lambdas", sre.lambdas},
                {"values", sre.values},
                {"gaps", sre.gaps},
                {"iterations", sre.iterations}}
               .dump(2)
        << "\n";
    return;
  }
  out << std::setprecision(10);
  if (format == "csv") {
    out << "player,lambda,value,gap,actions\n";
    for (std::size_t i = 0; i < sre.actions.size(); ++i) {
      out << i << "," << sre.lambdas[i] << "," << sre.values[i] << ","
          << sre.gaps[i];
      for (Eigen::Index t = 0; t < sre.actions[i].size(); ++t) {
        out << "," << sre.actions[i][t];
      }
      out << "\n";
    }
    return;
  }
  out << "pure equilibrium at eps " << sre.epsilon << " after "
      << sre.iterations << " proximal iterations\n";
  for (std::size_t i = 0; i < sre.actions.size(); ++i) {
    out << "  player " << i << ": action [" << sre.actions[i].transpose()
        << "]  lambda " << sre.lambdas[i] << "  value " << sre.values[i]
        << "  gap " << sre.gaps[i] << "\n";
  }
}

// Writes to --out when given, otherwise to stdout.
template <typename F>
void Emit(const std::string& path, F body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw sre::ValidationError("cannot write " + path);
  body(out);
}

sre::QuadraticGame LoadConcave(const json& doc, FileKind kind) {
  return kind == FileKind::kCournot
             ? sre::CournotGame(sre::ParseCournotModel(doc))
             : sre::ParseQuadraticGame(doc);
}

struct Flags {
  std::string file;
  double eps = std::nan("");
  std::string grid;
  std::uint64_t seed = 1;
  int starts = 8;
  double delta = -1.0;
  std::string out;
  std::string format = "text";
  int threads = 0;
  bool deviation_curve = false;
  std::string profile;
  int resolution = 20;
  std::string experiment;
};

int RunSolve(const Flags& f) {
  const json doc = sre::ReadJsonFile(f.file);
  const FileKind kind = Classify(doc);
  if (kind != FileKind::kFinite) {
    const sre::QuadraticGame game = LoadConcave(doc, kind);
    sre::ConcaveOptions options;
    options.seed = f.seed;
    if (f.delta > 0) options.verify_delta = f.delta;
    const sre::PureSre sre =
        sre::SolveSreConcave(game, std::isnan(f.eps) ? 0.0 : f.eps, options);
    Emit(f.out, [&](std::ostream& out) { PrintPureSre(out, sre, f.format); });
    return kExitOk;
  }
  const sre::GameDocument gd = sre::ParseGame(doc);
  const sre::MetricGame game = gd.ToMetricGame();
  const sre::AmbiguitySpec spec =
      std::isnan(f.eps) ? gd.Spec(0.0) : gd.Spec(0.0).WithEpsilon(f.eps);
  std::vector<sre::Equilibrium> eqs;
  if (game.num_players() == 2) {
    sre::SolveOptions options;
    options.n_starts = f.starts;
    options.seed = f.seed;
    if (f.delta > 0) options.verify_delta = f.delta;
    eqs = sre::SolveSre2Player(game, spec, options);
  } else {
    sre::FixedPointOptions options;
    options.seed = f.seed;
    if (f.delta > 0) options.verify_delta = f.delta;
    eqs.push_back(sre::SolveSreNPlayer(game, spec, options));
  }
  Emit(f.out,
       [&](std::ostream& out) { PrintEquilibria(out, gd.game, eqs, f.format); });
  return eqs.empty() ? kExitNoEquilibrium : kExitOk;
}

int RunSweep(const Flags& f) {
  if (f.grid.empty()) throw sre::ValidationError("--eps-grid is required");
  const std::vector<double> grid = sre::ParseGrid(f.grid);
  const json doc = sre::ReadJsonFile(f.file);
  const FileKind kind = Classify(doc);
  sre::PerturbationSpec perturbation;
  if (kind == FileKind::kCournot) {
    const sre::CournotModel model = sre::ParseCournotModel(doc);
    sre::ConcaveOptions options;
    options.seed = f.seed;
    const auto rows = sre::SweepCournot(model, grid, options, perturbation,
                                        f.seed, f.threads);
    Emit(f.out,
         [&](std::ostream& out) { sre::WriteCournotCsv(out, model, rows); });
    return kExitOk;
  }
  if (kind == FileKind::kQuadratic) {
    throw sre::ValidationError(
        "sweep supports finite games and Cournot models; use solve per eps");
  }
  const sre::GameDocument gd = sre::ParseGame(doc);
  const sre::MetricGame game = gd.ToMetricGame();
  const double diameter = game.MaxDiameter();
  if (grid.front() < 0.0 || grid.back() > diameter + 1e-12) {
    throw sre::ValidationError("grid must lie in [0, diameter]");
  }
  sre::SweepOptions options;
  options.solve.n_starts = f.starts;
  options.solve.seed = f.seed;
  options.fixed_point.seed = f.seed;
  options.threads = f.threads;
  const auto rows = sre::SweepEpsilon(game, gd.Spec(0.0), grid, options);
  std::size_t found = 0;
  for (const auto& r : rows) found += r.equilibria.size();
  if (f.format == "json") {
    Emit(f.out, [&](std::ostream& out) {
      json doc_out = json::array();
      for (const auto& r : rows) {
        for (const auto& eq : r.equilibria) {
          doc_out.push_back(EquilibriumJson(gd.game, eq));
        }
      }
      out << doc_out.dump(2) << "\n";
    });
  } else {
    Emit(f.out, [&](std::ostream& out) {
      sre::WriteFiniteStatsCsv(out, gd.game, rows, perturbation, f.seed);
    });
  }
  return found > 0 ? kExitOk : kExitNoEquilibrium;
}

int RunVerify(const Flags& f) {
  if (f.profile.empty()) throw sre::ValidationError("--profile is required");
  const json doc = sre::ReadJsonFile(f.file);
  const FileKind kind = Classify(doc);
  const auto values = ParseProfile(f.profile);
  const double eps = std::isnan(f.eps) ? 0.0 : f.eps;
  std::cout << std::setprecision(10);
  if (kind != FileKind::kFinite) {
    const sre::QuadraticGame game = LoadConcave(doc, kind);
    sre::ActionProfile a;
    for (const auto& v : values) {
      a.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
    }
    const double delta = f.delta > 0 ? f.delta : 1e-4;
    const sre::ConcaveReport r =
        sre::VerifySreConcave(game, a, eps, delta, 4, f.seed);
    for (std::size_t i = 0; i < r.gaps.size(); ++i) {
      std::cout << "player " << i << ": value " << r.values[i] << "  best "
                << r.best_values[i] << "  gap " << r.gaps[i] << "\n";
    }
    std::cout << (r.pass ? "verified" : "not an equilibrium") << " at delta "
              << delta << "\n";
    return r.pass ? kExitOk : kExitNoEquilibrium;
  }
  const sre::GameDocument gd = sre::ParseGame(doc);
  sre::StrategyProfile profile;
  for (const auto& v : values) profile.emplace_back(v);
  const double delta = f.delta > 0 ? f.delta : 1e-6;
  const sre::AmbiguitySpec spec =
      std::isnan(f.eps) ? gd.Spec(0.0) : gd.Spec(0.0).WithEpsilon(f.eps);
  const sre::VerifyReport r =
      sre::VerifySre(gd.ToMetricGame(), profile, spec, delta);
  for (std::size_t i = 0; i < r.gaps.size(); ++i) {
    std::cout << "player " << i << ": value " << r.values[i] << "  best "
              << r.best_values[i] << "  lambda " << r.lambdas[i] << "  gap "
              << r.gaps[i] << "\n";
  }
  std::cout << (r.pass ? "verified" : "not an equilibrium") << " at delta "
            << delta << "\n";
  return r.pass ? kExitOk : kExitNoEquilibrium;
}

int RunReproduce(const Flags& f) {
  sre::ExperimentConfig config = sre::DefaultExperimentConfig(f.experiment);
  if (!f.grid.empty()) config.grid = sre::ParseGrid(f.grid);
  config.seed = f.seed;
  config.threads = f.threads;
  config.deviation_curve = f.deviation_curve;
  config.out_dir = f.out.empty() ? "results/" + f.experiment : f.out;
  const sre::ExperimentReport report = sre::RunExperiment(config);
  std::cout << report.summary;
  for (const auto& file : report.files) std::cout << "wrote " << file << "\n";
  return kExitOk;
}

int RunOracle(const Flags& f) {
  const sre::GameDocument gd = sre::LoadGameFile(f.file);
  const sre::MetricGame game = gd.ToMetricGame();
  const sre::AmbiguitySpec spec =
      std::isnan(f.eps) ? gd.Spec(0.0) : gd.Spec(0.0).WithEpsilon(f.eps);
  const double delta = f.delta > 0 ? f.delta : 1e-6;
  const auto pure = sre::PureEquilibria(game, spec, delta);
  std::cout << "pure equilibria: " << sre::FormatPureSet(gd.game, pure) << "\n";
  const auto grid =
      sre::OracleGridEquilibria(game, spec, f.resolution, delta);
  std::cout << "grid profiles (resolution " << f.resolution
            << ") passing at delta " << delta << ": " << grid.size() << "\n";
  std::cout << std::setprecision(6);
  for (const auto& profile : grid) {
    std::cout << " ";
    for (std::size_t i = 0; i < profile.size(); ++i) {
      std::cout << (i ? " | " : " ") << profile[i].probs().transpose();
    }
    std::cout << "\n";
  }
  return pure.empty() && grid.empty() ? kExitNoEquilibrium : kExitOk;
}

int ExitCodeFor(const sre::Error& e) {
  switch (e.kind()) {
    case sre::ErrorKind::kNoEquilibrium:
      return kExitNoEquilibrium;
    case sre::ErrorKind::kNumerical:
      return kExitNumerical;
    default:
      return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategically robust equilibrium toolkit"};
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::string> formats{"text", "csv", "json"};

  auto* solve = app.add_subcommand("solve", "compute equilibria of a game file");
  solve->add_option("file", f.file, "game, Cournot or quadratic game JSON")
      ->required();
  solve->add_option("--eps", f.eps, "ambiguity radius");
  solve->add_option("--seed", f.seed, "random seed");
  solve->add_option("--starts", f.starts, "random Lemke starts");
  solve->add_option("--delta", f.delta, "verification tolerance");
  solve->add_option("--out", f.out, "output file");
  solve->add_option("--format", f.format)->check(CLI::IsMember(formats));

  auto* sweep = app.add_subcommand("sweep", "solve along an epsilon grid");
  sweep->add_option("file", f.file)->required();
  sweep->add_option("--eps-grid", f.grid, "lo:hi:step")->required();
  sweep->add_option("--seed", f.seed);
  sweep->add_option("--starts", f.starts);
  sweep->add_option("--threads", f.threads, "worker threads, 0 = all cores");
  sweep->add_option("--out", f.out, "CSV output file");
  sweep->add_option("--format", f.format)->check(CLI::IsMember(formats));

  auto* verify = app.add_subcommand("verify", "check a candidate profile");
  verify->add_option("file", f.file)->required();
  verify->add_option("--profile", f.profile,
                     "per-player vectors, e.g. \"0,1,0;1,0\"")
      ->required();
  verify->add_option("--eps", f.eps);
  verify->add_option("--delta", f.delta);
  verify->add_option("--seed", f.seed);

  auto* reproduce =
      app.add_subcommand("reproduce", "run one of the built-in experiments");
  reproduce->add_option("experiment", f.experiment)->required();
  reproduce->add_option("--out", f.out, "output directory");
  reproduce->add_option("--eps-grid", f.grid, "override the grid");
  reproduce->add_option("--seed", f.seed);
  reproduce->add_option("--threads", f.threads);
  reproduce->add_flag("--deviation-curve", f.deviation_curve,
                      "also write the pedestrian deviation curve");

  auto* oracle =
      app.add_subcommand("oracle", "brute-force equilibria on a simplex grid");
  oracle->add_option("file", f.file)->required();
  oracle->add_option("--eps", f.eps);
  oracle->add_option("--delta", f.delta);
  oracle->add_option("--resolution", f.resolution, "grid denominator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve) return RunSolve(f);
    if (*sweep) return RunSweep(f);
    if (*verify) return RunVerify(f);
    if (*reproduce) return RunReproduce(f);
    return RunOracle(f);
  } catch (const sre::Error& e) {
    std::cerr << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
