#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>
#include <thread>

#include "sre/equilibrium.h"

namespace sre {

std::vector<SweepRow> SweepEpsilon(const MetricGame& game,
                                   const AmbiguitySpec& spec,
                                   const std::vector<double>& grid,
                                   const SweepOptions& options) {
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw ValidationError("epsilon grid must be strictly increasing");
    }
  }
  std::vector<SweepRow> rows(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      rows[k].epsilon = grid[k];
      try {
        const AmbiguitySpec row_spec = spec.WithEpsilon(grid[k]);
        if (game.num_players() == 2) {
          SolveOptions solve = options.solve;
          solve.seed += k;
          rows[k].equilibria = SolveSre2Player(game, row_spec, solve);
        } else {
          FixedPointOptions fp = options.fixed_point;
          fp.seed += k;
          rows[k].equilibria.push_back(SolveSreNPlayer(game, row_spec, fp));
        }
      } catch (const Error& e) {
        // A grid point without a verified equilibrium stays empty.
        if (e.kind() != ErrorKind::kNoEquilibrium &&
            e.kind() != ErrorKind::kNumerical) {
          errors[k] = std::current_exception();
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads > 0
                         ? static_cast<unsigned>(options.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(grid.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

double FindThreshold(const std::function<bool(double)>& predicate, double lo,
                     double hi, double tol, int probes) {
  if (!(lo < hi)) throw ValidationError("threshold bracket must have lo < hi");
  const bool at_lo = predicate(lo);
  const bool at_hi = predicate(hi);
  if (at_lo == at_hi) {
    throw ValidationError("predicate does not change across the bracket");
  }
  // Evenly spaced probes must show a single flip.
  bool prev = at_lo;
  int flips = 0;
  for (int k = 1; k <= probes; ++k) {
    const double x = lo + (hi - lo) * k / (probes + 1);
    const bool v = predicate(x);
    if (v != prev) ++flips;
    prev = v;
  }
  if (prev != at_hi) ++flips;
  if (flips != 1) {
    throw ValidationError("predicate is not monotone on the bracket");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (predicate(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void WriteSweepCsv(std::ostream& out, const FiniteGame& game,
                   const std::vector<SweepRow>& rows) {
  const std::size_t num = game.num_players();
  out << "epsilon,eq_index,method";
  for (std::size_t i = 0; i < num; ++i) {
    for (const auto& label : game.action_labels(i)) {
      out << ",p" << i + 1 << "_" << label;
    }
  }
  for (const char* field : {"lambda", "value", "gap"}) {
    for (std::size_t i = 0; i < num; ++i) out << "," << field << "_" << i + 1;
  }
  out << "\n";
  out << std::setprecision(10);
  for (const SweepRow& row : rows) {
    for (std::size_t k = 0; k < row.equilibria.size(); ++k) {
      const Equilibrium& e = row.equilibria[k];
      out << row.epsilon << "," << k << "," << ToString(e.method);
      for (const auto& p : e.profile) {
        for (std::size_t a = 0; a < p.size(); ++a) out << "," << p[a];
      }
      for (const auto* field : {&e.lambdas, &e.values, &e.gaps}) {
        for (double v : *field) out << "," << v;
      }
      out << "\n";
    }
  }
}

}  // namespace sre
