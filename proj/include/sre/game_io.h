#ifndef SRE_GAME_IO_H
#define SRE_GAME_IO_H

#include <optional>
#include <string>

#include "json.hpp"
#include "sre/game.h"

namespace sre {

// Contents of a game file. `epsilon` is only set when the document has one;
// the caller picks the default otherwise.
struct GameDocument {
  FiniteGame game;
  std::vector<ActionMetric> metrics;
  double s = 1.0;
  std::optional<double> epsilon;

  MetricGame ToMetricGame() const { return MetricGame(game, metrics); }
  AmbiguitySpec Spec(double default_epsilon) const;
};

// Schema:
//   players  int
//   actions  [[label, ...], ...]          one array per player
//   payoffs  [tensor, ...]                nested arrays, last player innermost
//   metric   "total_variation" | [[[d]]]  optional, one matrix per player
//   s        number                        optional, default 1
//   epsilon  number                        optional
GameDocument ParseGame(const nlohmann::json& doc);
GameDocument LoadGameFile(const std::string& path);

nlohmann::json GameToJson(const FiniteGame& game,
                          const std::vector<ActionMetric>& metrics,
                          double s = 1.0);

nlohmann::json ReadJsonFile(const std::string& path);

}  // namespace sre

#endif  // SRE_GAME_IO_H
