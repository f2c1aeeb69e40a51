#include "sre/game_io.h"

#include <fstream>
#include <sstream>

#include "sre/error.h"

namespace sre {
namespace {

using nlohmann::json;

// Flattens a nested array whose shape must equal `dims` (depth = dims.size()).
void FlattenTensor(const json& node, const std::vector<std::size_t>& dims,
                   std::size_t depth, const std::string& where,
                   std::vector<double>* out) {
  if (depth == dims.size()) {
    if (!node.is_number()) {
      throw ValidationError(where + " must be a number");
    }
    out->push_back(node.get<double>());
    return;
  }
  if (!node.is_array() || node.size() != dims[depth]) {
    std::ostringstream os;
    os << where << " must be an array of length " << dims[depth];
    throw ValidationError(os.str());
  }
  for (std::size_t k = 0; k < node.size(); ++k) {
    FlattenTensor(node[k], dims, depth + 1,
                  where + "[" + std::to_string(k) + "]", out);
  }
}

json NestTensor(const std::vector<double>& flat,
                const std::vector<std::size_t>& dims, std::size_t depth,
                std::size_t* cursor) {
  if (depth == dims.size()) return flat[(*cursor)++];
  json arr = json::array();
  for (std::size_t k = 0; k < dims[depth]; ++k) {
    arr.push_back(NestTensor(flat, dims, depth + 1, cursor));
  }
  return arr;
}

ActionMetric ParseMetric(const json& node, std::size_t n,
                         const std::string& where) {
  if (!node.is_array() || node.size() != n) {
    throw ValidationError(where + " must be a " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix");
  }
  Eigen::MatrixXd d(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    if (!node[a].is_array() || node[a].size() != n) {
      throw ValidationError(where + " row " + std::to_string(a) +
                            " has the wrong length");
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (!node[a][b].is_number()) {
        throw ValidationError(where + " entry must be a number");
      }
      d(a, b) = node[a][b].get<double>();
    }
  }
  try {
    return ActionMetric(std::move(d));
  } catch (const Error& e) {
    std::string what = e.what();
    const std::string prefix = "validation error: ";
    if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
    throw ValidationError(where + ": " + what);
  }
}

}  // namespace

AmbiguitySpec GameDocument::Spec(double default_epsilon) const {
  return AmbiguitySpec::Uniform(epsilon.value_or(default_epsilon), s);
}

GameDocument ParseGame(const json& doc) {
  if (!doc.is_object()) throw ValidationError("game document must be an object");
  for (const char* key : {"players", "actions", "payoffs"}) {
    if (!doc.contains(key)) {
      throw ValidationError(std::string("missing field '") + key + "'");
    }
  }
  if (!doc["players"].is_number_integer() || doc["players"].get<int>() < 1) {
    throw ValidationError("'players' must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(doc["players"].get<int>());

  const json& actions_node = doc["actions"];
  if (!actions_node.is_array() || actions_node.size() != n) {
    throw ValidationError("'actions' must hold one array per player");
  }
  std::vector<std::vector<std::string>> actions(n);
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < n; ++i) {
    if (!actions_node[i].is_array() || actions_node[i].empty()) {
      throw ValidationError("actions of player " + std::to_string(i) +
                            " must be a non-empty array");
    }
    for (const auto& label : actions_node[i]) {
      if (!label.is_string()) {
        throw ValidationError("action labels must be strings");
      }
      actions[i].push_back(label.get<std::string>());
    }
    dims.push_back(actions[i].size());
  }

  const json& payoff_node = doc["payoffs"];
  if (!payoff_node.is_array() || payoff_node.size() != n) {
    throw ValidationError("'payoffs' must hold one tensor per player");
  }
  std::vector<std::vector<double>> payoffs(n);
  for (std::size_t i = 0; i < n; ++i) {
    FlattenTensor(payoff_node[i], dims, 0,
                  "payoffs[" + std::to_string(i) + "]", &payoffs[i]);
  }

  GameDocument out{FiniteGame(std::move(actions), std::move(payoffs)), {}, 1.0,
                   std::nullopt};

  if (!doc.contains("metric") || (doc["metric"].is_string() &&
                                  doc["metric"] == "total_variation")) {
    for (std::size_t i = 0; i < n; ++i) {
      out.metrics.push_back(ActionMetric::TotalVariation(dims[i]));
    }
  } else if (doc["metric"].is_array() && doc["metric"].size() == n) {
    for (std::size_t i = 0; i < n; ++i) {
      out.metrics.push_back(ParseMetric(doc["metric"][i], dims[i],
                                        "metric[" + std::to_string(i) + "]"));
    }
  } else {
    throw ValidationError(
        "'metric' must be \"total_variation\" or one matrix per player");
  }

  if (doc.contains("s")) {
    if (!doc["s"].is_number() || doc["s"].get<double>() < 1.0) {
      throw ValidationError("'s' must be a number >= 1");
    }
    out.s = doc["s"].get<double>();
  }
  if (doc.contains("epsilon")) {
    if (!doc["epsilon"].is_number() || doc["epsilon"].get<double>() < 0.0) {
      throw ValidationError("'epsilon' must be a number >= 0");
    }
    out.epsilon = doc["epsilon"].get<double>();
  }
  return out;
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

GameDocument LoadGameFile(const std::string& path) {
  return ParseGame(ReadJsonFile(path));
}

json GameToJson(const FiniteGame& game,
                const std::vector<ActionMetric>& metrics, double s) {
  json doc;
  doc["players"] = game.num_players();
  doc["actions"] = json::array();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    doc["actions"].push_back(game.action_labels(i));
  }
  const std::vector<std::size_t> dims = game.Dims();
  doc["payoffs"] = json::array();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    std::size_t cursor = 0;
    doc["payoffs"].push_back(NestTensor(game.payoff_tensor(i), dims, 0, &cursor));
  }
  doc["metric"] = json::array();
  for (const auto& m : metrics) {
    json mat = json::array();
    for (Eigen::Index a = 0; a < m.matrix().rows(); ++a) {
      json row = json::array();
      for (Eigen::Index b = 0; b < m.matrix().cols(); ++b) row.push_back(m(a, b));
      mat.push_back(row);
    }
    doc["metric"].push_back(mat);
  }
  doc["s"] = s;
  return doc;
}

}  // namespace sre
