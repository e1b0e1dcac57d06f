#pragma once

// Observed choices and their consistency with predicted strategy sets.
//
// Observation files are CSV with the header `role,path,weight`:
//   role    player id
//   path    the actions the role took at its own information sets, in play
//           order, joined by "/" (e.g. "In/B"); a path may stop early when
//           the role's later information sets were not reached
//   weight  exact rational (count or frequency)
// A leading comment "# weights: frequency" declares that the weights of
// each role sum to 1; "# weights: count" (the default) allows any positive
// weights. Other lines starting with "#" are ignored.
//
// Responder data is read as conditional on reaching the responder's
// information set: the share of a role is the weight of its consistent paths
// divided by the total weight of that role.

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "efsolve/concepts.hpp"
#include "efsolve/model.hpp"
#include "efsolve/rational.hpp"
#include "efsolve/render.hpp"
#include "efsolve/solvers.hpp"

namespace efsolve {

class ObservationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Observation {
  int role = 0;
  std::vector<std::string> path;
  // (information set, action index) visited by the path.
  std::vector<std::pair<int, int>> moves;
  Rational weight;
};

struct ObservationSet {
  std::string game;
  bool frequencies = false;
  std::vector<Observation> records;
};

namespace experiments_internal {

inline std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(Trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(Trim(current));
  return parts;
}

// Maps a path onto the role's information sets: each action is taken at the
// unique own information set whose own history equals the moves so far.
inline std::vector<std::pair<int, int>> ResolvePath(
    const GameModel& model, int p, const std::vector<std::string>& path,
    const std::string& where) {
  std::vector<std::pair<int, int>> moves;
  for (const std::string& label : path) {
    std::vector<std::pair<int, int>> candidates;
    for (int info : model.InfoSetsOf(p)) {
      if (model.OwnHistory(info) != moves) continue;
      const auto& actions = model.tree().info_set(info).actions;
      for (std::size_t a = 0; a < actions.size(); ++a) {
        if (actions[a] == label) {
          candidates.emplace_back(info, static_cast<int>(a));
        }
      }
    }
    if (candidates.empty()) {
      throw ObservationError(where + ": unknown action '" + label +
                             "' for role '" + model.tree().player_id(p) + "'");
    }
    if (candidates.size() > 1) {
      throw ObservationError(where + ": action '" + label +
                             "' is ambiguous for role '" +
                             model.tree().player_id(p) + "'");
    }
    moves.push_back(candidates.front());
  }
  return moves;
}

}  // namespace experiments_internal

inline ObservationSet LoadObservations(const GameModel& model,
                                       const std::string& text,
                                       const std::string& game = "") {
  using namespace experiments_internal;
  ObservationSet set;
  set.game = game;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      auto colon = trimmed.find(':');
      if (!header && colon != std::string::npos &&
          Trim(trimmed.substr(1, colon - 1)) == "weights") {
        std::string kind = Trim(trimmed.substr(colon + 1));
        if (kind == "frequency") {
          set.frequencies = true;
        } else if (kind != "count") {
          throw ObservationError("line " + std::to_string(line_no) +
                                 ": unknown weight kind '" + kind + "'");
        }
      }
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    std::vector<std::string> fields = Split(trimmed, ',');
    if (!header) {
      if (fields != std::vector<std::string>{"role", "path", "weight"}) {
        throw ObservationError(where + ": expected header 'role,path,weight'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ObservationError(where + ": expected 3 fields");
    }
    Observation obs;
    try {
      obs.role = model.tree().PlayerIndex(fields[0]);
    } catch (const std::exception&) {
      throw ObservationError(where + ": unknown role '" + fields[0] + "'");
    }
    obs.path = Split(fields[1], '/');
    obs.moves = ResolvePath(model, obs.role, obs.path, where);
    try {
      obs.weight = ParseRational(fields[2]);
    } catch (const RationalParseError& e) {
      throw ObservationError(where + ": " + e.what());
    }
    if (obs.weight <= 0) {
      throw ObservationError(where + ": weight must be positive");
    }
    set.records.push_back(std::move(obs));
  }
  if (!header) throw ObservationError("missing header 'role,path,weight'");
  if (set.frequencies) {
    for (int p = 0; p < model.num_players(); ++p) {
      Rational total = 0;
      bool any = false;
      for (const Observation& obs : set.records) {
        if (obs.role == p) {
          total += obs.weight;
          any = true;
        }
      }
      if (any && total != 1) {
        throw ObservationError("frequencies of role '" +
                               model.tree().player_id(p) + "' sum to " +
                               FormatRational(total) + ", not 1");
      }
    }
  }
  return set;
}

inline std::string ObservationsToCsv(const GameModel& model,
                                     const ObservationSet& set) {
  std::ostringstream out;
  out << "# weights: " << (set.frequencies ? "frequency" : "count") << "\n";
  out << "role,path,weight\n";
  for (const Observation& obs : set.records) {
    std::string path;
    for (const std::string& a : obs.path) {
      if (!path.empty()) path += "/";
      path += a;
    }
    out << model.tree().player_id(obs.role) << "," << path << ","
        << FormatRational(obs.weight) << "\n";
  }
  return out.str();
}

// True if some strategy in `predicted` takes every action on the path.
inline bool PathConsistent(const GameModel& model, const Observation& obs,
                           const Mask& predicted) {
  for (int s = 0; s < model.NumStrategies(obs.role); ++s) {
    if (!predicted[s]) continue;
    bool ok = true;
    for (const auto& [info, action] : obs.moves) {
      if (model.Action(obs.role, s, model.LocalIndex(info)) != action) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Weight share of the role's observations consistent with `predicted`, or
// nullopt when the role has no observations.
inline std::optional<Rational> ConsistentShare(const GameModel& model,
                                               const ObservationSet& set,
                                               int role, const Mask& predicted) {
  Rational total = 0, consistent = 0;
  for (const Observation& obs : set.records) {
    if (obs.role != role) continue;
    total += obs.weight;
    if (PathConsistent(model, obs, predicted)) consistent += obs.weight;
  }
  if (total == 0) return std::nullopt;
  return consistent / total;
}

struct ConsistencyColumn {
  std::string concept_id;
  std::string title;
  // shares[k-1][p]
  std::vector<std::vector<std::optional<Rational>>> shares;
};

struct ConsistencyTable {
  std::string game;
  std::vector<ConsistencyColumn> columns;
};

inline ConsistencyColumn Classify(const GameModel& model,
                                  const ObservationSet& set,
                                  const LevelSolution& solution) {
  ConsistencyColumn column{solution.concept_id, ConceptTitle(solution), {}};
  for (int k = 1; k <= solution.num_levels(); ++k) {
    std::vector<std::optional<Rational>> row;
    for (int p = 0; p < model.num_players(); ++p) {
      row.push_back(ConsistentShare(model, set, p, solution.Set(k, p)));
    }
    column.shares.push_back(std::move(row));
  }
  return column;
}

inline ConsistencyTable ClassifyAll(const GameModel& model,
                                    const ObservationSet& set,
                                    const std::vector<LevelSolution>& solutions) {
  ConsistencyTable table{set.game, {}};
  for (const LevelSolution& sol : solutions) {
    table.columns.push_back(Classify(model, set, sol));
  }
  return table;
}

inline std::string RenderConsistencyTable(const GameModel& model,
                                          const ConsistencyTable& table,
                                          int decimals) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"Level"};
  std::size_t levels = 0;
  for (const ConsistencyColumn& col : table.columns) {
    for (int p = 0; p < model.num_players(); ++p) {
      header.push_back(col.title + ": " + model.tree().player_id(p));
    }
    levels = std::max(levels, col.shares.size());
  }
  rows.push_back(header);
  for (std::size_t k = 0; k < levels; ++k) {
    std::vector<std::string> row = {std::to_string(k + 1)};
    for (const ConsistencyColumn& col : table.columns) {
      for (int p = 0; p < model.num_players(); ++p) {
        if (k >= col.shares.size() || !col.shares[k][p]) {
          row.push_back("-");
        } else {
          row.push_back(FormatPercent(*col.shares[k][p], decimals) + "%");
        }
      }
    }
    rows.push_back(row);
  }
  return RenderAligned(rows);
}

inline std::string ConsistencyCsv(const GameModel& model,
                                  const ConsistencyTable& table) {
  std::ostringstream out;
  out << "concept,level,role,share\n";
  for (const ConsistencyColumn& col : table.columns) {
    for (std::size_t k = 0; k < col.shares.size(); ++k) {
      for (int p = 0; p < model.num_players(); ++p) {
        if (!col.shares[k][p]) continue;
        out << col.concept_id << "," << k + 1 << ","
            << CsvField(model.tree().player_id(p)) << ","
            << FormatRational(*col.shares[k][p]) << "\n";
      }
    }
  }
  return out.str();
}

inline Json ConsistencyJson(const GameModel& model,
                            const ConsistencyTable& table, int decimals) {
  Json cols = Json::array();
  for (const ConsistencyColumn& col : table.columns) {
    Json levels = Json::array();
    for (std::size_t k = 0; k < col.shares.size(); ++k) {
      Json roles = Json::array();
      for (int p = 0; p < model.num_players(); ++p) {
        if (!col.shares[k][p]) continue;
        roles.push_back({{"role", model.tree().player_id(p)},
                         {"share", FormatRational(*col.shares[k][p])},
                         {"percent",
                          FormatPercent(*col.shares[k][p], decimals)}});
      }
      levels.push_back({{"level", k + 1}, {"roles", roles}});
    }
    cols.push_back({{"concept", col.concept_id}, {"title", col.title},
                    {"levels", levels}});
  }
  return {{"game", table.game}, {"columns", cols}};
}

}  // namespace efsolve
