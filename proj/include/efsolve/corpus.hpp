#pragma once

// Built-in example games with their reference solution tables.
//
// Game files, expectation tables and observation data live under corpus/ in
// the source tree and are compiled into the binary (see CMakeLists.txt):
//   games/<id>.json         game in the JSON game format
//   expected/<id>.json      per-concept solution rows, cycles, choice shares
//   observations/<id>.csv   observed choice frequencies
//
// Expectation rows use the table notation of render.hpp, one row per level
// and one cell per player.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "efsolve/concepts.hpp"
#include "efsolve/corpus_data.hpp"
#include "efsolve/game.hpp"
#include "efsolve/model.hpp"
#include "efsolve/rational.hpp"
#include "efsolve/render.hpp"

namespace efsolve {

class UnknownGameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::optional<std::string_view> CorpusFile(std::string_view name) {
  for (const auto& [path, content] : corpus_data::kFiles) {
    if (path == name) return content;
  }
  return std::nullopt;
}

// Sorted ids of all corpus games.
inline std::vector<std::string> CorpusIds() {
  std::vector<std::string> ids;
  const std::string_view prefix = "games/", suffix = ".json";
  for (const auto& [path, content] : corpus_data::kFiles) {
    if (path.starts_with(prefix) && path.ends_with(suffix)) {
      ids.emplace_back(path.substr(prefix.size(),
                                   path.size() - prefix.size() - suffix.size()));
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline bool IsCorpusGame(const std::string& id) {
  return CorpusFile("games/" + id + ".json").has_value();
}

inline GameTree LoadCorpusGame(const std::string& id) {
  auto text = CorpusFile("games/" + id + ".json");
  if (!text) throw UnknownGameError("unknown game '" + id + "'");
  return GameTree::FromJsonText(std::string(*text));
}

// Expectation document, or null when the game has none.
inline Json CorpusExpectations(const std::string& id) {
  if (!IsCorpusGame(id)) throw UnknownGameError("unknown game '" + id + "'");
  auto text = CorpusFile("expected/" + id + ".json");
  if (!text) return Json(nullptr);
  return Json::parse(*text);
}

inline std::string CorpusObservations(const std::string& file) {
  auto text = CorpusFile("observations/" + file);
  if (!text) throw UnknownGameError("unknown observation file '" + file + "'");
  return std::string(*text);
}

struct CorpusEntry {
  std::string id;
  std::string name;
  std::string caption;
  bool has_expectations = false;
};

inline std::vector<CorpusEntry> CorpusList() {
  std::vector<CorpusEntry> entries;
  for (const std::string& id : CorpusIds()) {
    GameTree tree = LoadCorpusGame(id);
    entries.push_back({id, tree.name(), tree.caption(),
                       CorpusFile("expected/" + id + ".json").has_value()});
  }
  return entries;
}

// Writes every corpus file below `dir`, keeping the games/, expected/ and
// observations/ layout. Returns the number of files written.
inline int ExportCorpus(const std::filesystem::path& dir) {
  int count = 0;
  for (const auto& [path, content] : corpus_data::kFiles) {
    std::filesystem::path target = dir / std::filesystem::path(path);
    std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + target.string());
    ++count;
  }
  return count;
}

// Concept and parameters named by one expectation column:
//   {"concept": id, "beliefs": "uniform", "delta": "uniform"|"unrestricted",
//    "variant": "standard"|"modified", ...}
inline ConceptSpec SpecFromColumn(const GameModel& model, const Json& column) {
  ConceptSpec spec;
  spec.id = column.at("concept").get<std::string>();
  FindConcept(spec.id);
  if (column.contains("beliefs") &&
      column["beliefs"].get<std::string>() != "uniform") {
    throw std::invalid_argument("expectation beliefs must be uniform");
  }
  if (column.contains("delta")) {
    spec.delta_name = column["delta"].get<std::string>();
    if (spec.delta_name == "uniform") {
      spec.delta = UniformDelta(model);
    } else if (spec.delta_name == "unrestricted") {
      spec.delta = UnrestrictedDelta(model);
    } else {
      throw std::invalid_argument("unknown Delta name '" + spec.delta_name + "'");
    }
  }
  if (column.contains("variant")) {
    spec.variant = ParseVariant(column["variant"].get<std::string>());
  }
  return spec;
}

// Short description of a column, e.g. "strong-level-k (uniform)".
inline std::string ColumnName(const Json& column) {
  std::string name = column.at("concept").get<std::string>();
  if (column.contains("beliefs")) {
    name += " (" + column["beliefs"].get<std::string>() + ")";
  }
  if (column.contains("variant")) {
    name += " (" + column.value("delta", std::string("custom")) + ", " +
            column["variant"].get<std::string>() + ")";
  }
  return name;
}

// expected[k-1][p] for one column.
inline std::vector<std::vector<Mask>> ExpectedSets(const GameModel& model,
                                                   const Json& column) {
  std::vector<std::vector<Mask>> levels;
  for (const Json& row : column.at("rows")) {
    if (static_cast<int>(row.size()) != model.num_players()) {
      throw std::invalid_argument("expectation row has the wrong player count");
    }
    std::vector<Mask> sets;
    for (int p = 0; p < model.num_players(); ++p) {
      sets.push_back(ParseStrategySet(model, p, row[p].get<std::string>()));
    }
    levels.push_back(std::move(sets));
  }
  return levels;
}

// One disagreement between a computed and an expected cell.
struct CellMismatch {
  std::string column;
  int level = 0;
  std::string player;
  std::string expected;
  std::string computed;
};

// Compares a solution with an expectation column level by level.
inline std::vector<CellMismatch> CompareColumn(const GameModel& model,
                                               const Json& column,
                                               const LevelSolution& solution) {
  std::vector<CellMismatch> out;
  auto expected = ExpectedSets(model, column);
  for (std::size_t k = 0; k < expected.size(); ++k) {
    for (int p = 0; p < model.num_players(); ++p) {
      const Mask& want = expected[k][p];
      bool have_level = static_cast<int>(k) < solution.num_levels();
      if (have_level && solution.levels[k][p] == want) continue;
      out.push_back({ColumnName(column), static_cast<int>(k + 1),
                     model.tree().player_id(p),
                     FormatStrategySet(model, p, want, true),
                     have_level ? FormatStrategySet(model, p,
                                                    solution.levels[k][p], true)
                                : "(not computed)"});
    }
  }
  return out;
}

// ---- parameterized family -------------------------------------------------

// Battle-of-the-sexes with an outside option: player 1 chooses Out (payoff
// `outside` to player 1, `outside_other` to player 2) or In, after which both
// play the coordination game with actions B and S. Coordinating on B pays
// (high, low), on S pays (low, high), miscoordination pays (0, 0).
inline GameTree MakeBosOutsideOption(const Rational& outside,
                                     const Rational& high = 5,
                                     const Rational& low = 1,
                                     const Rational& outside_other = 0) {
  const Rational zero = 0;
  return GameTree::Builder({"1", "2"})
      .Name("BoS with outside option " + FormatRational(outside))
      .Decision("root", {"1"}, {{{"Out"}, "out"}, {{"In"}, "sub"}})
      .Decision("sub", {"1", "2"},
                {{{"B", "B"}, "bb"},
                 {{"B", "S"}, "bs"},
                 {{"S", "B"}, "sb"},
                 {{"S", "S"}, "ss"}})
      .Terminal("out", {outside, outside_other})
      .Terminal("bb", {high, low})
      .Terminal("bs", {zero, zero})
      .Terminal("sb", {zero, zero})
      .Terminal("ss", {low, high})
      .Root("root")
      .Build();
}

}  // namespace efsolve
