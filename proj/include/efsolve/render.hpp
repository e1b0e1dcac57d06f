#pragma once

// Strategy-set notation and solution rendering.
//
// Sets are written the way solution tables print them: "{(O1,*),(C1,c1)}",
// a bare "(In,B)" or "B" for a singleton, "S_1" (or "S1") for the whole
// strategy set of the first player, and "{}" or "∅" for the empty set. A "*"
// component stands for any action at that information set.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "efsolve/concepts.hpp"
#include "efsolve/model.hpp"
#include "efsolve/solvers.hpp"

namespace efsolve {

inline const char kEmptySet[] = "∅";

// "(a,b)" -> {"a","b"}; "a" -> {"a"}.
inline std::vector<std::string> LabelComponents(std::string_view label) {
  std::vector<std::string> parts;
  if (label.size() >= 2 && label.front() == '(' && label.back() == ')') {
    label = label.substr(1, label.size() - 2);
    std::string current;
    for (char c : label) {
      if (c == ',') {
        parts.push_back(current);
        current.clear();
      } else if (c != ' ') {
        current += c;
      }
    }
    parts.push_back(current);
  } else {
    parts.emplace_back(label);
  }
  return parts;
}

inline std::string Trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

inline std::string WholeSetName(const GameModel& model, int p) {
  (void)model;
  return "S_" + std::to_string(p + 1);
}

// Strategies of p matching one pattern such as "(O1,*)" or "B".
inline Mask MatchPattern(const GameModel& model, int p,
                         const std::string& pattern) {
  Mask out(model.NumStrategies(p), false);
  std::vector<std::string> want = LabelComponents(pattern);
  const auto& own = model.InfoSetsOf(p);
  if (want.size() != own.size()) return out;
  for (int s = 0; s < model.NumStrategies(p); ++s) {
    bool ok = true;
    for (std::size_t l = 0; l < own.size() && ok; ++l) {
      const std::string& action =
          model.tree().info_set(own[l]).actions[model.Action(p, s, l)];
      ok = want[l] == "*" || want[l] == action;
    }
    out[s] = ok;
  }
  return out;
}

// Parses a set written in table notation. Throws std::invalid_argument when a
// pattern matches no strategy, so typos cannot silently shrink a set.
inline Mask ParseStrategySet(const GameModel& model, int p,
                             std::string_view cell) {
  std::string text = Trim(cell);
  const int n = model.NumStrategies(p);
  if (text == "{}" || text == kEmptySet) return Mask(n, false);
  if (!text.empty() && text.front() == '{') {
    if (text.back() != '}') {
      throw std::invalid_argument("unbalanced braces in '" + text + "'");
    }
    text = text.substr(1, text.size() - 2);
  }
  // Split at commas outside parentheses.
  std::vector<std::string> items;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      items.push_back(Trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  items.push_back(Trim(current));

  Mask out(n, false);
  const std::string whole = WholeSetName(model, p);
  const std::string compact = "S" + std::to_string(p + 1);
  for (const std::string& item : items) {
    Mask match = MatchPattern(model, p, item);
    if (!AnyTrue(match) && (item == whole || item == compact)) {
      match.assign(n, true);
    }
    if (!AnyTrue(match)) {
      throw std::invalid_argument("'" + item + "' matches no strategy of player '" +
                                  model.tree().player_id(p) + "'");
    }
    for (int s = 0; s < n; ++s) out[s] = out[s] || match[s];
  }
  return out;
}

// Formats a set. With `collapse`, strategies that together cover every action
// at one information set (all else equal) are merged into a "*" pattern, and
// the full set is written S_i.
inline std::string FormatStrategySet(const GameModel& model, int p,
                                     const Mask& set, bool collapse) {
  std::vector<int> members = MaskToIndices(set);
  if (members.empty()) return kEmptySet;
  if (collapse && static_cast<int>(members.size()) == model.NumStrategies(p) &&
      model.NumStrategies(p) > 1) {
    return WholeSetName(model, p);
  }
  const auto& own = model.InfoSetsOf(p);
  // Patterns as action-index vectors, -1 = any.
  std::vector<std::vector<int>> patterns;
  for (int s : members) patterns.push_back(model.StrategyActions(p, s));
  if (collapse && own.size() > 1) {
    for (int l = static_cast<int>(own.size()) - 1; l >= 0; --l) {
      const int width = model.NumActions(own[l]);
      std::map<std::vector<int>, std::vector<int>> groups;  // rest -> actions
      for (const auto& pat : patterns) {
        std::vector<int> rest = pat;
        rest[l] = -2;
        groups[rest].push_back(pat[l]);
      }
      std::vector<std::vector<int>> merged;
      for (const auto& pat : patterns) {
        std::vector<int> rest = pat;
        rest[l] = -2;
        const auto& actions = groups[rest];
        bool full = pat[l] != -1 &&
                    static_cast<int>(actions.size()) == width &&
                    std::find(actions.begin(), actions.end(), -1) ==
                        actions.end();
        if (full) {
          rest[l] = -1;
          if (std::find(merged.begin(), merged.end(), rest) == merged.end()) {
            merged.push_back(rest);
          }
        } else {
          merged.push_back(pat);
        }
      }
      patterns = std::move(merged);
    }
  }
  std::sort(patterns.begin(), patterns.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              // Wildcards sort after concrete actions.
              for (std::size_t i = 0; i < a.size(); ++i) {
                int x = a[i] < 0 ? 1 << 30 : a[i];
                int y = b[i] < 0 ? 1 << 30 : b[i];
                if (x != y) return x < y;
              }
              return false;
            });
  std::string out = "{";
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (i) out += ",";
    if (own.size() != 1) out += "(";
    for (std::size_t l = 0; l < own.size(); ++l) {
      if (l) out += ",";
      out += patterns[i][l] < 0
                 ? "*"
                 : model.tree().info_set(own[l]).actions[patterns[i][l]];
    }
    if (own.size() != 1) out += ")";
  }
  return out + "}";
}

// Display width in code points (all labels are ASCII apart from "∅").
inline std::size_t DisplayWidth(const std::string& text) {
  std::size_t width = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++width;
  }
  return width;
}

inline std::string RenderAligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], DisplayWidth(row[c]));
    }
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c) line += " | ";
      line += rows[r][c];
      if (c + 1 < rows[r].size()) {
        line += std::string(widths[c] - DisplayWidth(rows[r][c]), ' ');
      }
    }
    out << line << "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < widths.size(); ++c) {
        total += widths[c] + (c ? 3 : 0);
      }
      out << std::string(total, '-') << "\n";
    }
  }
  return out.str();
}

inline std::string ConceptTitle(const LevelSolution& solution) {
  std::string title = FindConcept(solution.concept_id).title;
  const Json& params = solution.parameters;
  if (params.contains("beliefs")) {
    title += " (" + params["beliefs"].get<std::string>() + ")";
  }
  if (params.contains("variant")) {
    title += " (" + params["delta"].get<std::string>() + ", " +
             params["variant"].get<std::string>() + ")";
  }
  return title;
}

// Side-by-side table: one row per level, one column per (concept, player).
inline std::string RenderTable(const GameModel& model,
                               const std::vector<LevelSolution>& solutions) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"Level"};
  for (const LevelSolution& sol : solutions) {
    for (int p = 0; p < model.num_players(); ++p) {
      header.push_back(ConceptTitle(sol) + ": " + model.tree().player_id(p));
    }
  }
  rows.push_back(header);
  int levels = 0;
  for (const LevelSolution& sol : solutions) {
    levels = std::max(levels, sol.num_levels());
  }
  for (int k = 1; k <= levels; ++k) {
    std::vector<std::string> row = {std::to_string(k)};
    for (const LevelSolution& sol : solutions) {
      for (int p = 0; p < model.num_players(); ++p) {
        row.push_back(k <= sol.num_levels()
                          ? FormatStrategySet(model, p, sol.Set(k, p), true)
                          : "");
      }
    }
    rows.push_back(row);
  }
  std::string out = RenderAligned(rows);
  for (const LevelSolution& sol : solutions) {
    std::string notes;
    if (sol.cycle && sol.cycle->period > 1) {
      notes += " cycle of period " + std::to_string(sol.cycle->period) +
               " from level " + std::to_string(sol.cycle->start) + ";";
    }
    if (sol.fixed_point) {
      notes += " fixed point at level " + std::to_string(*sol.fixed_point) +
               ";";
    }
    if (!notes.empty()) {
      notes.pop_back();
      out += ConceptTitle(sol) + ":" + notes + "\n";
    }
  }
  return out;
}

inline std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// One row per (concept, level, player); strategies listed in full,
// separated by ";".
inline std::string RenderCsv(const GameModel& model,
                             const std::vector<LevelSolution>& solutions) {
  std::ostringstream out;
  out << "concept,level,player,empty,strategies\n";
  for (const LevelSolution& sol : solutions) {
    for (int k = 1; k <= sol.num_levels(); ++k) {
      for (int p = 0; p < model.num_players(); ++p) {
        std::string list;
        for (int s : MaskToIndices(sol.Set(k, p))) {
          if (!list.empty()) list += ";";
          list += model.StrategyLabel(p, s);
        }
        out << CsvField(sol.concept_id) << "," << k << ","
            << CsvField(model.tree().player_id(p)) << ","
            << (sol.Empty(k, p) ? "true" : "false") << "," << CsvField(list)
            << "\n";
      }
    }
  }
  return out.str();
}

inline std::string RenderJson(const GameModel& model,
                              const std::vector<LevelSolution>& solutions) {
  Json doc = Json::array();
  for (const LevelSolution& sol : solutions) {
    doc.push_back(LevelSolutionToJson(model, sol));
  }
  Json wrapped = {{"game", model.tree().name()}, {"solutions", doc}};
  return wrapped.dump(2) + "\n";
}

}  // namespace efsolve
