#pragma once

// Shared helpers for the test suites: random game generators and oracles
// that do not go through the library's LP or belief machinery.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "efsolve/efsolve.hpp"

namespace efsolve::testing {

using Rng = std::mt19937_64;

inline int Uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// ---- Fourier-Motzkin oracle ------------------------------------------------

// coeffs . x >= rhs, or > rhs when strict. Variables are free.
struct FmRow {
  std::vector<Rational> coeffs;
  Rational rhs;
  bool strict = false;
};

// Decides feasibility by eliminating variables one at a time.
inline bool FmFeasible(std::vector<FmRow> rows, int num_vars) {
  for (int v = 0; v < num_vars; ++v) {
    std::vector<FmRow> pos, neg, out;
    for (FmRow& r : rows) {
      if (r.coeffs[v] > 0) {
        pos.push_back(r);
      } else if (r.coeffs[v] < 0) {
        neg.push_back(r);
      } else {
        out.push_back(r);
      }
    }
    for (const FmRow& a : pos) {
      for (const FmRow& b : neg) {
        // a: ca x_v + ... >= ra (ca > 0); b: cb x_v + ... >= rb (cb < 0).
        Rational wa = -b.coeffs[v], wb = a.coeffs[v];
        FmRow c;
        c.coeffs.resize(num_vars);
        for (int j = 0; j < num_vars; ++j) {
          c.coeffs[j] = wa * a.coeffs[j] + wb * b.coeffs[j];
        }
        c.coeffs[v] = 0;
        c.rhs = wa * a.rhs + wb * b.rhs;
        c.strict = a.strict || b.strict;
        out.push_back(std::move(c));
      }
    }
    // Drop exact duplicates to keep the system small.
    std::sort(out.begin(), out.end(), [](const FmRow& x, const FmRow& y) {
      if (x.strict != y.strict) return x.strict < y.strict;
      if (x.rhs != y.rhs) return x.rhs < y.rhs;
      return std::lexicographical_compare(x.coeffs.begin(), x.coeffs.end(),
                                          y.coeffs.begin(), y.coeffs.end());
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const FmRow& x, const FmRow& y) {
                            return x.strict == y.strict && x.rhs == y.rhs &&
                                   x.coeffs == y.coeffs;
                          }),
              out.end());
    rows = std::move(out);
  }
  for (const FmRow& r : rows) {
    if (r.strict ? !(0 > r.rhs) : !(0 >= r.rhs)) return false;
  }
  return true;
}

// Is there a mixture over `pool` that dominates s against the columns?
// Strict: better against every column. Weak: never worse, better somewhere.
inline bool FmDominated(const RMatrix& u, int s,
                        const std::vector<int>& all_pool,
                        const std::vector<int>& all_columns, bool strict) {
  if (all_pool.empty() || all_columns.empty()) return false;
  // Payoff-equivalent strategies and duplicate columns add nothing to the
  // system; dropping them keeps the elimination small.
  auto restricted = [&](int r, const std::vector<int>& cols) {
    std::vector<Rational> row;
    for (int t : cols) row.push_back(u[r][t]);
    return row;
  };
  std::vector<int> columns;
  {
    std::vector<std::vector<Rational>> seen;
    for (int t : all_columns) {
      std::vector<Rational> col = {u[s][t]};
      for (int r : all_pool) col.push_back(u[r][t]);
      if (std::find(seen.begin(), seen.end(), col) == seen.end()) {
        seen.push_back(col);
        columns.push_back(t);
      }
    }
  }
  std::vector<int> pool;
  {
    std::vector<std::vector<Rational>> seen;
    for (int r : all_pool) {
      auto row = restricted(r, columns);
      if (std::find(seen.begin(), seen.end(), row) == seen.end()) {
        seen.push_back(row);
        pool.push_back(r);
      }
    }
  }
  const int n = static_cast<int>(pool.size());
  std::vector<FmRow> rows;
  for (int j = 0; j < n; ++j) {  // sigma_j >= 0
    FmRow r{std::vector<Rational>(n, 0), 0, false};
    r.coeffs[j] = 1;
    rows.push_back(r);
  }
  FmRow sum_lo{std::vector<Rational>(n, 1), 1, false};
  FmRow sum_hi{std::vector<Rational>(n, -1), -1, false};
  rows.push_back(sum_lo);
  rows.push_back(sum_hi);
  FmRow total{std::vector<Rational>(n, 0), 0, true};
  for (int t : columns) {
    FmRow r{std::vector<Rational>(n, 0), 0, strict};
    for (int j = 0; j < n; ++j) {
      r.coeffs[j] = u[pool[j]][t] - u[s][t];
      total.coeffs[j] += r.coeffs[j];
    }
    rows.push_back(r);
  }
  if (!strict) rows.push_back(total);
  return FmFeasible(rows, n);
}

// ---- independent normal form --------------------------------------------

// Payoffs of a pure profile computed by walking the tree directly.
inline std::vector<Rational> WalkPayoffs(const GameTree& tree,
                                         const GameModel& model,
                                         const std::vector<int>& strategies) {
  std::vector<Rational> total(tree.num_players(), 0);
  // (node, probability) frontier.
  std::vector<std::pair<int, Rational>> frontier = {{tree.root(), 1}};
  while (!frontier.empty()) {
    auto [n, prob] = frontier.back();
    frontier.pop_back();
    const Node& node = tree.node(n);
    if (node.kind == NodeKind::kTerminal) {
      for (int p = 0; p < tree.num_players(); ++p) {
        total[p] += prob * node.payoffs[p];
      }
      continue;
    }
    if (node.kind == NodeKind::kChance) {
      for (const Edge& e : node.edges) {
        Rational q = node.chance_probs[e.profile[0]];
        if (q > 0) frontier.emplace_back(e.child, prob * q);
      }
      continue;
    }
    std::vector<std::string> chosen;
    for (int mover : node.movers) {
      int info = tree.InfoSetOf(mover, n);
      int local = model.LocalIndex(info);
      int action = model.Action(mover, strategies[mover], local);
      chosen.push_back(tree.info_set(info).actions[action]);
    }
    for (const Edge& e : node.edges) {
      bool match = true;
      for (std::size_t m = 0; m < node.movers.size(); ++m) {
        if (node.actions[m][e.profile[m]] != chosen[m]) match = false;
      }
      if (match) frontier.emplace_back(e.child, prob);
    }
  }
  return total;
}

// u[p][s][t] over p's opponent profiles t in the model's encoding.
inline std::vector<RMatrix> OracleNormalForm(const GameModel& model) {
  const GameTree& tree = model.tree();
  std::vector<RMatrix> u(tree.num_players());
  for (int p = 0; p < tree.num_players(); ++p) {
    u[p].assign(model.NumStrategies(p),
                std::vector<Rational>(model.NumOpponentProfiles(p)));
    for (int s = 0; s < model.NumStrategies(p); ++s) {
      for (int t = 0; t < model.NumOpponentProfiles(p); ++t) {
        std::vector<int> full = model.DecodeOpponents(p, t);
        full[p] = s;
        u[p][s][t] = WalkPayoffs(tree, model, full)[p];
      }
    }
  }
  return u;
}

// Opponent profiles of p whose members all lie in the given sets.
inline std::vector<int> SurvivingColumns(const GameModel& model, int p,
                                         const std::vector<Mask>& sets) {
  std::vector<int> cols;
  for (int t = 0; t < model.NumOpponentProfiles(p); ++t) {
    std::vector<int> members = model.DecodeOpponents(p, t);
    bool ok = true;
    for (int q = 0; q < model.num_players(); ++q) {
      if (q != p && !sets[q][members[q]]) ok = false;
    }
    if (ok) cols.push_back(t);
  }
  return cols;
}

// Iterated simultaneous elimination of (strictly or weakly) dominated
// strategies; result[k-1] are the survivors after k rounds.
inline std::vector<std::vector<Mask>> OracleIteratedDominance(
    const GameModel& model, int levels, bool strict) {
  std::vector<RMatrix> u = OracleNormalForm(model);
  std::vector<Mask> sets;
  for (int p = 0; p < model.num_players(); ++p) {
    sets.emplace_back(model.NumStrategies(p), true);
  }
  std::vector<std::vector<Mask>> result;
  for (int k = 0; k < levels; ++k) {
    std::vector<Mask> next = sets;
    for (int p = 0; p < model.num_players(); ++p) {
      std::vector<int> cols = SurvivingColumns(model, p, sets);
      std::vector<int> pool = MaskToIndices(sets[p]);
      for (int s : pool) {
        if (FmDominated(u[p], s, pool, cols, strict)) next[p][s] = false;
      }
    }
    sets = next;
    result.push_back(sets);
  }
  return result;
}

// ---- random games --------------------------------------------------------

inline Rational RandomPayoff(Rng& rng, int lo = -3, int hi = 3) {
  return Rational(Uniform(rng, lo, hi));
}

// Two-player simultaneous-move matrix game.
inline GameTree RandomMatrixGame(Rng& rng, int rows, int cols, int lo = -3,
                                 int hi = 3) {
  GameTree::Builder b({"1", "2"});
  std::vector<std::pair<std::vector<std::string>, std::string>> edges;
  std::vector<std::pair<std::string, std::vector<Rational>>> terminals;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::string z = "z" + std::to_string(r) + "_" + std::to_string(c);
      edges.push_back({{"r" + std::to_string(r), "c" + std::to_string(c)}, z});
      terminals.push_back(
          {z, {RandomPayoff(rng, lo, hi), RandomPayoff(rng, lo, hi)}});
    }
  }
  b.Decision("root", {"1", "2"}, edges);
  for (auto& [id, pay] : terminals) b.Terminal(id, pay);
  return b.Root("root").Build();
}

struct TreeOptions {
  int max_depth = 3;
  int max_branch = 3;
  bool chance = false;
  bool simultaneous = false;
  bool imperfect = false;  // merge eligible nodes into shared info sets
  int players = 2;
};

// Random tree; every decision node has 2..max_branch actions. With
// `imperfect`, pairs of same-player nodes with equal action counts are merged
// into one information set whenever perfect recall survives.
inline GameTree RandomTree(Rng& rng, const TreeOptions& opt) {
  std::vector<std::string> players;
  for (int p = 0; p < opt.players; ++p) players.push_back(std::to_string(p + 1));

  struct Spec {
    std::string id;
    int kind;  // 0 terminal, 1 decision, 2 chance, 3 simultaneous
    int mover = 0;
    int width = 0;
    std::vector<std::string> children;
  };
  std::vector<Spec> specs;
  int counter = 0;
  std::function<std::string(int)> make = [&](int depth) -> std::string {
    std::string id = "n" + std::to_string(counter++);
    std::size_t index = specs.size();
    specs.push_back({id, 0});
    bool leaf = depth >= opt.max_depth || (depth > 0 && Uniform(rng, 0, 3) == 0);
    if (leaf) return id;
    int kind = 1;
    int roll = Uniform(rng, 0, 9);
    if (opt.chance && roll == 0 && depth > 0) kind = 2;
    if (opt.simultaneous && roll == 1) kind = 3;
    specs[index].kind = kind;
    specs[index].mover = Uniform(rng, 0, opt.players - 1);
    specs[index].width = Uniform(rng, 2, kind == 3 ? 2 : opt.max_branch);
    int children = kind == 3 ? specs[index].width * specs[index].width
                             : specs[index].width;
    for (int c = 0; c < children; ++c) {
      std::string child = make(depth + 1);
      specs[index].children.push_back(child);
    }
    return id;
  };
  std::string root = make(0);

  auto build = [&](const std::vector<std::vector<std::string>>& merged) {
    GameTree::Builder b(players);
    std::size_t z = 0;
    for (const Spec& s : specs) {
      if (s.kind == 0) {
        std::vector<Rational> pay;
        for (int p = 0; p < opt.players; ++p) {
          // Deterministic per leaf so rebuilding reproduces the game.
          pay.push_back(Rational(static_cast<int>((z * 7 + p * 13 + s.id.size() +
                                                   counter) % 7) - 3));
        }
        ++z;
        b.Terminal(s.id, pay);
      } else if (s.kind == 1) {
        std::vector<std::pair<std::vector<std::string>, std::string>> edges;
        for (int a = 0; a < s.width; ++a) {
          edges.push_back({{"a" + std::to_string(a)}, s.children[a]});
        }
        b.Decision(s.id, {players[s.mover]}, edges);
      } else if (s.kind == 2) {
        std::vector<std::tuple<std::string, Rational, std::string>> edges;
        for (int a = 0; a < s.width; ++a) {
          edges.emplace_back("c" + std::to_string(a), Rational(1, s.width),
                             s.children[a]);
        }
        b.Chance(s.id, edges);
      } else {
        std::vector<std::pair<std::vector<std::string>, std::string>> edges;
        int other = (s.mover + 1) % opt.players;
        for (int a = 0; a < s.width; ++a) {
          for (int c = 0; c < s.width; ++c) {
            edges.push_back({{"a" + std::to_string(a), "b" + std::to_string(c)},
                             s.children[a * s.width + c]});
          }
        }
        b.Decision(s.id, {players[s.mover], players[other]}, edges);
      }
    }
    for (std::size_t i = 0; i < merged.size(); ++i) {
      const Spec* first = nullptr;
      for (const Spec& s : specs) {
        if (s.id == merged[i][0]) first = &s;
      }
      b.InfoSet("h" + std::to_string(i), players[first->mover], merged[i]);
    }
    return b.Root(root).Build();
  };

  // Random payoffs replace the deterministic placeholders below.
  std::vector<std::vector<std::string>> merged;
  if (opt.imperfect) {
    std::vector<const Spec*> plain;
    for (const Spec& s : specs) {
      if (s.kind == 1) plain.push_back(&s);
    }
    for (int attempt = 0; attempt < 3 && plain.size() >= 2; ++attempt) {
      const Spec* a = plain[Uniform(rng, 0, plain.size() - 1)];
      const Spec* c = plain[Uniform(rng, 0, plain.size() - 1)];
      if (a == c || a->mover != c->mover || a->width != c->width) continue;
      bool used = false;
      for (const auto& m : merged) {
        for (const auto& id : m) used = used || id == a->id || id == c->id;
      }
      if (used) continue;
      auto trial = merged;
      trial.push_back({a->id, c->id});
      GameTree candidate = build(trial);
      if (candidate.validation().ok()) merged = std::move(trial);
    }
  }
  GameTree shape = build(merged);
  // Re-draw terminal payoffs at random.
  Json doc = shape.ToJson();
  for (Json& node : doc["nodes"]) {
    if (node["kind"] == "terminal") {
      for (auto& [player, value] : node["payoffs"].items()) {
        value = FormatRational(RandomPayoff(rng));
      }
    }
  }
  return GameTree::FromJson(doc);
}

// Full-support normal-form belief with random positive integer weights.
inline Belief RandomFullSupportBelief(Rng& rng, int size) {
  std::vector<std::pair<int, Rational>> w;
  for (int t = 0; t < size; ++t) w.emplace_back(t, Rational(Uniform(rng, 1, 4)));
  return MakeBelief(w);
}

// Belief system obtained from a normal-form belief by conditioning on the
// reach set of every own information set.
inline BeliefSystem ConditionedSystem(const GameModel& model, int p,
                                      const Belief& belief) {
  BeliefSystem system{p, {}};
  for (int info : model.InfoSetsOf(p)) {
    const Mask& reach = model.OpponentReach(p, info);
    std::vector<std::pair<int, Rational>> w;
    for (const auto& [t, q] : belief.mass) {
      if (reach[t]) w.emplace_back(t, q);
    }
    system.at.push_back(MakeBelief(w));
  }
  return system;
}

// Terminal nodes reached with positive probability by some profile in the
// product of the given strategy sets.
inline std::vector<bool> Outcomes(const GameModel& model,
                                  const std::vector<Mask>& sets) {
  std::vector<bool> reached(model.tree().num_nodes(), false);
  for (std::int64_t x = 0; x < model.NumProfiles(); ++x) {
    std::vector<int> profile = model.DecodeProfile(x);
    bool inside = true;
    for (int p = 0; p < model.num_players(); ++p) {
      if (!sets[p][profile[p]]) inside = false;
    }
    if (!inside) continue;
    for (const auto& [z, q] : model.Outcome(x)) {
      if (q > 0) reached[z] = true;
    }
  }
  return reached;
}

inline bool Subset(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
  }
  return true;
}

inline bool IsSubset(const Mask& a, const Mask& b) { return Subset(a, b); }

}  // namespace efsolve::testing
