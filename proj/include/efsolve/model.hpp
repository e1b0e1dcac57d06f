#pragma once

// Strategic view of a validated game tree.
//
// GameModel enumerates pure strategies in canonical order, indexes opponent
// profiles, and precomputes everything the belief engine needs: which
// opponent profiles reach each information set, payoff weights conditional on
// passing through an information set, the normal form, and the precedence
// relation between information sets.
//
// Canonical strategy order: a player's information sets are listed in the
// order a depth-first walk from the root first meets them (children in
// declaration order); actions follow declaration order; the first
// information set is the most significant digit.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efsolve/game.hpp"
#include "efsolve/rational.hpp"

namespace efsolve {

using Mask = std::vector<bool>;
using RMatrix = std::vector<std::vector<Rational>>;

// Raised when an enumeration would exceed the configured cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an operation needs structure the game lacks (e.g. backward
// concepts without a precedence order, ranks with imperfect information).
class UnsupportedGameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelLimits {
  std::int64_t max_strategies = 1000000;  // per player
  std::int64_t max_profiles = 1000000;    // full pure-strategy profiles
};

inline int CountTrue(const Mask& mask) {
  return static_cast<int>(std::count(mask.begin(), mask.end(), true));
}

inline bool AnyTrue(const Mask& mask) {
  return std::find(mask.begin(), mask.end(), true) != mask.end();
}

inline Mask Intersect(const Mask& a, const Mask& b) {
  Mask out(a.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

inline std::vector<int> MaskToIndices(const Mask& mask) {
  std::vector<int> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

inline Mask IndicesToMask(const std::vector<int>& indices, int size) {
  Mask mask(size, false);
  for (int i : indices) mask.at(i) = true;
  return mask;
}

class GameModel {
 public:
  explicit GameModel(GameTree tree, ModelLimits limits = {});

  const GameTree& tree() const { return tree_; }
  int num_players() const { return tree_.num_players(); }

  // ---- information sets ------------------------------------------------
  // Information sets of player p in canonical order (global indices).
  const std::vector<int>& InfoSetsOf(int p) const { return own_sets_.at(p); }
  // Position of information set I within its owner's canonical list.
  int LocalIndex(int info_set) const { return local_index_.at(info_set); }
  int Owner(int info_set) const { return tree_.info_set(info_set).player; }
  int NumActions(int info_set) const {
    return static_cast<int>(tree_.info_set(info_set).actions.size());
  }

  // ---- strategies ------------------------------------------------------
  int NumStrategies(int p) const {
    return static_cast<int>(strategies_.at(p).size());
  }
  // Action index chosen by strategy s of player p at their k-th info set.
  int Action(int p, int s, int local) const { return strategies_[p][s][local]; }
  const std::vector<int>& StrategyActions(int p, int s) const {
    return strategies_.at(p).at(s);
  }
  int StrategyIndex(int p, const std::vector<int>& actions) const;
  std::string StrategyLabel(int p, int s) const;
  // Accepts the label produced by StrategyLabel.
  int ParseStrategy(int p, const std::string& label) const;

  // ---- profiles --------------------------------------------------------
  std::int64_t NumProfiles() const { return num_profiles_; }
  // Opponent profiles of p: mixed radix over the other players in order.
  int NumOpponentProfiles(int p) const { return num_opp_.at(p); }
  // Strategy of each player (entry p is -1) for opponent profile t of p.
  std::vector<int> DecodeOpponents(int p, int t) const;
  int EncodeOpponents(int p, const std::vector<int>& strategies) const;
  std::int64_t FullProfile(int p, int s, int t) const;
  std::int64_t EncodeProfile(const std::vector<int>& strategies) const;
  std::vector<int> DecodeProfile(std::int64_t index) const;
  std::string OpponentLabel(int p, int t) const;
  std::vector<std::string> OpponentLabels(int p, int t) const;
  int ParseOpponents(int p, const std::vector<std::string>& labels) const;
  // Opponent-profile mask formed by a product of per-player strategy sets.
  Mask OpponentProduct(int p, const std::vector<Mask>& sets) const;

  // ---- reach -------------------------------------------------------------
  // Opponent profiles t such that (s, t) reaches I for some s of p.
  const Mask& OpponentReach(int p, int info_set) const {
    return opp_reach_[p][info_set];
  }
  // Own strategies s such that (s, t) reaches I for some opponent profile t.
  const Mask& OwnReach(int p, int info_set) const {
    return own_reach_[p][info_set];
  }
  bool ProfileReaches(std::int64_t profile, int info_set) const {
    return profile_reach_[profile][info_set];
  }
  // Existential reach for a partial profile (-1 entries are free). Chance
  // moves are free as well, restricted to positive-probability actions.
  bool Reaches(const std::vector<int>& partial, int info_set) const;

  // Terminal distribution of a full pure profile.
  const std::vector<std::pair<int, Rational>>& Outcome(
      std::int64_t profile) const {
    return outcomes_.at(profile);
  }

  // ---- payoffs -----------------------------------------------------------
  // Normal form: expected payoff of player p for (s, t).
  const RMatrix& NormalForm(int p) const { return normal_form_.at(p); }
  // Payoff mass through I: sum over terminals z below I of P(z | s, t) u(z).
  // Rows are owner strategies, columns owner's opponent profiles.
  const RMatrix& Weights(int info_set) const { return weights_.at(info_set); }
  // Probability that (s, t) reaches I.
  const RMatrix& ReachProbability(int info_set) const {
    return reach_prob_.at(info_set);
  }

  // ---- structure -----------------------------------------------------------
  // Owner's information sets strictly before I, with the action taken there
  // on the way to I (shared by all nodes of I under perfect recall).
  const std::vector<std::pair<int, int>>& OwnHistory(int info_set) const {
    return own_history_.at(info_set);
  }
  // Immediate own predecessor of I, or -1.
  int OwnParent(int info_set) const {
    const auto& h = own_history_.at(info_set);
    return h.empty() ? -1 : h.back().first;
  }
  // Strategies of the owner that agree with s before I (I-replacements).
  std::vector<int> Replacements(int s, int info_set) const;
  // s with its choices before I redirected towards I.
  int ReachModify(int s, int info_set) const;

  // Weak precedence: some node of I is an ancestor-or-self of a node of J.
  bool Precedes(int i, int j) const { return precedes_[i][j]; }
  // Empty when information sets are partially ordered by strict precedence.
  const std::string& PrecedenceProblem() const { return precedence_problem_; }
  void RequirePrecedence() const {
    if (!precedence_problem_.empty()) {
      throw UnsupportedGameError(precedence_problem_);
    }
  }
  // Player j's information sets weakly following information set I.
  const std::vector<int>& FollowingSets(int j, int info_set) const {
    return following_[info_set][j];
  }
  // Continuation key of s_j from I: the actions at FollowingSets(j, I).
  std::vector<int> ContinuationKey(int j, int s, int info_set) const;
  // [X_{j|I}]: strategies whose continuation from I matches some member of
  // X. All of S_j when X is empty or j has no information set after I.
  Mask Bracket(int j, const Mask& x, int info_set) const;

 private:
  void EnumerateStrategies(const ModelLimits& limits);
  void Traverse(std::int64_t profile, const std::vector<int>& strategies);

  GameTree tree_;
  std::vector<std::vector<int>> own_sets_;
  std::vector<int> local_index_;
  std::vector<std::vector<std::vector<int>>> strategies_;
  std::vector<std::vector<std::int64_t>> strategy_stride_;
  std::int64_t num_profiles_ = 1;
  std::vector<int> num_opp_;
  std::vector<std::vector<std::pair<int, Rational>>> outcomes_;
  std::vector<std::vector<bool>> profile_reach_;
  std::vector<std::vector<Mask>> opp_reach_;
  std::vector<std::vector<Mask>> own_reach_;
  std::vector<RMatrix> normal_form_;
  std::vector<RMatrix> weights_;
  std::vector<RMatrix> reach_prob_;
  std::vector<std::vector<std::pair<int, int>>> own_history_;
  std::vector<std::vector<bool>> precedes_;
  std::string precedence_problem_;
  std::vector<std::vector<std::vector<int>>> following_;
};

// ---------------------------------------------------------------------------
// Implementation
// ---------------------------------------------------------------------------

inline GameModel::GameModel(GameTree tree, ModelLimits limits)
    : tree_(std::move(tree)) {
  tree_.RequireValid();
  const int n_players = tree_.num_players();
  const int n_sets = tree_.num_info_sets();

  // Canonical information-set order: depth-first, children in declared order.
  own_sets_.assign(n_players, {});
  local_index_.assign(n_sets, -1);
  std::vector<int> stack = {tree_.root()};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    const Node& nd = tree_.node(n);
    if (nd.kind == NodeKind::kDecision) {
      for (std::size_t m = 0; m < nd.movers.size(); ++m) {
        int info = tree_.InfoSetAt(n, static_cast<int>(m));
        if (local_index_[info] < 0) {
          local_index_[info] = static_cast<int>(own_sets_[nd.movers[m]].size());
          own_sets_[nd.movers[m]].push_back(info);
        }
      }
    }
    for (auto it = nd.edges.rbegin(); it != nd.edges.rend(); ++it) {
      stack.push_back(it->child);
    }
  }

  EnumerateStrategies(limits);

  // Own history of every information set (perfect recall makes it unique).
  own_history_.assign(n_sets, {});
  for (int i = 0; i < n_sets; ++i) {
    const InfoSet& info = tree_.info_set(i);
    int n = info.nodes[0];
    std::vector<std::pair<int, int>> hist;
    for (int cur = n; tree_.node(cur).parent >= 0;
         cur = tree_.node(cur).parent) {
      const Node& par = tree_.node(tree_.node(cur).parent);
      for (std::size_t m = 0; m < par.movers.size(); ++m) {
        if (par.movers[m] != info.player) continue;
        int set = tree_.InfoSetAt(tree_.node(cur).parent, static_cast<int>(m));
        const std::string& label =
            par.actions[m][par.edges[tree_.node(cur).parent_edge].profile[m]];
        const auto& acts = tree_.info_set(set).actions;
        int a = static_cast<int>(std::find(acts.begin(), acts.end(), label) -
                                 acts.begin());
        hist.emplace_back(set, a);
      }
    }
    std::reverse(hist.begin(), hist.end());
    own_history_[i] = std::move(hist);
  }

  // Precedence between information sets.
  precedes_.assign(n_sets, std::vector<bool>(n_sets, false));
  std::vector<std::vector<bool>> strictly(n_sets,
                                          std::vector<bool>(n_sets, false));
  for (int i = 0; i < n_sets; ++i) {
    for (int j = 0; j < n_sets; ++j) {
      for (int a : tree_.info_set(i).nodes) {
        for (int b : tree_.info_set(j).nodes) {
          if (tree_.IsAncestor(a, b)) {
            precedes_[i][j] = true;
            if (a != b) strictly[i][j] = true;
          }
        }
      }
    }
  }
  for (int i = 0; i < n_sets && precedence_problem_.empty(); ++i) {
    for (int j = 0; j < n_sets; ++j) {
      if (i != j && strictly[i][j] && strictly[j][i]) {
        precedence_problem_ = "information sets '" + tree_.info_set(i).id +
                              "' and '" + tree_.info_set(j).id +
                              "' each precede the other; no precedence order";
        break;
      }
    }
  }
  following_.assign(n_sets, std::vector<std::vector<int>>(n_players));
  for (int i = 0; i < n_sets; ++i) {
    for (int p = 0; p < n_players; ++p) {
      for (int j : own_sets_[p]) {
        if (precedes_[i][j]) following_[i][p].push_back(j);
      }
    }
  }

  // Opponent profile counts.
  num_opp_.assign(n_players, 1);
  for (int p = 0; p < n_players; ++p) {
    std::int64_t count = 1;
    for (int q = 0; q < n_players; ++q) {
      if (q != p) count *= NumStrategies(q);
    }
    num_opp_[p] = static_cast<int>(count);
  }

  // Per-profile traversal.
  outcomes_.assign(num_profiles_, {});
  profile_reach_.assign(num_profiles_, std::vector<bool>(n_sets, false));
  normal_form_.assign(n_players, {});
  opp_reach_.assign(n_players, std::vector<Mask>(n_sets));
  own_reach_.assign(n_players, std::vector<Mask>(n_sets));
  for (int p = 0; p < n_players; ++p) {
    normal_form_[p].assign(NumStrategies(p),
                           std::vector<Rational>(num_opp_[p], 0));
    for (int i = 0; i < n_sets; ++i) {
      opp_reach_[p][i].assign(num_opp_[p], false);
      own_reach_[p][i].assign(NumStrategies(p), false);
    }
  }
  weights_.assign(n_sets, {});
  reach_prob_.assign(n_sets, {});
  for (int i = 0; i < n_sets; ++i) {
    int p = Owner(i);
    weights_[i].assign(NumStrategies(p), std::vector<Rational>(num_opp_[p], 0));
    reach_prob_[i].assign(NumStrategies(p),
                          std::vector<Rational>(num_opp_[p], 0));
  }
  for (std::int64_t prof = 0; prof < num_profiles_; ++prof) {
    Traverse(prof, DecodeProfile(prof));
  }
}

inline void GameModel::EnumerateStrategies(const ModelLimits& limits) {
  const int n_players = tree_.num_players();
  strategies_.assign(n_players, {});
  strategy_stride_.assign(n_players, {});
  num_profiles_ = 1;
  for (int p = 0; p < n_players; ++p) {
    const auto& sets = own_sets_[p];
    std::int64_t count = 1;
    std::vector<std::int64_t> stride(sets.size(), 1);
    for (int k = static_cast<int>(sets.size()) - 1; k >= 0; --k) {
      stride[k] = count;
      count *= NumActions(sets[k]);
      if (count > limits.max_strategies) {
        throw CapacityError("player '" + tree_.player_id(p) +
                            "' has more than " +
                            std::to_string(limits.max_strategies) +
                            " pure strategies");
      }
    }
    strategy_stride_[p] = stride;
    auto& list = strategies_[p];
    list.assign(count, std::vector<int>(sets.size(), 0));
    for (std::int64_t s = 0; s < count; ++s) {
      for (std::size_t k = 0; k < sets.size(); ++k) {
        list[s][k] = static_cast<int>((s / stride[k]) % NumActions(sets[k]));
      }
    }
    num_profiles_ *= count;
    if (num_profiles_ > limits.max_profiles) {
      throw CapacityError("more than " + std::to_string(limits.max_profiles) +
                          " pure-strategy profiles");
    }
  }
}

inline void GameModel::Traverse(std::int64_t profile,
                                const std::vector<int>& strategies) {
  const int n_players = tree_.num_players();
  std::vector<int> opp_index(n_players);
  for (int p = 0; p < n_players; ++p) {
    std::vector<int> others = strategies;
    others[p] = -1;
    opp_index[p] = EncodeOpponents(p, others);
  }
  // Depth-first walk carrying path probability and the info sets passed.
  struct Frame {
    int node;
    Rational prob;
    std::vector<int> sets;
  };
  std::vector<Frame> stack = {{tree_.root(), Rational(1), {}}};
  auto& outcome = outcomes_[profile];
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const Node& nd = tree_.node(f.node);
    if (nd.kind == NodeKind::kTerminal) {
      outcome.emplace_back(f.node, f.prob);
      for (int p = 0; p < n_players; ++p) {
        normal_form_[p][strategies[p]][opp_index[p]] += f.prob * nd.payoffs[p];
      }
      for (int i : f.sets) {
        int p = Owner(i);
        weights_[i][strategies[p]][opp_index[p]] += f.prob * nd.payoffs[p];
      }
      continue;
    }
    if (nd.kind == NodeKind::kChance) {
      for (const Edge& e : nd.edges) {
        stack.push_back({e.child, f.prob * nd.chance_probs[e.profile[0]],
                         f.sets});
      }
      continue;
    }
    // Decision node: each mover's strategy picks an action label.
    std::vector<int> chosen(nd.movers.size());
    std::vector<int> sets = f.sets;
    for (std::size_t m = 0; m < nd.movers.size(); ++m) {
      int p = nd.movers[m];
      int info = tree_.InfoSetAt(f.node, static_cast<int>(m));
      sets.push_back(info);
      if (!profile_reach_[profile][info]) {
        profile_reach_[profile][info] = true;
        for (int q = 0; q < n_players; ++q) {
          opp_reach_[q][info][opp_index[q]] = true;
          own_reach_[q][info][strategies[q]] = true;
        }
      }
      reach_prob_[info][strategies[p]][opp_index[p]] += f.prob;
      const std::string& label =
          tree_.info_set(info).actions[Action(p, strategies[p], LocalIndex(info))];
      const auto& acts = nd.actions[m];
      chosen[m] =
          static_cast<int>(std::find(acts.begin(), acts.end(), label) -
                           acts.begin());
    }
    for (const Edge& e : nd.edges) {
      if (e.profile == chosen) {
        stack.push_back({e.child, f.prob, std::move(sets)});
        break;
      }
    }
  }
  std::sort(outcome.begin(), outcome.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

inline int GameModel::StrategyIndex(int p,
                                    const std::vector<int>& actions) const {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    s += actions[k] * strategy_stride_[p][k];
  }
  return static_cast<int>(s);
}

inline std::string GameModel::StrategyLabel(int p, int s) const {
  const auto& sets = own_sets_.at(p);
  if (sets.size() == 1) {
    return tree_.info_set(sets[0]).actions[strategies_[p][s][0]];
  }
  std::string label = "(";
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (k) label += ",";
    label += tree_.info_set(sets[k]).actions[strategies_[p][s][k]];
  }
  return label + ")";
}

inline int GameModel::ParseStrategy(int p, const std::string& label) const {
  for (int s = 0; s < NumStrategies(p); ++s) {
    if (StrategyLabel(p, s) == label) return s;
  }
  throw std::invalid_argument("player '" + tree_.player_id(p) +
                              "' has no strategy '" + label + "'");
}

inline std::vector<int> GameModel::DecodeOpponents(int p, int t) const {
  std::vector<int> out(num_players(), -1);
  for (int q = num_players() - 1; q >= 0; --q) {
    if (q == p) continue;
    out[q] = t % NumStrategies(q);
    t /= NumStrategies(q);
  }
  return out;
}

inline int GameModel::EncodeOpponents(int p,
                                      const std::vector<int>& strategies) const {
  int t = 0;
  for (int q = 0; q < num_players(); ++q) {
    if (q == p) continue;
    t = t * NumStrategies(q) + strategies[q];
  }
  return t;
}

inline std::int64_t GameModel::EncodeProfile(
    const std::vector<int>& strategies) const {
  std::int64_t index = 0;
  for (int q = 0; q < num_players(); ++q) {
    index = index * NumStrategies(q) + strategies[q];
  }
  return index;
}

inline std::vector<int> GameModel::DecodeProfile(std::int64_t index) const {
  std::vector<int> out(num_players());
  for (int q = num_players() - 1; q >= 0; --q) {
    out[q] = static_cast<int>(index % NumStrategies(q));
    index /= NumStrategies(q);
  }
  return out;
}

inline std::int64_t GameModel::FullProfile(int p, int s, int t) const {
  std::vector<int> strategies = DecodeOpponents(p, t);
  strategies[p] = s;
  return EncodeProfile(strategies);
}

inline std::vector<std::string> GameModel::OpponentLabels(int p, int t) const {
  std::vector<int> strategies = DecodeOpponents(p, t);
  std::vector<std::string> labels;
  for (int q = 0; q < num_players(); ++q) {
    if (q != p) labels.push_back(StrategyLabel(q, strategies[q]));
  }
  return labels;
}

inline std::string GameModel::OpponentLabel(int p, int t) const {
  auto labels = OpponentLabels(p, t);
  std::string out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (k) out += " x ";
    out += labels[k];
  }
  return out;
}

inline int GameModel::ParseOpponents(
    int p, const std::vector<std::string>& labels) const {
  if (static_cast<int>(labels.size()) != num_players() - 1) {
    throw std::invalid_argument("opponent profile needs one strategy per "
                                "opponent");
  }
  std::vector<int> strategies(num_players(), -1);
  std::size_t k = 0;
  for (int q = 0; q < num_players(); ++q) {
    if (q != p) strategies[q] = ParseStrategy(q, labels[k++]);
  }
  return EncodeOpponents(p, strategies);
}

inline Mask GameModel::OpponentProduct(int p,
                                       const std::vector<Mask>& sets) const {
  Mask out(num_opp_[p], false);
  for (int t = 0; t < num_opp_[p]; ++t) {
    std::vector<int> strategies = DecodeOpponents(p, t);
    bool in = true;
    for (int q = 0; q < num_players() && in; ++q) {
      if (q != p && !sets[q][strategies[q]]) in = false;
    }
    out[t] = in;
  }
  return out;
}

inline bool GameModel::Reaches(const std::vector<int>& partial,
                               int info_set) const {
  const InfoSet& target = tree_.info_set(info_set);
  std::vector<int> stack = {tree_.root()};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (std::find(target.nodes.begin(), target.nodes.end(), n) !=
        target.nodes.end()) {
      return true;
    }
    const Node& nd = tree_.node(n);
    for (const Edge& e : nd.edges) {
      bool ok = true;
      for (std::size_t m = 0; m < nd.movers.size() && ok; ++m) {
        int p = nd.movers[m];
        if (p == kChancePlayer || partial[p] < 0) continue;
        int info = tree_.InfoSetAt(n, static_cast<int>(m));
        const std::string& label =
            tree_.info_set(info).actions[Action(p, partial[p], LocalIndex(info))];
        ok = nd.actions[m][e.profile[m]] == label;
      }
      if (ok) stack.push_back(e.child);
    }
  }
  return false;
}

inline std::vector<int> GameModel::Replacements(int s, int info_set) const {
  int p = Owner(info_set);
  std::vector<int> out;
  const auto& mine = strategies_[p][s];
  for (int r = 0; r < NumStrategies(p); ++r) {
    bool agree = true;
    for (const auto& [set, action] : own_history_[info_set]) {
      int k = local_index_[set];
      if (strategies_[p][r][k] != mine[k]) {
        agree = false;
        break;
      }
    }
    if (agree) out.push_back(r);
  }
  return out;
}

inline int GameModel::ReachModify(int s, int info_set) const {
  int p = Owner(info_set);
  std::vector<int> actions = strategies_[p][s];
  for (const auto& [set, action] : own_history_[info_set]) {
    actions[local_index_[set]] = action;
  }
  return StrategyIndex(p, actions);
}

inline std::vector<int> GameModel::ContinuationKey(int j, int s,
                                                   int info_set) const {
  std::vector<int> key;
  for (int set : following_[info_set][j]) {
    key.push_back(strategies_[j][s][local_index_[set]]);
  }
  return key;
}

inline Mask GameModel::Bracket(int j, const Mask& x, int info_set) const {
  Mask out(NumStrategies(j), true);
  if (following_[info_set][j].empty() || !AnyTrue(x)) return out;
  std::vector<std::vector<int>> keys;
  for (int s = 0; s < NumStrategies(j); ++s) {
    if (x[s]) keys.push_back(ContinuationKey(j, s, info_set));
  }
  std::sort(keys.begin(), keys.end());
  for (int s = 0; s < NumStrategies(j); ++s) {
    out[s] = std::binary_search(keys.begin(), keys.end(),
                                ContinuationKey(j, s, info_set));
  }
  return out;
}

}  // namespace efsolve
