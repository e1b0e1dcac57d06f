#pragma once

// Belief engine: conditional beliefs, rationality at information sets,
// existence of rationalizing beliefs and belief systems, and dominance.
//
// A belief of player i at information set I is a probability distribution
// over opponent pure-strategy profiles that reach I. Player i's strategy s is
// rational at I under such a belief when no I-replacement of s (a strategy
// agreeing with s before I) earns a strictly higher expected payoff
// conditional on I.
//
// Belief systems assign one belief per own information set. Two membership
// modes exist:
//   local  - each information set is checked with its own belief, beliefs at
//            different information sets are unrelated;
//   strict - beliefs must also respect conditioning: whenever the belief at I
//            gives positive probability to a later own information set J,
//            the belief at J is the conditional of the belief at I.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efsolve/lp.hpp"
#include "efsolve/model.hpp"
#include "efsolve/rational.hpp"

namespace efsolve {

enum class Mode { kLocal, kStrict };

inline std::string ModeName(Mode mode) {
  return mode == Mode::kLocal ? "local" : "strict";
}

inline Mode ParseMode(const std::string& text) {
  if (text == "local") return Mode::kLocal;
  if (text == "strict") return Mode::kStrict;
  throw std::invalid_argument("unknown mode '" + text +
                              "' (expected local or strict)");
}

// Which strategy is judged at each information set.
enum class Rationality {
  kAtInfoSet,     // s itself; vacuous where s does not reach I
  kContinuation,  // s redirected towards I, at every I
};

// Sparse distribution over opponent profiles, sorted by profile index.
struct Belief {
  std::vector<std::pair<int, Rational>> mass;

  Rational Probability(int t) const {
    for (const auto& [profile, p] : mass) {
      if (profile == t) return p;
    }
    return 0;
  }
  Rational MassOn(const Mask& set) const {
    Rational total = 0;
    for (const auto& [profile, p] : mass) {
      if (set[profile]) total += p;
    }
    return total;
  }
  bool operator==(const Belief& other) const { return mass == other.mass; }
};

// Normalises non-negative weights into a belief; zero entries are dropped.
inline Belief MakeBelief(const std::vector<std::pair<int, Rational>>& weights) {
  Rational total = 0;
  for (const auto& [t, w] : weights) {
    if (w < 0) throw std::invalid_argument("negative belief weight");
    total += w;
  }
  if (total == 0) throw std::invalid_argument("belief has no mass");
  Belief b;
  for (const auto& [t, w] : weights) {
    if (w != 0) b.mass.emplace_back(t, w / total);
  }
  std::sort(b.mass.begin(), b.mass.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return b;
}

inline Belief UniformBelief(const Mask& support) {
  std::vector<std::pair<int, Rational>> weights;
  for (std::size_t t = 0; t < support.size(); ++t) {
    if (support[t]) weights.emplace_back(static_cast<int>(t), Rational(1));
  }
  return MakeBelief(weights);
}

inline Belief PointBelief(int t) { return Belief{{{t, Rational(1)}}}; }

// One belief per own information set of `player`, indexed by local index.
struct BeliefSystem {
  int player = 0;
  std::vector<Belief> at;
};

// Restriction on the belief at one information set.
struct InfoSetSupport {
  // Opponent profiles the belief may use; intersected with the reach set.
  Mask allowed;
  // Belief used instead when `allowed` misses the reach set entirely.
  std::optional<Belief> fallback;
  // Require positive probability on every allowed profile that reaches I.
  bool full_support = false;
  // Human-readable origin, e.g. "level 2" or "fallback".
  std::string origin;
};

struct SupportSpec {
  std::vector<InfoSetSupport> at;  // indexed by local information-set index
};

// Unrestricted support at every own information set of p.
inline SupportSpec UnrestrictedSpec(const GameModel& model, int p) {
  SupportSpec spec;
  for (std::size_t k = 0; k < model.InfoSetsOf(p).size(); ++k) {
    spec.at.push_back({Mask(model.NumOpponentProfiles(p), true), std::nullopt,
                       false, "unrestricted"});
  }
  return spec;
}

// Uniform belief over the reach set at every own information set. This
// system satisfies conditioning.
inline BeliefSystem UniformSystem(const GameModel& model, int p) {
  BeliefSystem system{p, {}};
  for (int info : model.InfoSetsOf(p)) {
    system.at.push_back(UniformBelief(model.OpponentReach(p, info)));
  }
  return system;
}

inline bool BeliefReaches(const GameModel& model, int info_set,
                          const Belief& belief) {
  const Mask& reach = model.OpponentReach(model.Owner(info_set), info_set);
  for (const auto& [t, p] : belief.mass) {
    if (!reach[t]) return false;
  }
  return !belief.mass.empty();
}

inline void RequireBeliefReaches(const GameModel& model, int info_set,
                                 const Belief& belief) {
  if (!BeliefReaches(model, info_set, belief)) {
    throw std::invalid_argument(
        "belief at information set '" + model.tree().info_set(info_set).id +
        "' puts weight on opponent profiles that do not reach it");
  }
}

// True when every belief reaches its information set and, for each own
// information set J following I, positive weight on J at I forces the belief
// at J to be the conditional of the belief at I.
inline bool SatisfiesConditioning(const GameModel& model,
                                  const BeliefSystem& system) {
  const auto& sets = model.InfoSetsOf(system.player);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (!BeliefReaches(model, sets[k], system.at[k])) return false;
  }
  for (std::size_t k = 0; k < sets.size(); ++k) {
    int parent = model.OwnParent(sets[k]);
    if (parent < 0) continue;
    const Belief& up = system.at[model.LocalIndex(parent)];
    const Mask& reach = model.OpponentReach(system.player, sets[k]);
    Rational mass = up.MassOn(reach);
    if (mass == 0) continue;
    std::vector<std::pair<int, Rational>> cond;
    for (const auto& [t, p] : up.mass) {
      if (reach[t]) cond.emplace_back(t, p);
    }
    if (!(MakeBelief(cond) == system.at[k])) return false;
  }
  return true;
}

// Expected payoff of s conditional on reaching I.
inline Rational ConditionalExpectedUtility(const GameModel& model, int s,
                                           int info_set, const Belief& belief) {
  int p = model.Owner(info_set);
  RequireBeliefReaches(model, info_set, belief);
  const RMatrix& w = model.Weights(info_set);
  const RMatrix& rho = model.ReachProbability(info_set);
  Rational value = 0, reach = 0;
  for (const auto& [t, prob] : belief.mass) {
    value += prob * w[s][t];
    reach += prob * rho[s][t];
  }
  if (reach == 0) {
    throw std::invalid_argument("strategy '" + model.StrategyLabel(p, s) +
                                "' does not reach information set '" +
                                model.tree().info_set(info_set).id + "'");
  }
  return value / reach;
}

// s is rational at I under `belief` (s must reach I).
inline bool IsRationalAt(const GameModel& model, int s, int info_set,
                         const Belief& belief) {
  int p = model.Owner(info_set);
  if (!model.OwnReach(p, info_set)[s]) {
    throw std::invalid_argument("strategy '" + model.StrategyLabel(p, s) +
                                "' does not reach information set '" +
                                model.tree().info_set(info_set).id + "'");
  }
  RequireBeliefReaches(model, info_set, belief);
  const RMatrix& w = model.Weights(info_set);
  for (int r : model.Replacements(s, info_set)) {
    Rational diff = 0;
    for (const auto& [t, prob] : belief.mass) diff += prob * (w[s][t] - w[r][t]);
    if (diff < 0) return false;
  }
  return true;
}

namespace beliefs_internal {

// Per-information-set data for one feasibility query.
struct Slot {
  int info_set = -1;
  Mask reach;                     // opponent profiles reaching I
  Mask effective;                 // allowed ∩ reach (empty when fixed)
  std::optional<Belief> fixed;    // fallback in force
  bool full_support = false;
  int candidate = -1;             // strategy judged at I, -1 when vacuous
};

inline std::vector<Slot> MakeSlots(const GameModel& model, int p, int s,
                                   const SupportSpec& spec,
                                   Rationality rationality, bool* possible) {
  const auto& sets = model.InfoSetsOf(p);
  if (spec.at.size() != sets.size()) {
    throw std::invalid_argument("support spec does not cover every "
                                "information set");
  }
  std::vector<Slot> slots(sets.size());
  *possible = true;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    Slot& slot = slots[k];
    slot.info_set = sets[k];
    slot.reach = model.OpponentReach(p, sets[k]);
    slot.effective = Intersect(spec.at[k].allowed, slot.reach);
    slot.full_support = spec.at[k].full_support;
    if (!AnyTrue(slot.effective)) {
      if (spec.at[k].fallback) {
        RequireBeliefReaches(model, sets[k], *spec.at[k].fallback);
        slot.fixed = spec.at[k].fallback;
      } else {
        *possible = false;
      }
    }
    if (rationality == Rationality::kContinuation) {
      slot.candidate = model.ReachModify(s, sets[k]);
    } else if (model.OwnReach(p, sets[k])[s]) {
      slot.candidate = s;
    }
  }
  return slots;
}

// Adds "s is rational at I" for the belief proportional to x restricted to
// the reach set of I: sum_t x_t (W[s][t] - W[r][t]) >= 0 for replacements r.
inline void AddRationality(const GameModel& model, const Slot& slot,
                           const std::vector<int>& var_of, LinearProgram* lp) {
  const RMatrix& w = model.Weights(slot.info_set);
  for (int r : model.Replacements(slot.candidate, slot.info_set)) {
    if (r == slot.candidate) continue;
    LinearConstraint c;
    c.relation = Relation::kGreaterEqual;
    c.rhs = 0;
    for (std::size_t t = 0; t < var_of.size(); ++t) {
      if (var_of[t] < 0 || !slot.reach[t]) continue;
      Rational d = w[slot.candidate][t] - w[r][t];
      if (d != 0) c.terms.emplace_back(var_of[t], d);
    }
    if (!c.terms.empty()) lp->AddConstraint(std::move(c));
  }
}

// Solves one group of information sets tied together by conditioning. The
// group shares an unnormalised weight vector over the reach set of its root;
// `zero_children` are own information sets whose reach set must get no
// weight. Returns the belief at each member, or nullopt when infeasible.
inline std::optional<std::vector<Belief>> SolveGroup(
    const GameModel& model, const std::vector<Slot>& slots,
    const std::vector<int>& members, const std::vector<int>& zero_children) {
  const Slot& root = slots[members[0]];
  const int n_opp = static_cast<int>(root.reach.size());
  // A profile outside the root's allowed set can never carry weight; the
  // root's reach set contains every member's reach set.
  Mask usable = root.fixed ? root.reach : root.effective;
  for (int m : members) {
    const Slot& slot = slots[m];
    if (slot.fixed) continue;
    for (int t = 0; t < n_opp; ++t) {
      if (slot.reach[t] && !slot.effective[t]) usable[t] = false;
    }
  }
  for (int z : zero_children) {
    for (int t = 0; t < n_opp; ++t) {
      if (slots[z].reach[t]) usable[t] = false;
    }
  }
  LinearProgram lp;
  std::vector<int> var_of(n_opp, -1);
  for (int t = 0; t < n_opp; ++t) {
    if (usable[t]) var_of[t] = lp.AddVariable();
  }
  for (int m : members) {
    const Slot& slot = slots[m];
    // Positive mass on the member: sum_{t in R_I} x_t >= 1.
    LinearConstraint positive{{}, Relation::kGreaterEqual, 1};
    for (int t = 0; t < n_opp; ++t) {
      if (slot.reach[t] && var_of[t] >= 0) positive.terms.emplace_back(var_of[t], 1);
    }
    if (positive.terms.empty()) return std::nullopt;
    lp.AddConstraint(positive);
    if (slot.fixed) {
      // x restricted to R_I equals lambda * fixed.
      int lambda = lp.AddVariable();
      for (int t = 0; t < n_opp; ++t) {
        if (!slot.reach[t]) continue;
        Rational f = slot.fixed->Probability(t);
        if (var_of[t] < 0) {
          if (f != 0) return std::nullopt;
          continue;
        }
        LinearConstraint eq{{{var_of[t], Rational(1)}}, Relation::kEqual, 0};
        if (f != 0) eq.terms.emplace_back(lambda, -f);
        lp.AddConstraint(eq);
      }
    } else if (slot.full_support) {
      for (int t = 0; t < n_opp; ++t) {
        if (!slot.effective[t]) continue;
        if (var_of[t] < 0) return std::nullopt;
        lp.AddConstraint({{var_of[t], Rational(1)}}, Relation::kGreaterEqual, 1);
      }
    }
    if (slot.candidate >= 0) AddRationality(model, slot, var_of, &lp);
  }
  LpResult result = lp.Solve();
  if (result.status == LpStatus::kInfeasible) return std::nullopt;
  std::vector<Belief> beliefs;
  for (int m : members) {
    std::vector<std::pair<int, Rational>> weights;
    for (int t = 0; t < n_opp; ++t) {
      if (slots[m].reach[t] && var_of[t] >= 0) {
        weights.emplace_back(t, result.solution[var_of[t]]);
      }
    }
    beliefs.push_back(MakeBelief(weights));
  }
  return beliefs;
}

}  // namespace beliefs_internal

// A belief with support inside `allowed` ∩ reach(I) under which s is rational
// at I, or nullopt. Throws when allowed ∩ reach(I) is empty.
inline std::optional<Belief> ExistsRationalizingBelief(
    const GameModel& model, int s, int info_set, const Mask& allowed,
    bool full_support = false) {
  using beliefs_internal::Slot;
  int p = model.Owner(info_set);
  Slot slot;
  slot.info_set = info_set;
  slot.reach = model.OpponentReach(p, info_set);
  slot.effective = Intersect(allowed, slot.reach);
  slot.full_support = full_support;
  slot.candidate = s;
  if (!AnyTrue(slot.effective)) {
    throw std::invalid_argument("allowed support misses the reach set of '" +
                                model.tree().info_set(info_set).id + "'");
  }
  if (!model.OwnReach(p, info_set)[s]) {
    throw std::invalid_argument("strategy '" + model.StrategyLabel(p, s) +
                                "' does not reach information set '" +
                                model.tree().info_set(info_set).id + "'");
  }
  auto beliefs = beliefs_internal::SolveGroup(model, {slot}, {0}, {});
  if (!beliefs) return std::nullopt;
  return (*beliefs)[0];
}

// Searches for a belief system of player p obeying `spec` under which s is
// rational at every information set in the sense of `rationality`. Returns a
// witness or nullopt.
inline std::optional<BeliefSystem> ExistsBeliefSystem(
    const GameModel& model, int p, int s, const SupportSpec& spec,
    Rationality rationality, Mode mode) {
  using beliefs_internal::Slot;
  bool possible = true;
  std::vector<Slot> slots =
      beliefs_internal::MakeSlots(model, p, s, spec, rationality, &possible);
  if (!possible) return std::nullopt;
  const std::size_t n = slots.size();
  BeliefSystem system{p, std::vector<Belief>(n)};

  if (mode == Mode::kLocal) {
    for (std::size_t k = 0; k < n; ++k) {
      const Slot& slot = slots[k];
      if (slot.fixed) {
        if (slot.candidate >= 0 &&
            !IsRationalAt(model, slot.candidate, slot.info_set, *slot.fixed)) {
          return std::nullopt;
        }
        system.at[k] = *slot.fixed;
        continue;
      }
      if (slot.candidate < 0 && !slot.full_support) {
        system.at[k] = UniformBelief(slot.effective);
        continue;
      }
      auto beliefs = beliefs_internal::SolveGroup(model, slots,
                                                  {static_cast<int>(k)}, {});
      if (!beliefs) return std::nullopt;
      system.at[k] = (*beliefs)[0];
    }
    return system;
  }

  // Strict mode: enumerate which own parent-child links carry positive
  // probability. Linked information sets share one weight vector; an
  // unlinked child gets zero weight from its parent and starts a new group.
  std::vector<int> edges;  // local indices with an own parent
  for (std::size_t k = 0; k < n; ++k) {
    if (model.OwnParent(slots[k].info_set) >= 0) edges.push_back(k);
  }
  if (edges.size() > 20) {
    throw CapacityError("too many own information-set links for strict mode");
  }
  for (std::uint64_t pattern = 0; pattern < (1ull << edges.size());
       ++pattern) {
    std::vector<bool> linked(n, false);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      linked[edges[e]] = (pattern >> e) & 1;
    }
    // Group root of each information set.
    std::vector<int> group(n);
    for (std::size_t k = 0; k < n; ++k) {
      int cur = static_cast<int>(k);
      while (linked[cur]) {
        cur = model.LocalIndex(model.OwnParent(slots[cur].info_set));
      }
      group[k] = cur;
    }
    bool feasible = true;
    std::vector<Belief> found(n);
    for (std::size_t g = 0; g < n && feasible; ++g) {
      if (group[g] != static_cast<int>(g)) continue;
      std::vector<int> members, zeros;
      members.push_back(static_cast<int>(g));
      for (std::size_t k = 0; k < n; ++k) {
        if (k != g && group[k] == static_cast<int>(g)) members.push_back(k);
      }
      for (std::size_t k = 0; k < n; ++k) {
        int parent = model.OwnParent(slots[k].info_set);
        if (parent >= 0 && !linked[k] &&
            group[model.LocalIndex(parent)] == static_cast<int>(g)) {
          zeros.push_back(static_cast<int>(k));
        }
      }
      auto beliefs = beliefs_internal::SolveGroup(model, slots, members, zeros);
      if (!beliefs) {
        feasible = false;
        break;
      }
      for (std::size_t m = 0; m < members.size(); ++m) {
        found[members[m]] = (*beliefs)[m];
      }
    }
    if (feasible) {
      system.at = std::move(found);
      return system;
    }
  }
  return std::nullopt;
}

// Checks a given belief system: s rational at every relevant information set.
inline bool IsRationalUnder(const GameModel& model, int p, int s,
                            const BeliefSystem& system,
                            Rationality rationality) {
  const auto& sets = model.InfoSetsOf(p);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    int candidate = s;
    if (rationality == Rationality::kContinuation) {
      candidate = model.ReachModify(s, sets[k]);
    } else if (!model.OwnReach(p, sets[k])[s]) {
      continue;
    }
    if (!IsRationalAt(model, candidate, sets[k], system.at[k])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dominance
// ---------------------------------------------------------------------------

enum class DominanceKind { kStrict, kWeak };

using Mixture = std::vector<std::pair<int, Rational>>;

// Is row s of `payoff` dominated by a mixture over `pool`, comparing only the
// columns in `columns`? Strict: the mixture is strictly better in every
// column. Weak: never worse and strictly better in some column. Returns the
// dominating mixture. With no columns nothing is dominated.
inline std::optional<Mixture> DominanceTest(const RMatrix& payoff, int s,
                                            const std::vector<int>& pool,
                                            const Mask& columns,
                                            DominanceKind kind) {
  if (!AnyTrue(columns) || pool.empty()) return std::nullopt;
  LinearProgram lp;
  std::vector<int> var;
  for (std::size_t k = 0; k < pool.size(); ++k) var.push_back(lp.AddVariable());
  std::vector<std::pair<int, Rational>> objective;
  for (std::size_t t = 0; t < columns.size(); ++t) {
    if (!columns[t]) continue;
    LinearConstraint c;
    c.relation = Relation::kGreaterEqual;
    c.rhs = kind == DominanceKind::kStrict ? 1 : 0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      Rational d = payoff[pool[k]][t] - payoff[s][t];
      if (d == 0) continue;
      c.terms.emplace_back(var[k], d);
      if (kind == DominanceKind::kWeak) objective.emplace_back(var[k], d);
    }
    lp.AddConstraint(std::move(c));
  }
  if (kind == DominanceKind::kWeak) {
    LinearConstraint simplex{{}, Relation::kEqual, 1};
    for (int v : var) simplex.terms.emplace_back(v, 1);
    lp.AddConstraint(simplex);
    lp.SetObjective(objective);
  }
  LpResult result = lp.Solve();
  if (result.status == LpStatus::kInfeasible) return std::nullopt;
  if (kind == DominanceKind::kWeak && result.objective <= 0) return std::nullopt;
  std::vector<std::pair<int, Rational>> weights;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    weights.emplace_back(pool[k], result.solution[var[k]]);
  }
  Belief normalised = MakeBelief(weights);
  return normalised.mass;
}

// Conditional strict dominance of s at I: a mixture of I-replacements that is
// strictly better conditional on I against every profile of `opponents`
// reaching I.
inline std::optional<Mixture> ConditionalDominanceTest(const GameModel& model,
                                                       int s, int info_set,
                                                       const Mask& opponents) {
  int p = model.Owner(info_set);
  return DominanceTest(model.Weights(info_set), s,
                       model.Replacements(s, info_set),
                       Intersect(opponents, model.OpponentReach(p, info_set)),
                       DominanceKind::kStrict);
}

}  // namespace efsolve
