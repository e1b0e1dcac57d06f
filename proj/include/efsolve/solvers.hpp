#pragma once

// Level-indexed solution concepts.
//
// Every solver returns a LevelSolution: for each level k = 1..K and each
// player the set of surviving (or level-k) pure strategies. Reduction
// procedures (rationalizability, strong / Delta / prudent / backward
// rationalizability, iterated admissibility) produce nested sets; level-k
// procedures do not, and may cycle.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efsolve/beliefs.hpp"
#include "efsolve/model.hpp"

namespace efsolve {

struct SolverOptions {
  Mode mode = Mode::kLocal;
  bool record_witnesses = false;
};

// Belief justifying membership of one strategy at one level.
struct Witness {
  int level = 0;
  int player = 0;
  int strategy = 0;
  std::optional<BeliefSystem> system;  // extensive-form concepts
  std::optional<Belief> belief;        // normal-form concepts
};

struct Cycle {
  int start = 0;
  int period = 0;
  bool operator==(const Cycle& o) const {
    return start == o.start && period == o.period;
  }
};

struct LevelSolution {
  std::string concept_id;
  Json parameters = Json::object();
  // levels[k-1][p]: membership mask over player p's strategies at level k.
  std::vector<std::vector<Mask>> levels;
  // supports[k-1][p][local]: where the belief at that information set may
  // put weight, e.g. "level 2" or "fallback". Empty for concepts without
  // belief restrictions.
  std::vector<std::vector<std::vector<std::string>>> supports;
  std::optional<Cycle> cycle;
  // Smallest k < K with identical sets at k and k+1.
  std::optional<int> fixed_point;
  std::vector<Witness> witnesses;

  int num_levels() const { return static_cast<int>(levels.size()); }
  const Mask& Set(int level, int player) const {
    return levels.at(level - 1).at(player);
  }
  bool Empty(int level, int player) const { return !AnyTrue(Set(level, player)); }
};

// Earliest start s and minimal period p such that the per-level set tuples
// satisfy T(k) = T(k + p) for every k >= s within the computed levels.
inline std::optional<Cycle> DetectCycle(const LevelSolution& solution) {
  const int n = solution.num_levels();
  for (int s = 1; s < n; ++s) {
    for (int p = 1; s + p <= n; ++p) {
      bool periodic = true;
      for (int k = s; k + p <= n && periodic; ++k) {
        periodic = solution.levels[k - 1] == solution.levels[k + p - 1];
      }
      if (periodic) return Cycle{s, p};
    }
  }
  return std::nullopt;
}

namespace solver_internal {

inline void RequireLevels(int k) {
  if (k < 1) throw std::invalid_argument("number of levels must be at least 1");
}

inline void Finish(LevelSolution* solution) {
  solution->cycle = DetectCycle(*solution);
  solution->fixed_point.reset();
  for (int k = 1; k < solution->num_levels(); ++k) {
    if (solution->levels[k - 1] == solution->levels[k]) {
      solution->fixed_point = k;
      break;
    }
  }
}

inline std::vector<Mask> AllStrategies(const GameModel& model) {
  std::vector<Mask> sets;
  for (int p = 0; p < model.num_players(); ++p) {
    sets.emplace_back(model.NumStrategies(p), true);
  }
  return sets;
}

// Belief over all opponent profiles (not necessarily reaching anything)
// under which s is a best response in the normal form among all S_p.
inline std::optional<Belief> NormalFormBelief(const GameModel& model, int p,
                                              int s, const Mask& allowed) {
  const RMatrix& u = model.NormalForm(p);
  LinearProgram lp;
  std::vector<int> var(allowed.size(), -1);
  LinearConstraint simplex{{}, Relation::kEqual, 1};
  for (std::size_t t = 0; t < allowed.size(); ++t) {
    if (!allowed[t]) continue;
    var[t] = lp.AddVariable();
    simplex.terms.emplace_back(var[t], 1);
  }
  if (simplex.terms.empty()) return std::nullopt;
  lp.AddConstraint(simplex);
  for (int r = 0; r < model.NumStrategies(p); ++r) {
    if (r == s) continue;
    LinearConstraint c{{}, Relation::kGreaterEqual, 0};
    for (std::size_t t = 0; t < allowed.size(); ++t) {
      if (var[t] >= 0 && u[s][t] != u[r][t]) {
        c.terms.emplace_back(var[t], u[s][t] - u[r][t]);
      }
    }
    if (!c.terms.empty()) lp.AddConstraint(c);
  }
  LpResult result = lp.Solve();
  if (result.status == LpStatus::kInfeasible) return std::nullopt;
  std::vector<std::pair<int, Rational>> weights;
  for (std::size_t t = 0; t < allowed.size(); ++t) {
    if (var[t] >= 0) weights.emplace_back(static_cast<int>(t),
                                          result.solution[var[t]]);
  }
  return MakeBelief(weights);
}

inline Rational NormalFormUtility(const GameModel& model, int p, int s,
                                  const Belief& belief) {
  Rational value = 0;
  for (const auto& [t, prob] : belief.mass) {
    value += prob * model.NormalForm(p)[s][t];
  }
  return value;
}

// Largest level l in [lo, hi] whose opponent product reaches I, or -1.
inline int LargestReachingLevel(const GameModel& model, int p, int info_set,
                                const std::vector<std::vector<Mask>>& levels,
                                int lo, int hi) {
  for (int l = hi; l >= lo; --l) {
    Mask product = model.OpponentProduct(p, levels[l]);
    if (AnyTrue(Intersect(product, model.OpponentReach(p, info_set)))) {
      return l;
    }
  }
  return -1;
}

// Runs membership for every strategy of every player given a support spec
// per player; records witnesses and support notes.
template <typename Allowed>
std::vector<Mask> BeliefLevel(const GameModel& model, int level,
                              const std::vector<SupportSpec>& specs,
                              Rationality rationality, const Allowed& allowed,
                              const SolverOptions& options,
                              LevelSolution* solution) {
  std::vector<Mask> sets;
  std::vector<std::vector<std::string>> notes;
  for (int p = 0; p < model.num_players(); ++p) {
    Mask set(model.NumStrategies(p), false);
    for (int s = 0; s < model.NumStrategies(p); ++s) {
      if (!allowed(p, s)) continue;
      auto system = ExistsBeliefSystem(model, p, s, specs[p], rationality,
                                       options.mode);
      if (!system) continue;
      set[s] = true;
      if (options.record_witnesses) {
        solution->witnesses.push_back({level, p, s, *system, std::nullopt});
      }
    }
    sets.push_back(std::move(set));
    std::vector<std::string> origin;
    for (const auto& slot : specs[p].at) origin.push_back(slot.origin);
    notes.push_back(std::move(origin));
  }
  solution->supports.push_back(std::move(notes));
  return sets;
}

inline std::string LevelOrigin(int l) { return "level " + std::to_string(l); }

}  // namespace solver_internal

// ---------------------------------------------------------------------------
// Normal-form concepts
// ---------------------------------------------------------------------------

// Level-k thinking on the associated normal form. beliefs[p] is a belief
// over player p's opponent profiles.
inline LevelSolution NormalFormLevelK(const GameModel& model,
                                      const std::vector<Belief>& beliefs,
                                      int levels,
                                      const SolverOptions& options = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  if (static_cast<int>(beliefs.size()) != model.num_players()) {
    throw std::invalid_argument("need one first-level belief per player");
  }
  LevelSolution solution;
  solution.concept_id = "normal-form-level-k";
  solution.parameters["levels"] = levels;
  std::vector<Mask> current;
  for (int p = 0; p < model.num_players(); ++p) {
    for (const auto& [t, prob] : beliefs[p].mass) {
      if (t < 0 || t >= model.NumOpponentProfiles(p) || prob < 0) {
        throw std::invalid_argument("first-level belief is not a "
                                    "distribution over opponent profiles");
      }
    }
    Rational best;
    std::vector<Rational> value(model.NumStrategies(p));
    for (int s = 0; s < model.NumStrategies(p); ++s) {
      value[s] = NormalFormUtility(model, p, s, beliefs[p]);
      if (s == 0 || value[s] > best) best = value[s];
    }
    Mask set(model.NumStrategies(p), false);
    for (int s = 0; s < model.NumStrategies(p); ++s) {
      set[s] = value[s] == best;
      if (set[s] && options.record_witnesses) {
        solution.witnesses.push_back({1, p, s, std::nullopt, beliefs[p]});
      }
    }
    current.push_back(std::move(set));
  }
  solution.levels.push_back(current);
  for (int k = 2; k <= levels; ++k) {
    std::vector<Mask> next;
    for (int p = 0; p < model.num_players(); ++p) {
      Mask allowed = model.OpponentProduct(p, current);
      Mask set(model.NumStrategies(p), false);
      for (int s = 0; s < model.NumStrategies(p); ++s) {
        auto belief = NormalFormBelief(model, p, s, allowed);
        set[s] = belief.has_value();
        if (belief && options.record_witnesses) {
          solution.witnesses.push_back({k, p, s, std::nullopt, *belief});
        }
      }
      next.push_back(std::move(set));
    }
    current = next;
    solution.levels.push_back(current);
  }
  Finish(&solution);
  return solution;
}

// Uniform first-level beliefs over all opponent profiles.
inline std::vector<Belief> UniformNormalFormBeliefs(const GameModel& model) {
  std::vector<Belief> beliefs;
  for (int p = 0; p < model.num_players(); ++p) {
    beliefs.push_back(UniformBelief(Mask(model.NumOpponentProfiles(p), true)));
  }
  return beliefs;
}

// k-level rationalizability on the normal form (correlated beliefs).
inline LevelSolution Rationalizability(const GameModel& model, int levels,
                                       const SolverOptions& options = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  LevelSolution solution;
  solution.concept_id = "rationalizability";
  solution.parameters["levels"] = levels;
  std::vector<Mask> current = AllStrategies(model);
  for (int k = 1; k <= levels; ++k) {
    std::vector<Mask> next;
    for (int p = 0; p < model.num_players(); ++p) {
      Mask allowed = model.OpponentProduct(p, current);
      Mask set(model.NumStrategies(p), false);
      for (int s = 0; s < model.NumStrategies(p); ++s) {
        auto belief = NormalFormBelief(model, p, s, allowed);
        set[s] = belief.has_value();
        if (belief && options.record_witnesses) {
          solution.witnesses.push_back({k, p, s, std::nullopt, *belief});
        }
      }
      next.push_back(std::move(set));
    }
    current = next;
    solution.levels.push_back(current);
  }
  Finish(&solution);
  return solution;
}

// Simultaneous removal of weakly dominated strategies (mixtures allowed)
// relative to the surviving subspace; level k holds the survivors of k rounds.
inline LevelSolution IteratedAdmissibility(const GameModel& model, int levels,
                                           const SolverOptions& = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  LevelSolution solution;
  solution.concept_id = "iterated-admissibility";
  solution.parameters["levels"] = levels;
  std::vector<Mask> current = AllStrategies(model);
  for (int k = 1; k <= levels; ++k) {
    std::vector<Mask> next = current;
    for (int p = 0; p < model.num_players(); ++p) {
      Mask columns = model.OpponentProduct(p, current);
      std::vector<int> pool = MaskToIndices(current[p]);
      for (int s : pool) {
        if (DominanceTest(model.NormalForm(p), s, pool, columns,
                          DominanceKind::kWeak)) {
          next[p][s] = false;
        }
      }
    }
    current = next;
    solution.levels.push_back(current);
  }
  Finish(&solution);
  return solution;
}

// ---------------------------------------------------------------------------
// Extensive-form concepts
// ---------------------------------------------------------------------------

// Strong level-k thinking. At level k and own information set I, beliefs
// concentrate on the opponents' level-l strategies for the largest l < k
// whose strategies reach I; if no such l exists the first-level belief at I
// applies.
inline LevelSolution StrongLevelK(const GameModel& model,
                                  const std::vector<BeliefSystem>& first,
                                  int levels,
                                  const SolverOptions& options = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  LevelSolution solution;
  solution.concept_id = "strong-level-k";
  solution.parameters["levels"] = levels;
  solution.parameters["mode"] = ModeName(options.mode);
  const int n = model.num_players();
  std::vector<std::vector<Mask>> history;
  for (int k = 1; k <= levels; ++k) {
    std::vector<SupportSpec> specs(n);
    for (int p = 0; p < n; ++p) {
      for (std::size_t local = 0; local < model.InfoSetsOf(p).size(); ++local) {
        int info = model.InfoSetsOf(p)[local];
        InfoSetSupport slot;
        slot.fallback = first[p].at.at(local);
        int l = LargestReachingLevel(model, p, info, history, 0, k - 2);
        if (l >= 0) {
          slot.allowed = model.OpponentProduct(p, history[l]);
          slot.origin = LevelOrigin(l + 1);
        } else {
          slot.allowed = Mask(model.NumOpponentProfiles(p), false);
          slot.origin = "fallback";
        }
        specs[p].at.push_back(std::move(slot));
      }
    }
    history.push_back(BeliefLevel(
        model, k, specs, Rationality::kAtInfoSet,
        [](int, int) { return true; }, options, &solution));
  }
  solution.levels = history;
  Finish(&solution);
  return solution;
}

inline std::vector<BeliefSystem> UniformBeliefSystems(const GameModel& model) {
  std::vector<BeliefSystem> systems;
  for (int p = 0; p < model.num_players(); ++p) {
    systems.push_back(UniformSystem(model, p));
  }
  return systems;
}

// Strong rationalizability computed by belief feasibility: at level k and
// information set I the belief is concentrated on the opponents' level-l
// survivors for the largest l <= k-1 whose survivors reach I (level 0 is
// everything).
inline LevelSolution StrongRationalizabilityByBeliefs(
    const GameModel& model, int levels, const SolverOptions& options = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  LevelSolution solution;
  solution.concept_id = "strong-rationalizability";
  solution.parameters["levels"] = levels;
  solution.parameters["mode"] = ModeName(options.mode);
  solution.parameters["route"] = "beliefs";
  const int n = model.num_players();
  std::vector<std::vector<Mask>> history = {AllStrategies(model)};
  for (int k = 1; k <= levels; ++k) {
    std::vector<SupportSpec> specs(n);
    for (int p = 0; p < n; ++p) {
      for (int info : model.InfoSetsOf(p)) {
        int l = LargestReachingLevel(model, p, info, history, 0, k - 1);
        InfoSetSupport slot;
        slot.allowed = model.OpponentProduct(p, history[l]);
        slot.origin = l == 0 ? "unrestricted" : LevelOrigin(l);
        specs[p].at.push_back(std::move(slot));
      }
    }
    const auto& prev = history.back();
    history.push_back(BeliefLevel(
        model, k, specs, Rationality::kAtInfoSet,
        [&prev](int p, int s) { return static_cast<bool>(prev[p][s]); },
        options, &solution));
  }
  solution.levels.assign(history.begin() + 1, history.end());
  Finish(&solution);
  return solution;
}

// Strong rationalizability by iterated elimination of conditionally strictly
// dominated strategies: a survivor is removed when, at some own information
// set it reaches, a mixture of its replacements does strictly better against
// every surviving opponent profile reaching that set. Strict mode uses the
// belief route so that conditioning is enforced.
inline LevelSolution StrongRationalizability(const GameModel& model,
                                             int levels,
                                             const SolverOptions& options = {}) {
  using namespace solver_internal;
  if (options.mode == Mode::kStrict || options.record_witnesses) {
    return StrongRationalizabilityByBeliefs(model, levels, options);
  }
  RequireLevels(levels);
  LevelSolution solution;
  solution.concept_id = "strong-rationalizability";
  solution.parameters["levels"] = levels;
  solution.parameters["mode"] = ModeName(options.mode);
  solution.parameters["route"] = "elimination";
  std::vector<Mask> current = AllStrategies(model);
  for (int k = 1; k <= levels; ++k) {
    std::vector<Mask> next = current;
    for (int p = 0; p < model.num_players(); ++p) {
      Mask opponents = model.OpponentProduct(p, current);
      for (int s = 0; s < model.NumStrategies(p); ++s) {
        if (!current[p][s]) continue;
        for (int info : model.InfoSetsOf(p)) {
          if (!model.OwnReach(p, info)[s]) continue;
          if (ConditionalDominanceTest(model, s, info, opponents)) {
            next[p][s] = false;
            break;
          }
        }
      }
    }
    current = next;
    solution.levels.push_back(current);
  }
  Finish(&solution);
  return solution;
}

// A Delta restriction for one player: either an explicit finite list of
// belief systems or no restriction at all.
struct DeltaRestriction {
  bool unrestricted = false;
  std::vector<BeliefSystem> systems;
};

enum class DeltaVariant { kStandard, kModified };

// Strong Delta-rationalizability. Level 1 uses beliefs from Delta; level k
// keeps level-(k-1) survivors that are rational under a belief system (from
// Delta, or from all belief systems in the modified variant) which is certain
// of the opponents' level-(k-1) survivors wherever those reach.
inline LevelSolution DeltaRationalizability(
    const GameModel& model, const std::vector<DeltaRestriction>& delta,
    int levels, DeltaVariant variant, const SolverOptions& options = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  const int n = model.num_players();
  if (static_cast<int>(delta.size()) != n) {
    throw std::invalid_argument("need one Delta restriction per player");
  }
  for (const auto& d : delta) {
    if (!d.unrestricted && d.systems.empty()) {
      throw std::invalid_argument("Delta restriction must be nonempty");
    }
  }
  LevelSolution solution;
  solution.concept_id = "delta-rationalizability";
  solution.parameters["levels"] = levels;
  solution.parameters["variant"] =
      variant == DeltaVariant::kStandard ? "standard" : "modified";
  solution.parameters["mode"] = ModeName(options.mode);
  std::vector<Mask> current = AllStrategies(model);
  for (int k = 1; k <= levels; ++k) {
    std::vector<Mask> next;
    std::vector<std::vector<std::string>> notes(n);
    for (int p = 0; p < n; ++p) {
      Mask certain = model.OpponentProduct(p, current);
      const auto& sets = model.InfoSetsOf(p);
      // Information sets where certainty applies from level 2 on.
      std::vector<bool> binding(sets.size(), false);
      for (std::size_t l = 0; l < sets.size(); ++l) {
        binding[l] = k >= 2 && AnyTrue(Intersect(
                                   certain, model.OpponentReach(p, sets[l])));
        notes[p].push_back(binding[l] ? LevelOrigin(k - 1)
                                      : (k == 1 ? "delta" : "unrestricted"));
      }
      Mask set(model.NumStrategies(p), false);
      bool use_list = !delta[p].unrestricted &&
                      (k == 1 || variant == DeltaVariant::kStandard);
      for (int s = 0; s < model.NumStrategies(p); ++s) {
        if (!current[p][s]) continue;
        std::optional<BeliefSystem> found;
        if (use_list) {
          for (const BeliefSystem& system : delta[p].systems) {
            if (options.mode == Mode::kStrict &&
                !SatisfiesConditioning(model, system)) {
              continue;
            }
            bool ok = true;
            for (std::size_t l = 0; l < sets.size() && ok; ++l) {
              if (binding[l] && system.at[l].MassOn(certain) != 1) ok = false;
            }
            if (ok && IsRationalUnder(model, p, s, system,
                                      Rationality::kAtInfoSet)) {
              found = system;
              break;
            }
          }
        } else {
          SupportSpec spec = UnrestrictedSpec(model, p);
          for (std::size_t l = 0; l < sets.size(); ++l) {
            if (binding[l]) spec.at[l].allowed = certain;
          }
          found = ExistsBeliefSystem(model, p, s, spec, Rationality::kAtInfoSet,
                                     options.mode);
        }
        if (found) {
          set[s] = true;
          if (options.record_witnesses) {
            solution.witnesses.push_back({k, p, s, *found, std::nullopt});
          }
        }
      }
      next.push_back(std::move(set));
    }
    current = next;
    solution.levels.push_back(current);
    solution.supports.push_back(std::move(notes));
  }
  Finish(&solution);
  return solution;
}

// Prudent rationalizability: survivors of level k-1 that are rational under
// a belief system whose belief at every information set reached by the
// opponents' level-(k-1) survivors has exactly those survivors (that reach
// it) as support.
inline LevelSolution PrudentRationalizability(
    const GameModel& model, int levels, const SolverOptions& options = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  LevelSolution solution;
  solution.concept_id = "prudent-rationalizability";
  solution.parameters["levels"] = levels;
  solution.parameters["mode"] = ModeName(options.mode);
  const int n = model.num_players();
  std::vector<Mask> current = AllStrategies(model);
  for (int k = 1; k <= levels; ++k) {
    std::vector<SupportSpec> specs(n);
    for (int p = 0; p < n; ++p) {
      Mask product = model.OpponentProduct(p, current);
      for (int info : model.InfoSetsOf(p)) {
        InfoSetSupport slot;
        if (AnyTrue(Intersect(product, model.OpponentReach(p, info)))) {
          slot.allowed = product;
          slot.full_support = true;
          slot.origin = "full support on level " + std::to_string(k - 1);
        } else {
          slot.allowed = Mask(model.NumOpponentProfiles(p), true);
          slot.origin = "unrestricted";
        }
        specs[p].at.push_back(std::move(slot));
      }
    }
    const auto prev = current;
    current = BeliefLevel(
        model, k, specs, Rationality::kAtInfoSet,
        [&prev](int p, int s) { return static_cast<bool>(prev[p][s]); },
        options, &solution);
    solution.levels.push_back(current);
  }
  Finish(&solution);
  return solution;
}

namespace solver_internal {

// Support specs whose allowed set at I is the product of the opponents'
// brackets [X_{j|I}].
inline std::vector<SupportSpec> BracketSpecs(
    const GameModel& model, const std::vector<Mask>& x, int source_level,
    const std::vector<BeliefSystem>* fallback) {
  const int n = model.num_players();
  std::vector<SupportSpec> specs(n);
  for (int p = 0; p < n; ++p) {
    const auto& sets = model.InfoSetsOf(p);
    for (std::size_t l = 0; l < sets.size(); ++l) {
      std::vector<Mask> brackets(n);
      for (int j = 0; j < n; ++j) {
        brackets[j] = j == p ? Mask(model.NumStrategies(j), true)
                             : model.Bracket(j, x[j], sets[l]);
      }
      InfoSetSupport slot;
      slot.allowed = model.OpponentProduct(p, brackets);
      slot.origin = "continuations of level " + std::to_string(source_level);
      if (fallback) slot.fallback = (*fallback)[p].at[l];
      specs[p].at.push_back(std::move(slot));
    }
  }
  return specs;
}

}  // namespace solver_internal

// Backward rationalizability: beliefs at I are certain of opponents'
// continuation strategies surviving level k-1; the continuation of s from
// every own information set must be rational there.
inline LevelSolution BackwardRationalizability(
    const GameModel& model, int levels, const SolverOptions& options = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  model.RequirePrecedence();
  LevelSolution solution;
  solution.concept_id = "backward-rationalizability";
  solution.parameters["levels"] = levels;
  solution.parameters["mode"] = ModeName(options.mode);
  const int n = model.num_players();
  std::vector<Mask> current = AllStrategies(model);
  for (int k = 1; k <= levels; ++k) {
    std::vector<SupportSpec> specs;
    if (k == 1) {
      for (int p = 0; p < n; ++p) specs.push_back(UnrestrictedSpec(model, p));
    } else {
      specs = BracketSpecs(model, current, k - 1, nullptr);
    }
    current = BeliefLevel(
        model, k, specs, Rationality::kContinuation,
        [](int, int) { return true; }, options, &solution);
    solution.levels.push_back(current);
  }
  Finish(&solution);
  return solution;
}

// Backward level-k thinking: level 1 uses the first-level belief systems with
// continuation rationality; level k is certain of opponents' level-(k-1)
// continuations.
inline LevelSolution BackwardLevelK(const GameModel& model,
                                    const std::vector<BeliefSystem>& first,
                                    int levels,
                                    const SolverOptions& options = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  model.RequirePrecedence();
  LevelSolution solution;
  solution.concept_id = "backward-level-k";
  solution.parameters["levels"] = levels;
  solution.parameters["mode"] = ModeName(options.mode);
  const int n = model.num_players();
  std::vector<Mask> current;
  for (int k = 1; k <= levels; ++k) {
    std::vector<SupportSpec> specs;
    if (k == 1) {
      for (int p = 0; p < n; ++p) {
        SupportSpec spec;
        for (const Belief& b : first[p].at) {
          spec.at.push_back({Mask(model.NumOpponentProfiles(p), false), b,
                             false, "fallback"});
        }
        specs.push_back(std::move(spec));
      }
    } else {
      specs = BracketSpecs(model, current, k - 1, &first);
    }
    current = BeliefLevel(
        model, k, specs, Rationality::kContinuation,
        [](int, int) { return true; }, options, &solution);
    solution.levels.push_back(current);
  }
  Finish(&solution);
  return solution;
}

// Rank of every node: terminal nodes 0, otherwise 1 + max rank of children.
// Requires perfect information, one mover per node and no chance.
inline std::vector<int> SubgameRanks(const GameModel& model) {
  const GameTree& tree = model.tree();
  for (const InfoSet& info : tree.info_sets()) {
    if (info.nodes.size() != 1) {
      throw UnsupportedGameError("information set '" + info.id +
                                 "' is not a singleton");
    }
  }
  for (const Node& nd : tree.nodes()) {
    if (nd.kind == NodeKind::kChance) {
      throw UnsupportedGameError("chance node '" + nd.id + "' present");
    }
    if (nd.kind == NodeKind::kDecision && nd.movers.size() != 1) {
      throw UnsupportedGameError("simultaneous moves at node '" + nd.id + "'");
    }
  }
  std::vector<int> rank(tree.num_nodes(), 0);
  // Children have larger depth; process deepest first.
  std::vector<int> order(tree.num_nodes());
  for (int i = 0; i < tree.num_nodes(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&tree](int a, int b) {
    return tree.node(a).depth > tree.node(b).depth;
  });
  for (int nd : order) {
    for (const Edge& e : tree.node(nd).edges) {
      rank[nd] = std::max(rank[nd], rank[e.child] + 1);
    }
  }
  return rank;
}

// k-level backward induction: solve all subgames of rank <= k keeping every
// maximising action; ties carry the set of achievable payoff vectors upward.
inline LevelSolution BackwardInductionK(const GameModel& model, int levels,
                                        const SolverOptions& = {}) {
  using namespace solver_internal;
  RequireLevels(levels);
  const GameTree& tree = model.tree();
  std::vector<int> rank = SubgameRanks(model);
  using Payoffs = std::vector<Rational>;
  std::vector<std::set<Payoffs>> achievable(tree.num_nodes());
  std::vector<std::vector<bool>> kept(tree.num_nodes());
  int max_rank = 0;
  for (int nd = 0; nd < tree.num_nodes(); ++nd) {
    max_rank = std::max(max_rank, rank[nd]);
    if (tree.node(nd).kind == NodeKind::kTerminal) {
      achievable[nd].insert(tree.node(nd).payoffs);
    }
  }
  for (int r = 1; r <= std::min(levels, max_rank); ++r) {
    for (int nd = 0; nd < tree.num_nodes(); ++nd) {
      if (rank[nd] != r) continue;
      const Node& node = tree.node(nd);
      int p = node.movers[0];
      // An action is kept when its best continuation payoff for the mover is
      // at least the worst continuation payoff of every other action.
      std::vector<Rational> best, worst;
      for (const Edge& e : node.edges) {
        const auto& options = achievable[e.child];
        Rational hi = options.begin()->at(p), lo = hi;
        for (const Payoffs& v : options) {
          hi = std::max(hi, v[p]);
          lo = std::min(lo, v[p]);
        }
        best.push_back(hi);
        worst.push_back(lo);
      }
      kept[nd].assign(node.edges.size(), false);
      for (std::size_t a = 0; a < node.edges.size(); ++a) {
        bool has_rival = false;
        Rational needed;  // worst continuation payoff of the best rival
        for (std::size_t b = 0; b < node.edges.size(); ++b) {
          if (b == a) continue;
          if (!has_rival || worst[b] > needed) needed = worst[b];
          has_rival = true;
        }
        kept[nd][a] = !has_rival || best[a] >= needed;
        if (!kept[nd][a]) continue;
        for (const Payoffs& v : achievable[node.edges[a].child]) {
          if (!has_rival || v[p] >= needed) achievable[nd].insert(v);
        }
      }
    }
  }
  LevelSolution solution;
  solution.concept_id = "backward-induction";
  solution.parameters["levels"] = levels;
  for (int k = 1; k <= levels; ++k) {
    std::vector<Mask> sets;
    for (int p = 0; p < model.num_players(); ++p) {
      Mask set(model.NumStrategies(p), false);
      for (int s = 0; s < model.NumStrategies(p); ++s) {
        bool ok = true;
        const auto& own = model.InfoSetsOf(p);
        for (std::size_t l = 0; l < own.size() && ok; ++l) {
          int nd = tree.info_set(own[l]).nodes[0];
          if (rank[nd] > k) continue;
          // Info-set action order equals the node's action order here.
          const std::string& label =
              tree.info_set(own[l]).actions[model.Action(p, s, l)];
          const auto& acts = tree.node(nd).actions[0];
          int a = static_cast<int>(std::find(acts.begin(), acts.end(), label) -
                                   acts.begin());
          for (std::size_t e = 0; e < tree.node(nd).edges.size(); ++e) {
            if (tree.node(nd).edges[e].profile[0] == a && !kept[nd][e]) {
              ok = false;
            }
          }
        }
        set[s] = ok;
      }
      sets.push_back(std::move(set));
    }
    solution.levels.push_back(std::move(sets));
  }
  Finish(&solution);
  return solution;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline Json BeliefToJson(const GameModel& model, int p, const Belief& belief) {
  Json out = Json::array();
  for (const auto& [t, prob] : belief.mass) {
    out.push_back({{"profile", model.OpponentLabels(p, t)},
                   {"p", FormatRational(prob)}});
  }
  return out;
}

inline Belief BeliefFromJson(const GameModel& model, int p, const Json& doc) {
  if (!doc.is_array()) throw std::invalid_argument("belief must be an array");
  std::vector<std::pair<int, Rational>> weights;
  for (const Json& entry : doc) {
    std::vector<std::string> labels;
    const Json& prof = entry.at("profile");
    if (prof.is_string()) {
      labels.push_back(prof.get<std::string>());
    } else {
      labels = prof.get<std::vector<std::string>>();
    }
    weights.emplace_back(model.ParseOpponents(p, labels),
                         ParseRational(entry.at("p").get<std::string>()));
  }
  return MakeBelief(weights);
}

inline Json BeliefSystemToJson(const GameModel& model,
                               const BeliefSystem& system) {
  Json sets = Json::array();
  const auto& own = model.InfoSetsOf(system.player);
  for (std::size_t l = 0; l < own.size(); ++l) {
    sets.push_back({{"info_set", model.tree().info_set(own[l]).id},
                    {"belief", BeliefToJson(model, system.player,
                                            system.at[l])}});
  }
  return {{"player", model.tree().player_id(system.player)},
          {"info_sets", sets}};
}

// Info sets missing from the document default to the uniform belief over the
// reach set.
inline BeliefSystem BeliefSystemFromJson(const GameModel& model, int p,
                                         const Json& doc) {
  BeliefSystem system = UniformSystem(model, p);
  const Json& sets = doc.at("info_sets");
  for (const Json& entry : sets) {
    int info = model.tree().InfoSetIndex(entry.at("info_set").get<std::string>());
    if (model.Owner(info) != p) {
      throw std::invalid_argument("information set '" +
                                  model.tree().info_set(info).id +
                                  "' does not belong to player '" +
                                  model.tree().player_id(p) + "'");
    }
    Belief b = BeliefFromJson(model, p, entry.at("belief"));
    RequireBeliefReaches(model, info, b);
    system.at[model.LocalIndex(info)] = b;
  }
  return system;
}

inline Json LevelSolutionToJson(const GameModel& model,
                                const LevelSolution& solution) {
  Json doc;
  doc["concept"] = solution.concept_id;
  doc["parameters"] = solution.parameters;
  Json levels = Json::array();
  for (int k = 1; k <= solution.num_levels(); ++k) {
    Json players = Json::array();
    for (int p = 0; p < model.num_players(); ++p) {
      Json strategies = Json::array();
      for (int s : MaskToIndices(solution.Set(k, p))) {
        strategies.push_back(model.StrategyLabel(p, s));
      }
      Json entry = {{"player", model.tree().player_id(p)},
                    {"strategies", strategies},
                    {"empty", solution.Empty(k, p)}};
      if (static_cast<int>(solution.supports.size()) >= k) {
        Json supports = Json::array();
        const auto& own = model.InfoSetsOf(p);
        for (std::size_t l = 0; l < own.size(); ++l) {
          supports.push_back(
              {{"info_set", model.tree().info_set(own[l]).id},
               {"support", solution.supports[k - 1][p][l]}});
        }
        entry["supports"] = supports;
      }
      players.push_back(entry);
    }
    levels.push_back({{"level", k}, {"players", players}});
  }
  doc["levels"] = levels;
  doc["cycle"] = solution.cycle
                     ? Json{{"start", solution.cycle->start},
                            {"period", solution.cycle->period}}
                     : Json(nullptr);
  doc["fixed_point"] =
      solution.fixed_point ? Json(*solution.fixed_point) : Json(nullptr);
  if (!solution.witnesses.empty()) {
    Json witnesses = Json::array();
    for (const Witness& w : solution.witnesses) {
      Json entry = {{"level", w.level},
                    {"player", model.tree().player_id(w.player)},
                    {"strategy", model.StrategyLabel(w.player, w.strategy)}};
      if (w.system) entry["belief_system"] = BeliefSystemToJson(model, *w.system);
      if (w.belief) entry["belief"] = BeliefToJson(model, w.player, *w.belief);
      witnesses.push_back(entry);
    }
    doc["witnesses"] = witnesses;
  }
  return doc;
}

inline LevelSolution LevelSolutionFromJson(const GameModel& model,
                                           const Json& doc) {
  LevelSolution solution;
  solution.concept_id = doc.at("concept").get<std::string>();
  solution.parameters = doc.at("parameters");
  bool any_supports = false;
  for (const Json& level : doc.at("levels")) {
    std::vector<Mask> sets(model.num_players());
    std::vector<std::vector<std::string>> notes(model.num_players());
    for (const Json& entry : level.at("players")) {
      int p = model.tree().PlayerIndex(entry.at("player").get<std::string>());
      sets[p] = Mask(model.NumStrategies(p), false);
      for (const Json& label : entry.at("strategies")) {
        sets[p][model.ParseStrategy(p, label.get<std::string>())] = true;
      }
      if (entry.contains("supports")) {
        any_supports = true;
        for (const Json& s : entry.at("supports")) {
          notes[p].push_back(s.at("support").get<std::string>());
        }
      }
    }
    solution.levels.push_back(std::move(sets));
    if (any_supports) solution.supports.push_back(std::move(notes));
  }
  if (!doc.at("cycle").is_null()) {
    solution.cycle = Cycle{doc["cycle"].at("start").get<int>(),
                           doc["cycle"].at("period").get<int>()};
  }
  if (!doc.at("fixed_point").is_null()) {
    solution.fixed_point = doc["fixed_point"].get<int>();
  }
  if (doc.contains("witnesses")) {
    for (const Json& w : doc["witnesses"]) {
      Witness witness;
      witness.level = w.at("level").get<int>();
      witness.player = model.tree().PlayerIndex(w.at("player").get<std::string>());
      witness.strategy =
          model.ParseStrategy(witness.player, w.at("strategy").get<std::string>());
      if (w.contains("belief_system")) {
        witness.system =
            BeliefSystemFromJson(model, witness.player, w["belief_system"]);
      }
      if (w.contains("belief")) {
        witness.belief = BeliefFromJson(model, witness.player, w["belief"]);
      }
      solution.witnesses.push_back(std::move(witness));
    }
  }
  return solution;
}

}  // namespace efsolve
