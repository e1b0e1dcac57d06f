#pragma once

// Randomised property and oracle checks shared by the gtest suites and the
// acceptance runner. Each check generates `count` instances from a seed and
// reports how many violate the property.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "efsolve/efsolve.hpp"
#include "test_support.hpp"

namespace efsolve::testing {

struct CheckReport {
  int instances = 0;
  int counterexamples = 0;
  std::vector<std::string> details;  // first few failures

  bool ok() const { return counterexamples == 0 && instances > 0; }
  void Fail(const std::string& what) {
    ++counterexamples;
    if (details.size() < 5) details.push_back(what);
  }
  std::string Summary() const {
    std::ostringstream out;
    out << instances << " instances, " << counterexamples << " counterexamples";
    for (const std::string& d : details) out << "; " << d;
    return out.str();
  }
};

// Size bounds for generated trees; larger draws are redrawn so that exact LP
// work stays small.
inline constexpr std::int64_t kMaxTreeProfiles = 200;
inline constexpr int kMaxTreeStrategies = 48;
// Tighter bound for the Fourier-Motzkin oracle suites.
inline constexpr int kMaxOracleStrategies = 12;

inline GameModel RandomMatrixModel(Rng& rng) {
  return GameModel(
      RandomMatrixGame(rng, Uniform(rng, 1, 4), Uniform(rng, 1, 4)));
}

// Random tree with depth <= 3 and branching <= 3 whose model is small.
// `need_precedence` redraws trees without an information-set precedence
// relation (required by the backward concepts).
inline GameModel RandomTreeModel(Rng& rng, bool need_precedence = false,
                                 int max_strategies = kMaxTreeStrategies) {
  while (true) {
    TreeOptions opt;
    opt.max_depth = 3;
    opt.max_branch = 3;
    opt.chance = Uniform(rng, 0, 3) == 0;
    opt.simultaneous = Uniform(rng, 0, 3) == 0;
    opt.imperfect = Uniform(rng, 0, 1) == 0;
    GameTree tree = RandomTree(rng, opt);
    if (!tree.validation().ok()) continue;
    try {
      GameModel model(tree);
      if (model.NumProfiles() > kMaxTreeProfiles) continue;
      bool small = true;
      for (int p = 0; p < model.num_players(); ++p) {
        small = small && model.NumStrategies(p) <= max_strategies;
      }
      if (!small) continue;
      if (need_precedence && !model.PrecedenceProblem().empty()) continue;
      return model;
    } catch (const std::exception&) {
      continue;
    }
  }
}

inline std::string Describe(const GameModel& model) {
  return model.tree().ToJson().dump();
}

// Random normal-form first-level beliefs: full support or a point belief.
inline std::vector<Belief> RandomNormalFormBeliefs(Rng& rng,
                                                   const GameModel& model,
                                                   bool full_support) {
  std::vector<Belief> beliefs;
  for (int p = 0; p < model.num_players(); ++p) {
    int n = model.NumOpponentProfiles(p);
    if (full_support) {
      beliefs.push_back(RandomFullSupportBelief(rng, n));
    } else {
      beliefs.push_back(PointBelief(Uniform(rng, 0, n - 1)));
    }
  }
  return beliefs;
}

// L^k(b1) is contained in R^k for every k <= levels.
inline CheckReport CheckLevelKWithinRationalizability(std::uint64_t seed,
                                                      int count,
                                                      int levels = 5) {
  Rng rng(seed);
  CheckReport report;
  for (int i = 0; i < count; ++i) {
    GameModel model = RandomMatrixModel(rng);
    auto beliefs = RandomNormalFormBeliefs(rng, model, Uniform(rng, 0, 1));
    LevelSolution l = NormalFormLevelK(model, beliefs, levels);
    LevelSolution r = Rationalizability(model, levels);
    ++report.instances;
    for (int k = 1; k <= levels; ++k) {
      for (int p = 0; p < model.num_players(); ++p) {
        if (!IsSubset(l.Set(k, p), r.Set(k, p))) {
          report.Fail("level " + std::to_string(k) + " " + Describe(model));
        }
      }
    }
  }
  return report;
}

// Every strategy surviving rationalizability is level-1 under the first-level
// belief that rationalizes it against the surviving opponent strategies.
inline CheckReport CheckRationalizableIsLevelOne(std::uint64_t seed,
                                                 int count) {
  Rng rng(seed);
  CheckReport report;
  for (int i = 0; i < count; ++i) {
    GameModel model = RandomMatrixModel(rng);
    // Each round removes at least one strategy, so 8 levels reach R^infinity
    // in games of at most 4x4.
    const int levels = 8;
    LevelSolution r = Rationalizability(model, levels);
    ++report.instances;
    std::vector<Mask> limit = r.levels.back();
    for (int p = 0; p < model.num_players(); ++p) {
      Mask allowed = model.OpponentProduct(p, limit);
      for (int s : MaskToIndices(limit[p])) {
        auto witness = solver_internal::NormalFormBelief(model, p, s, allowed);
        if (!witness) {
          report.Fail("no witness " + Describe(model));
          continue;
        }
        std::vector<Belief> beliefs = UniformNormalFormBeliefs(model);
        beliefs[p] = *witness;
        LevelSolution l = NormalFormLevelK(model, beliefs, 1);
        if (!l.Set(1, p)[s]) report.Fail("not level 1 " + Describe(model));
      }
    }
  }
  return report;
}

// Conditioned full-support first-level beliefs for every player.
struct ConditionedBeliefs {
  std::vector<Belief> normal_form;
  std::vector<BeliefSystem> systems;
};

inline ConditionedBeliefs RandomConditionedBeliefs(Rng& rng,
                                                   const GameModel& model) {
  ConditionedBeliefs out;
  out.normal_form = RandomNormalFormBeliefs(rng, model, true);
  for (int p = 0; p < model.num_players(); ++p) {
    out.systems.push_back(ConditionedSystem(model, p, out.normal_form[p]));
  }
  return out;
}

// Strong level-1 equals normal-form level-1 for a full-support normal-form
// belief and the belief system obtained from it by conditioning.
inline CheckReport CheckStrongLevelOneEqualsNormalForm(std::uint64_t seed,
                                                       int count) {
  Rng rng(seed);
  CheckReport report;
  for (int i = 0; i < count; ++i) {
    GameModel model = RandomTreeModel(rng);
    ConditionedBeliefs b = RandomConditionedBeliefs(rng, model);
    LevelSolution strong = StrongLevelK(model, b.systems, 1);
    LevelSolution normal = NormalFormLevelK(model, b.normal_form, 1);
    ++report.instances;
    if (strong.levels[0] != normal.levels[0]) {
      report.Fail(Describe(model));
    }
  }
  return report;
}

// Outcomes of strong level-k lie within the outcomes of normal-form level-k
// under conditioned full-support first-level beliefs.
inline CheckReport CheckStrongOutcomesRefine(std::uint64_t seed, int count,
                                             int levels = 5) {
  Rng rng(seed);
  CheckReport report;
  for (int i = 0; i < count; ++i) {
    GameModel model = RandomTreeModel(rng);
    ConditionedBeliefs b = RandomConditionedBeliefs(rng, model);
    LevelSolution strong = StrongLevelK(model, b.systems, levels);
    LevelSolution normal = NormalFormLevelK(model, b.normal_form, levels);
    ++report.instances;
    for (int k = 1; k <= levels; ++k) {
      if (!Subset(Outcomes(model, strong.levels[k - 1]),
                  Outcomes(model, normal.levels[k - 1]))) {
        report.Fail("level " + std::to_string(k) + " " + Describe(model));
        break;
      }
    }
  }
  return report;
}

// Strong level-1 and backward level-1 reach the same outcomes under the same
// first-level belief systems (uniform on even instances, conditioned random
// full-support beliefs on odd ones).
inline CheckReport CheckLevelOneOutcomeEquivalence(std::uint64_t seed,
                                                   int count) {
  Rng rng(seed);
  CheckReport report;
  for (int i = 0; i < count; ++i) {
    GameModel model = RandomTreeModel(rng, /*need_precedence=*/true);
    std::vector<BeliefSystem> systems =
        i % 2 == 0 ? UniformBeliefSystems(model)
                   : RandomConditionedBeliefs(rng, model).systems;
    LevelSolution strong = StrongLevelK(model, systems, 1);
    LevelSolution backward = BackwardLevelK(model, systems, 1);
    ++report.instances;
    if (Outcomes(model, strong.levels[0]) !=
        Outcomes(model, backward.levels[0])) {
      report.Fail(Describe(model));
    }
  }
  return report;
}

// Alternates matrix games and small trees.
inline GameModel RandomSmallInstance(Rng& rng, int i) {
  return i % 2 == 0 ? RandomMatrixModel(rng)
                    : RandomTreeModel(rng, false, kMaxOracleStrategies);
}

// Rationalizability agrees level by level with iterated strict dominance
// computed by Fourier-Motzkin elimination on an independently built normal
// form.
inline CheckReport CheckRationalizabilityOracle(std::uint64_t seed, int count,
                                                int levels = 5) {
  Rng rng(seed);
  CheckReport report;
  for (int i = 0; i < count; ++i) {
    GameModel model = RandomSmallInstance(rng, i);
    LevelSolution r = Rationalizability(model, levels);
    auto oracle = OracleIteratedDominance(model, levels, /*strict=*/true);
    ++report.instances;
    if (r.levels != oracle) report.Fail(Describe(model));
  }
  return report;
}

// Prudent rationalizability agrees level by level with iterated admissibility
// computed by the oracle.
inline CheckReport CheckPrudentOracle(std::uint64_t seed, int count,
                                      int levels = 5) {
  Rng rng(seed);
  CheckReport report;
  for (int i = 0; i < count; ++i) {
    GameModel model = RandomSmallInstance(rng, i);
    LevelSolution prudent = PrudentRationalizability(model, levels);
    auto oracle = OracleIteratedDominance(model, levels, /*strict=*/false);
    ++report.instances;
    if (prudent.levels != oracle) report.Fail(Describe(model));
  }
  return report;
}

}  // namespace efsolve::testing
