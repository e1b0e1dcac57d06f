#pragma once

// Named solution concepts and their parameters.
//
// A ConceptSpec selects one solver by id and carries the concept-specific
// inputs (first-level beliefs, Delta restriction, variant). RunConcept
// dispatches to the solver and records the parameters in the result so a
// LevelSolution is self-describing.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "efsolve/beliefs.hpp"
#include "efsolve/model.hpp"
#include "efsolve/solvers.hpp"

namespace efsolve {

class UnknownConceptError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ConceptInfo {
  const char* id;
  const char* title;
  bool uses_beliefs;  // anchored by first-level beliefs
  bool nested;        // reduction procedure: sets shrink across levels
};

inline constexpr ConceptInfo kConcepts[] = {
    {"normal-form-level-k", "Normal-form level-k", true, false},
    {"rationalizability", "k-level rationalizability", false, true},
    {"strong-level-k", "Strong level-k", true, false},
    {"strong-rationalizability", "k-level strong rationalizability", false,
     true},
    {"delta-rationalizability", "k-level Delta-rationalizability", false,
     true},
    {"iterated-admissibility", "k-iterated admissibility", false, true},
    {"prudent-rationalizability", "k-level prudent rationalizability", false,
     true},
    {"backward-rationalizability", "k-level backward rationalizability", false,
     true},
    {"backward-level-k", "Backward level-k", true, false},
    {"backward-induction", "k-level backward induction", false, false},
};

inline const ConceptInfo& FindConcept(const std::string& id) {
  for (const ConceptInfo& info : kConcepts) {
    if (id == info.id) return info;
  }
  throw UnknownConceptError("unknown concept '" + id + "'");
}

struct ConceptSpec {
  std::string id;
  // First-level beliefs; players without an entry use the uniform belief.
  // Extensive-form concepts read `systems`, normal-form level-k reads
  // `normal_form`.
  std::vector<std::optional<BeliefSystem>> systems;
  std::vector<std::optional<Belief>> normal_form;
  std::string beliefs_name = "uniform";
  // Delta restriction, one entry per player (delta-rationalizability only).
  std::vector<DeltaRestriction> delta;
  std::string delta_name;
  DeltaVariant variant = DeltaVariant::kStandard;
};

inline std::string VariantName(DeltaVariant v) {
  return v == DeltaVariant::kStandard ? "standard" : "modified";
}

inline DeltaVariant ParseVariant(const std::string& text) {
  if (text == "standard") return DeltaVariant::kStandard;
  if (text == "modified") return DeltaVariant::kModified;
  throw std::invalid_argument("unknown Delta variant '" + text +
                              "' (expected standard or modified)");
}

// Delta_i = {uniform belief system} for every player.
inline std::vector<DeltaRestriction> UniformDelta(const GameModel& model) {
  std::vector<DeltaRestriction> delta;
  for (int p = 0; p < model.num_players(); ++p) {
    delta.push_back({false, {UniformSystem(model, p)}});
  }
  return delta;
}

inline std::vector<DeltaRestriction> UnrestrictedDelta(const GameModel& model) {
  return std::vector<DeltaRestriction>(model.num_players(),
                                       DeltaRestriction{true, {}});
}

// Beliefs document:
//   {"systems": [<belief system>...],
//    "normal_form": [{"player": id, "belief": <belief>}...]}
// Either key may be omitted.
inline void LoadBeliefs(const GameModel& model, const Json& doc,
                        ConceptSpec* spec) {
  const int n = model.num_players();
  spec->systems.assign(n, std::nullopt);
  spec->normal_form.assign(n, std::nullopt);
  if (doc.contains("systems")) {
    for (const Json& entry : doc.at("systems")) {
      int p = model.tree().PlayerIndex(entry.at("player").get<std::string>());
      spec->systems[p] = BeliefSystemFromJson(model, p, entry);
    }
  }
  if (doc.contains("normal_form")) {
    for (const Json& entry : doc.at("normal_form")) {
      int p = model.tree().PlayerIndex(entry.at("player").get<std::string>());
      spec->normal_form[p] = BeliefFromJson(model, p, entry.at("belief"));
    }
  }
  spec->beliefs_name = "custom";
}

// Delta document:
//   {"players": [{"player": id, "unrestricted": true} |
//                {"player": id, "systems": [<belief system>...]}]}
// Players without an entry are unrestricted.
inline std::vector<DeltaRestriction> LoadDelta(const GameModel& model,
                                               const Json& doc) {
  std::vector<DeltaRestriction> delta = UnrestrictedDelta(model);
  for (const Json& entry : doc.at("players")) {
    int p = model.tree().PlayerIndex(entry.at("player").get<std::string>());
    if (entry.value("unrestricted", false)) continue;
    DeltaRestriction r;
    for (const Json& system : entry.at("systems")) {
      Json tagged = system;
      tagged["player"] = model.tree().player_id(p);
      r.systems.push_back(BeliefSystemFromJson(model, p, tagged));
    }
    if (r.systems.empty()) {
      throw std::invalid_argument("Delta restriction for player '" +
                                  model.tree().player_id(p) +
                                  "' must list at least one belief system");
    }
    delta[p] = std::move(r);
  }
  return delta;
}

inline LevelSolution RunConcept(const GameModel& model, const ConceptSpec& spec,
                                int levels, const SolverOptions& options = {}) {
  const ConceptInfo& info = FindConcept(spec.id);
  const int n = model.num_players();
  auto systems = [&] {
    std::vector<BeliefSystem> out = UniformBeliefSystems(model);
    for (int p = 0; p < n && p < static_cast<int>(spec.systems.size()); ++p) {
      if (spec.systems[p]) out[p] = *spec.systems[p];
    }
    return out;
  };
  auto beliefs = [&] {
    std::vector<Belief> out = UniformNormalFormBeliefs(model);
    for (int p = 0; p < n && p < static_cast<int>(spec.normal_form.size());
         ++p) {
      if (spec.normal_form[p]) out[p] = *spec.normal_form[p];
    }
    return out;
  };

  LevelSolution solution;
  const std::string id = info.id;
  if (id == "normal-form-level-k") {
    solution = NormalFormLevelK(model, beliefs(), levels, options);
  } else if (id == "rationalizability") {
    solution = Rationalizability(model, levels, options);
  } else if (id == "strong-level-k") {
    solution = StrongLevelK(model, systems(), levels, options);
  } else if (id == "strong-rationalizability") {
    solution = StrongRationalizability(model, levels, options);
  } else if (id == "delta-rationalizability") {
    if (static_cast<int>(spec.delta.size()) != n) {
      throw std::invalid_argument(
          "delta-rationalizability requires a Delta restriction");
    }
    solution = DeltaRationalizability(model, spec.delta, levels, spec.variant,
                                      options);
  } else if (id == "iterated-admissibility") {
    solution = IteratedAdmissibility(model, levels, options);
  } else if (id == "prudent-rationalizability") {
    solution = PrudentRationalizability(model, levels, options);
  } else if (id == "backward-rationalizability") {
    solution = BackwardRationalizability(model, levels, options);
  } else if (id == "backward-level-k") {
    solution = BackwardLevelK(model, systems(), levels, options);
  } else {
    solution = BackwardInductionK(model, levels, options);
  }

  solution.concept_id = id;
  Json params = {{"levels", levels}, {"mode", ModeName(options.mode)}};
  if (info.uses_beliefs) params["beliefs"] = spec.beliefs_name;
  if (id == "delta-rationalizability") {
    params["delta"] = spec.delta_name.empty() ? "custom" : spec.delta_name;
    params["variant"] = VariantName(spec.variant);
  }
  solution.parameters = params;
  return solution;
}

}  // namespace efsolve
