// Walks through the built-in four-stage centipede game: lists each player's
// strategies, then prints several concepts side by side and the belief that
// justifies one level-1 strategy.

#include <iostream>
#include <string>
#include <vector>

#include "efsolve/efsolve.hpp"

int main() {
  using namespace efsolve;

  GameModel model(LoadCorpusGame("centipede"));
  for (int p = 0; p < model.num_players(); ++p) {
    std::cout << "player " << model.tree().player_id(p) << ":";
    for (int s = 0; s < model.NumStrategies(p); ++s) {
      std::cout << " " << model.StrategyLabel(p, s);
    }
    std::cout << "\n";
  }
  std::cout << "\n";

  SolverOptions options;
  options.record_witnesses = true;
  std::vector<LevelSolution> solutions = {
      StrongLevelK(model, UniformBeliefSystems(model), 4, options),
      StrongRationalizability(model, 4),
      BackwardRationalizability(model, 4),
      BackwardInductionK(model, 4)};
  std::cout << RenderTable(model, solutions) << "\n";

  // The first recorded witness: a strategy and the belief system under which
  // it is a best reply at every information set it reaches.
  const LevelSolution& strong = solutions.front();
  if (!strong.witnesses.empty()) {
    const Witness& w = strong.witnesses.front();
    std::cout << "level " << w.level << " witness for "
              << model.StrategyLabel(w.player, w.strategy) << ":\n";
    const auto& own = model.InfoSetsOf(w.player);
    for (std::size_t i = 0; i < own.size(); ++i) {
      const Belief& belief = w.system->at[i];
      if (belief.mass.empty()) continue;
      std::cout << "  at " << model.tree().info_set(own[i]).id << ":";
      for (const auto& [t, q] : belief.mass) {
        std::string profile;
        for (const std::string& label : model.OpponentLabels(w.player, t)) {
          if (label.empty()) continue;
          profile += (profile.empty() ? "" : "+") + label;
        }
        std::cout << " " << profile << "=" << FormatRational(q);
      }
      std::cout << "\n";
    }
  }
  return 0;
}
