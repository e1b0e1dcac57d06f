#include <gtest/gtest.h>

#include <string>

#include "efsolve/corpus.hpp"
#include "efsolve/model.hpp"
#include "test_support.hpp"

namespace efsolve {
namespace {

using testing::Rng;

GameModel Centipede() { return GameModel(LoadCorpusGame("centipede")); }

TEST(GameModelTest, EnumeratesStrategiesInCanonicalOrder) {
  GameModel m = Centipede();
  ASSERT_EQ(m.NumStrategies(0), 4);
  ASSERT_EQ(m.NumStrategies(1), 4);
  EXPECT_EQ(m.StrategyLabel(0, 0), "(O1,o1)");
  EXPECT_EQ(m.StrategyLabel(0, 3), "(C1,c1)");
  for (int p = 0; p < 2; ++p) {
    for (int s = 0; s < m.NumStrategies(p); ++s) {
      EXPECT_EQ(m.ParseStrategy(p, m.StrategyLabel(p, s)), s);
      EXPECT_EQ(m.StrategyIndex(p, m.StrategyActions(p, s)), s);
    }
  }
  EXPECT_ANY_THROW(m.ParseStrategy(0, "(X,Y)"));
}

TEST(GameModelTest, SingleInfoSetPlayersUseBareLabels) {
  GameModel m(LoadCorpusGame("bos1"));
  EXPECT_EQ(m.NumStrategies(1), 2);
  EXPECT_EQ(m.StrategyLabel(1, 0), "B");
  EXPECT_EQ(m.ParseStrategy(1, "S"), 1);
  EXPECT_EQ(m.ParseStrategy(0, "(In,B)"), m.StrategyIndex(0, {1, 0}));
}

TEST(GameModelTest, CentipedeOutcomesAndPayoffs) {
  GameModel m = Centipede();
  int o = m.ParseStrategy(0, "(O1,o1)");
  int cc = m.ParseStrategy(0, "(C1,c1)");
  int t_oo = m.EncodeOpponents(0, {-1, m.ParseStrategy(1, "(O2,o2)")});
  int t_cc = m.EncodeOpponents(0, {-1, m.ParseStrategy(1, "(C2,c2)")});
  EXPECT_EQ(m.NormalForm(0)[o][t_cc], Rational(4));
  EXPECT_EQ(m.NormalForm(0)[cc][t_oo], Rational(2));
  EXPECT_EQ(m.NormalForm(0)[cc][t_cc], Rational(64));
  std::int64_t full = m.FullProfile(0, cc, t_cc);
  ASSERT_EQ(m.Outcome(full).size(), 1u);
  EXPECT_EQ(m.tree().node(m.Outcome(full)[0].first).id, "z5");
}

TEST(GameModelTest, ProfileEncodingRoundTrips) {
  GameModel m(LoadCorpusGame("cooper"));
  for (std::int64_t x = 0; x < m.NumProfiles(); ++x) {
    EXPECT_EQ(m.EncodeProfile(m.DecodeProfile(x)), x);
  }
  for (int p = 0; p < m.num_players(); ++p) {
    for (int t = 0; t < m.NumOpponentProfiles(p); ++t) {
      auto members = m.DecodeOpponents(p, t);
      EXPECT_EQ(members[p], -1);
      EXPECT_EQ(m.EncodeOpponents(p, members), t);
      EXPECT_EQ(m.ParseOpponents(p, m.OpponentLabels(p, t)), t);
    }
  }
}

TEST(GameModelTest, ReachSetsInCentipede) {
  GameModel m = Centipede();
  const GameTree& g = m.tree();
  int n3 = g.InfoSetOf(0, g.NodeIndex("n3"));
  // Player 1 reaches n3 only with C1; player 2 must play C2 first.
  const Mask& own = m.OwnReach(0, n3);
  EXPECT_FALSE(own[m.ParseStrategy(0, "(O1,o1)")]);
  EXPECT_TRUE(own[m.ParseStrategy(0, "(C1,o1)")]);
  const Mask& opp = m.OpponentReach(0, n3);
  EXPECT_FALSE(opp[m.EncodeOpponents(0, {-1, m.ParseStrategy(1, "(O2,c2)")})]);
  EXPECT_TRUE(opp[m.EncodeOpponents(0, {-1, m.ParseStrategy(1, "(C2,o2)")})]);
  EXPECT_EQ(m.OwnHistory(n3).size(), 1u);
  EXPECT_EQ(m.OwnParent(n3), g.InfoSetOf(0, g.NodeIndex("n1")));
  EXPECT_TRUE(m.PrecedenceProblem().empty());
  int n1 = g.InfoSetOf(0, g.NodeIndex("n1"));
  EXPECT_TRUE(m.Precedes(n1, n3));
  EXPECT_FALSE(m.Precedes(n3, n1));
}

TEST(GameModelTest, ReplacementsAgreeBeforeInfoSet) {
  GameModel m = Centipede();
  int n3 = m.tree().InfoSetOf(0, m.tree().NodeIndex("n3"));
  int s = m.ParseStrategy(0, "(C1,o1)");
  auto reps = m.Replacements(s, n3);
  ASSERT_EQ(reps.size(), 2u);
  for (int r : reps) EXPECT_EQ(m.Action(0, r, 0), m.Action(0, s, 0));
  EXPECT_EQ(m.ReachModify(m.ParseStrategy(0, "(O1,c1)"), n3),
            m.ParseStrategy(0, "(C1,c1)"));
}

TEST(GameModelTest, BracketKeepsContinuations) {
  GameModel m = Centipede();
  int n3 = m.tree().InfoSetOf(0, m.tree().NodeIndex("n3"));
  Mask x(4, false);
  x[m.ParseStrategy(0, "(O1,o1)")] = true;
  Mask b = m.Bracket(0, x, n3);
  EXPECT_TRUE(b[m.ParseStrategy(0, "(C1,o1)")]);
  EXPECT_TRUE(b[m.ParseStrategy(0, "(O1,o1)")]);
  EXPECT_FALSE(b[m.ParseStrategy(0, "(C1,c1)")]);
  EXPECT_EQ(CountTrue(m.Bracket(0, Mask(4, false), n3)), 4);
}

TEST(GameModelTest, NormalFormMatchesIndependentTreeWalk) {
  Rng rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    testing::TreeOptions opt;
    opt.chance = trial % 3 == 0;
    opt.simultaneous = trial % 4 == 0;
    opt.imperfect = trial % 2 == 0;
    opt.players = trial % 5 == 0 ? 3 : 2;
    GameTree tree = testing::RandomTree(rng, opt);
    if (!tree.validation().ok()) continue;
    GameModel m(tree);
    if (m.NumProfiles() > 5000) continue;
    auto oracle = testing::OracleNormalForm(m);
    for (int p = 0; p < m.num_players(); ++p) {
      ASSERT_EQ(m.NormalForm(p), oracle[p]) << tree.ToJson().dump();
    }
    // Outcome distributions are probability distributions.
    for (std::int64_t x = 0; x < m.NumProfiles(); ++x) {
      Rational total = 0;
      for (const auto& [z, q] : m.Outcome(x)) total += q;
      ASSERT_EQ(total, Rational(1));
    }
  }
}

TEST(GameModelTest, ChanceWeightsEnterExpectedPayoffs) {
  GameTree tree = GameTree::Builder({"1", "2"})
                      .Chance("r", {{"h", Rational(1, 3), "a"},
                                    {"t", Rational(2, 3), "z0"}})
                      .Decision("a", {"1"}, {{{"L"}, "z1"}, {{"R"}, "z2"}})
                      .Terminal("z0", {3, 0})
                      .Terminal("z1", {6, 1})
                      .Terminal("z2", {0, 1})
                      .Root("r")
                      .Build();
  GameModel m(tree);
  ASSERT_EQ(m.NumStrategies(1), 1);
  EXPECT_EQ(m.NormalForm(0)[0][0], Rational(4));  // 1/3*6 + 2/3*3
  EXPECT_EQ(m.NormalForm(0)[1][0], Rational(2));
  int info = m.InfoSetsOf(0)[0];
  EXPECT_EQ(m.ReachProbability(info)[0][0], Rational(1, 3));
}

TEST(GameModelTest, CapacityLimitsAreEnforced) {
  ModelLimits limits;
  limits.max_strategies = 3;
  EXPECT_THROW(GameModel(LoadCorpusGame("centipede"), limits), CapacityError);
  limits = {};
  limits.max_profiles = 10;
  EXPECT_THROW(GameModel(LoadCorpusGame("centipede"), limits), CapacityError);
}

}  // namespace
}  // namespace efsolve
