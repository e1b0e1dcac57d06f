#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "efsolve/efsolve.hpp"

namespace efsolve {
namespace {

GameModel Corpus(const std::string& id) { return GameModel(LoadCorpusGame(id)); }

TEST(ParseStrategySetTest, AcceptsTableNotation) {
  GameModel m = Corpus("centipede");
  EXPECT_EQ(CountTrue(ParseStrategySet(m, 0, "S_1")), 4);
  EXPECT_EQ(CountTrue(ParseStrategySet(m, 1, "S2")), 4);
  EXPECT_EQ(CountTrue(ParseStrategySet(m, 0, "{}")), 0);
  EXPECT_EQ(CountTrue(ParseStrategySet(m, 0, "∅")), 0);
  Mask o1 = ParseStrategySet(m, 0, "{(O1,*)}");
  EXPECT_EQ(o1, ParseStrategySet(m, 0, "{(O1,o1), (O1,c1)}"));
  EXPECT_EQ(CountTrue(o1), 2);
  EXPECT_EQ(ParseStrategySet(m, 0, " (C1,c1) "),
            ParseStrategySet(m, 0, "{(C1,c1)}"));
  EXPECT_EQ(CountTrue(ParseStrategySet(m, 0, "{(*,*)}")), 4);

  GameModel bos = Corpus("bos1");
  EXPECT_EQ(ParseStrategySet(bos, 1, "B"), (Mask{true, false}));
  EXPECT_EQ(ParseStrategySet(bos, 1, "{B,S}"), (Mask{true, true}));
}

TEST(ParseStrategySetTest, RejectsUnknownPatterns) {
  GameModel m = Corpus("centipede");
  EXPECT_THROW(ParseStrategySet(m, 0, "{(X1,*)}"), std::invalid_argument);
  EXPECT_THROW(ParseStrategySet(m, 0, "{(O1,o1)"), std::invalid_argument);
  EXPECT_THROW(ParseStrategySet(m, 0, "O1"), std::invalid_argument);
  EXPECT_THROW(ParseStrategySet(m, 0, "S_2"), std::invalid_argument);
}

TEST(FormatStrategySetTest, CollapsesWildcardsAndFullSets) {
  GameModel m = Corpus("centipede");
  EXPECT_EQ(FormatStrategySet(m, 0, Mask(4, true), true), "S_1");
  EXPECT_EQ(FormatStrategySet(m, 1, Mask(4, false), true), "∅");
  EXPECT_EQ(FormatStrategySet(m, 0, ParseStrategySet(m, 0, "{(O1,*)}"), true),
            "{(O1,*)}");
  EXPECT_EQ(FormatStrategySet(m, 0, ParseStrategySet(m, 0, "{(O1,*)}"), false),
            "{(O1,o1),(O1,c1)}");
  EXPECT_EQ(FormatStrategySet(m, 0, ParseStrategySet(m, 0, "{(*,c1)}"), true),
            "{(*,c1)}");
  GameModel bos = Corpus("bos1");
  EXPECT_EQ(FormatStrategySet(bos, 0,
                              ParseStrategySet(bos, 0, "{(In,B),(Out,S),(Out,B)}"),
                              true),
            "{(Out,*),(In,B)}");
}

// Every subset of every corpus player's strategies survives a round trip
// through both formats.
TEST(FormatStrategySetTest, RoundTripsEverySubset) {
  for (const std::string& id : CorpusIds()) {
    GameModel m = Corpus(id);
    for (int p = 0; p < m.num_players(); ++p) {
      const int n = m.NumStrategies(p);
      if (n > 12) continue;
      for (int bits = 0; bits < (1 << n); ++bits) {
        Mask set(n);
        for (int s = 0; s < n; ++s) set[s] = (bits >> s) & 1;
        for (bool collapse : {true, false}) {
          std::string text = FormatStrategySet(m, p, set, collapse);
          ASSERT_EQ(ParseStrategySet(m, p, text), set) << id << " " << text;
        }
      }
    }
  }
}

TEST(RenderTest, DisplayWidthCountsCodePoints) {
  EXPECT_EQ(DisplayWidth("abc"), 3u);
  EXPECT_EQ(DisplayWidth("∅"), 1u);
  EXPECT_EQ(DisplayWidth("{∅}"), 3u);
}

TEST(RenderTest, AlignedColumnsAndRule) {
  std::string text = RenderAligned({{"a", "bb"}, {"∅", "c"}, {"ddd", "e"}});
  EXPECT_EQ(text,
            "a   | bb\n"
            "--------\n"
            "∅   | c\n"
            "ddd | e\n");
}

TEST(RenderTest, CsvQuoting) {
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"x\""), "\"say \"\"x\"\"\"");
}

TEST(RenderTest, TableShowsLevelsAndCycles) {
  GameModel m = Corpus("matching-pennies-variant");
  LevelSolution s = NormalFormLevelK(m, UniformNormalFormBeliefs(m), 5);
  std::string text = RenderTable(m, {s});
  EXPECT_NE(text.find("Level"), std::string::npos);
  EXPECT_NE(text.find("cycle of period 4 from level 1"), std::string::npos)
      << text;
  // Header, rule and five levels, then the note.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
}

TEST(RenderTest, CsvListsStrategiesInFull) {
  GameModel m = Corpus("bos1");
  LevelSolution s = StrongRationalizability(m, 2);
  std::string csv = RenderCsv(m, {s});
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "concept,level,player,empty,strategies");
  EXPECT_NE(csv.find("strong-rationalizability,1,1,false,"
                     "\"(Out,B);(Out,S);(In,B)\""),
            std::string::npos)
      << csv;
  EXPECT_NE(csv.find("strong-rationalizability,2,2,false,B\n"),
            std::string::npos)
      << csv;
}

TEST(RenderTest, JsonRoundTripsThroughSolutionReader) {
  GameModel m = Corpus("bos3");
  std::vector<LevelSolution> sols = {
      StrongLevelK(m, UniformBeliefSystems(m), 4),
      DeltaRationalizability(m, UniformDelta(m), 3, DeltaVariant::kStandard)};
  Json doc = Json::parse(RenderJson(m, sols));
  EXPECT_EQ(doc["game"], m.tree().name());
  ASSERT_EQ(doc["solutions"].size(), 2u);
  for (std::size_t i = 0; i < sols.size(); ++i) {
    LevelSolution back = LevelSolutionFromJson(m, doc["solutions"][i]);
    EXPECT_EQ(back.levels, sols[i].levels);
    EXPECT_EQ(back.cycle, sols[i].cycle);
  }
}

}  // namespace
}  // namespace efsolve
