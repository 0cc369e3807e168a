#include <gtest/gtest.h>

#include "clsim/replay.hpp"

using namespace clsim;

TEST(Replay, ChainTrailsAfterPullDown) {
  ReplayResult r = replay_figure2();
  const ReplayStep& pulled = r.steps.at(2);
  EXPECT_EQ(pulled.trails.at("A").out, (std::set<std::string>{"B"}));
  EXPECT_EQ(pulled.trails.at("B").out, (std::set<std::string>{"C"}));
  EXPECT_TRUE(pulled.holds.at("C"));
  const ReplayStep& evicted = r.steps.back();
  EXPECT_TRUE(evicted.holds.at("B"));
  EXPECT_TRUE(evicted.trails.at("B").out.empty());
  EXPECT_EQ(evicted.trails.count("C"), 0u);
  EXPECT_FALSE(r.lines.empty());
}
