#include <gtest/gtest.h>

#include "clsim/policy.hpp"

using namespace clsim;
using namespace clsim::policy;

TEST(Policy, NamesRoundTrip) {
  for (auto k : {PolicyKind::LCE, PolicyKind::LCD, PolicyKind::MCD, PolicyKind::CLS})
    EXPECT_EQ(parse_policy(to_string(k)), k);
  EXPECT_FALSE(parse_policy("CLS"));
  EXPECT_FALSE(parse_policy("breadcrumbs"));
}

TEST(Policy, LceCachesEverywhere) {
  for (FlagR r : {FlagR::Hit, FlagR::Cached}) {
    EXPECT_TRUE(on_data(PolicyKind::LCE, false, r == FlagR::Hit, r, false).cache_here);
  }
}

TEST(Policy, LcdAndMcdCacheOnlyBelowHit) {
  for (auto k : {PolicyKind::LCD, PolicyKind::MCD}) {
    auto first = on_data(k, false, true, FlagR::Hit, false);
    EXPECT_TRUE(first.cache_here);
    EXPECT_TRUE(first.clear_hit_flag);
    EXPECT_FALSE(on_data(k, false, false, FlagR::Cached, false).cache_here);
  }
}

TEST(Policy, ClsWithoutTrailCachesAndRecords) {
  auto a = on_data(PolicyKind::CLS, false, true, FlagR::Hit, false);
  EXPECT_TRUE(a.cache_here);
  EXPECT_TRUE(a.clear_hit_flag);
  EXPECT_EQ(a.trail_ops, std::vector<TrailOp>{TrailOp::RecordCached});
}

TEST(Policy, ClsWithTrailPassesThrough) {
  auto a = on_data(PolicyKind::CLS, true, true, FlagR::Hit, false);
  EXPECT_FALSE(a.cache_here);
  EXPECT_FALSE(a.clear_hit_flag);
  EXPECT_EQ(a.trail_ops, (std::vector<TrailOp>{TrailOp::NotePushdown, TrailOp::MergeH}));
}

TEST(Policy, ClsCachedFlagIsPureForward) {
  auto a = on_data(PolicyKind::CLS, false, false, FlagR::Cached, false);
  EXPECT_FALSE(a.cache_here);
  EXPECT_TRUE(a.trail_ops.empty());
  EXPECT_TRUE(a.forward);
}

TEST(Policy, EvictedFlagRejectedByOnData) {
  EXPECT_THROW(on_data(PolicyKind::CLS, true, false, FlagR::Evicted, false), ProtocolViolation);
}

TEST(Policy, HitDeletion) {
  EXPECT_FALSE(on_hit(PolicyKind::LCE, false, false).delete_after_serve);
  EXPECT_FALSE(on_hit(PolicyKind::LCD, false, false).delete_after_serve);
  EXPECT_TRUE(on_hit(PolicyKind::MCD, false, false).delete_after_serve);
  EXPECT_FALSE(on_hit(PolicyKind::MCD, false, false, /*at_server=*/true).delete_after_serve);
  EXPECT_TRUE(on_hit(PolicyKind::CLS, false, false).delete_after_serve);
  EXPECT_FALSE(on_hit(PolicyKind::CLS, true, false).delete_after_serve);
  EXPECT_FALSE(on_hit(PolicyKind::CLS, false, true).delete_after_serve);
  EXPECT_FALSE(on_hit(PolicyKind::CLS, false, false, true).delete_after_serve);
  for (auto k : {PolicyKind::LCE, PolicyKind::LCD, PolicyKind::MCD, PolicyKind::CLS})
    EXPECT_EQ(on_hit(k, false, false).set_r, FlagR::Hit);
}

TEST(Policy, OnlyClsPushesEvictionsUp) {
  EXPECT_TRUE(on_eviction(PolicyKind::CLS).push_up);
  EXPECT_FALSE(on_eviction(PolicyKind::LCE).push_up);
  EXPECT_FALSE(on_eviction(PolicyKind::LCD).push_up);
  EXPECT_FALSE(on_eviction(PolicyKind::MCD).push_up);
}

TEST(Policy, EvictedArrival) {
  const ChunkId c{0, 0};
  const Face C{1}, D{2};
  TrailEntry single{c, Face{0}, {C}, 2};
  TrailEntry multi{c, Face{0}, {C, D}, 2};
  EXPECT_EQ(on_evicted_arrival(PolicyKind::CLS, true, nullptr, C), EvictedArrival::DiscardAtServer);
  EXPECT_EQ(on_evicted_arrival(PolicyKind::CLS, false, &single, C),
            EvictedArrival::CacheAndClearOut);
  EXPECT_EQ(on_evicted_arrival(PolicyKind::CLS, false, &multi, C),
            EvictedArrival::DiscardAndDropFace);
  EXPECT_THROW(on_evicted_arrival(PolicyKind::CLS, false, nullptr, C), ProtocolViolation);
  EXPECT_THROW(on_evicted_arrival(PolicyKind::CLS, false, &single, D), ProtocolViolation);
  EXPECT_THROW(on_evicted_arrival(PolicyKind::LCD, false, &single, C), ProtocolViolation);
}
