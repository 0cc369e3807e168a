#include <gtest/gtest.h>

#include <vector>

#include "clsim/simulator.hpp"

using namespace clsim;

namespace {

const ChunkId X{0, 0}, Y{1, 0}, Z{2, 0};

Catalog tiny_catalog() { return Catalog{10, 2, 4096}; }

Simulator make(PolicyKind p, std::int64_t depth, std::int64_t fanout, std::size_t cap,
               Catalog cat = tiny_catalog()) {
  Topology t = build_tree(depth, fanout, 1, 10);
  std::vector<std::size_t> caps(t.num_routers(), cap);
  return Simulator(std::move(t), cat, p, SearchThreshold{(Hops(depth) + 1) / 2}, caps);
}

void fetch(Simulator& sim, std::uint32_t client, ChunkId c) {
  sim.request_chunk(client, c, sim.now());
  sim.run();
}

int copies(const Simulator& sim, ChunkId c) {
  int n = 0;
  for (std::size_t i = 1; i < sim.topology().nodes.size(); ++i)
    n += sim.router(NodeId(i)).cs().contains(c);
  return n;
}

SimConfig small_config(PolicyKind p) {
  SimConfig c;
  c.policy = p;
  c.num_requests = 400;
  return c;
}

}  // namespace

TEST(Topology, BinaryTreeOfDepthThree) {
  Topology t = build_tree(3, 2, 1, 10);
  EXPECT_EQ(t.num_routers(), 14u);
  EXPECT_EQ(t.leaves().size(), 8u);
  EXPECT_EQ(t.clients.size(), 8u);
  EXPECT_EQ(t.path_to(7), (std::vector<NodeId>{0, 1, 3, 7}));
  for (const auto& n : t.nodes) {
    if (n.id == 0) continue;
    EXPECT_EQ(n.level, t.nodes[n.parent].level + 1);
    EXPECT_EQ(t.nodes[n.parent].children[n.child_slot], n.id);
  }
}

TEST(Topology, ChainAndSingleLevel) {
  Topology chain = build_tree(3, 1, 1, 10);
  EXPECT_EQ(chain.num_routers(), 3u);
  EXPECT_EQ(chain.leaves(), std::vector<NodeId>{3});
  Topology flat = build_tree(1, 4, 2, 10);
  EXPECT_EQ(flat.num_routers(), 4u);
  EXPECT_EQ(flat.clients.size(), 8u);
}

TEST(Topology, RejectsInvalidShapes) {
  EXPECT_THROW(build_tree(0, 2, 1, 10), ConfigError);
  EXPECT_THROW(build_tree(3, 0, 1, 10), ConfigError);
  EXPECT_THROW(build_tree(3, 2, 0, 10), ConfigError);
  EXPECT_THROW(build_tree(3, 2, 1, -1), ConfigError);
}

TEST(Provisioning, EqualSplitRemainderToLowIds) {
  EXPECT_EQ(provision_caches(1200, 0.2, 14),
            (std::vector<std::size_t>{18, 18, 17, 17, 17, 17, 17, 17, 17, 17, 17, 17, 17, 17}));
  std::size_t total = 0;
  for (auto c : provision_caches(1200, 0.2, 14)) total += c;
  EXPECT_EQ(total, 240u);
  EXPECT_EQ(provision_caches(100, 0.1, 3), (std::vector<std::size_t>{4, 3, 3}));
}

TEST(Metrics, Examples) {
  RunLog log;
  RouterStats a, b, idle;
  a.interests_arrived = 4;
  a.local_hits = 1;
  b.interests_arrived = 4;
  b.local_hits = 3;
  log.routers = {a, b, idle};
  log.chunk_requests_issued = 3;
  log.chunk_requests_completed = 3;
  log.sum_hit_distance_hops = 9;
  log.byte_hops = 3 * 3 * 4096;
  log.files_completed = 2;
  log.sum_download_time_ms = 300;
  MetricsReport m = compute_metrics(log);
  EXPECT_DOUBLE_EQ(m.hit_ratio, 0.5);
  EXPECT_DOUBLE_EQ(m.avg_hit_distance_hops, 3.0);
  EXPECT_DOUBLE_EQ(m.avg_byte_hops_per_request, 12288.0);
  EXPECT_DOUBLE_EQ(m.avg_download_time_ms, 150.0);
  EXPECT_EQ(compute_metrics(RunLog{}), MetricsReport{});
}

TEST(Simulator, LceWarmCacheHitsAtLeaf) {
  Simulator sim = make(PolicyKind::LCE, 3, 2, 4);
  fetch(sim, 0, X);
  EXPECT_DOUBLE_EQ(sim.log().sum_hit_distance_hops, 4.0);
  EXPECT_EQ(copies(sim, X), 3);
  fetch(sim, 0, X);
  RunLog log = sim.log();
  EXPECT_DOUBLE_EQ(log.sum_hit_distance_hops, 5.0);
  EXPECT_DOUBLE_EQ(log.byte_hops, 5.0 * 4096);
  EXPECT_EQ(sim.router(7).stats().local_hits, 1u);
}

TEST(Simulator, LcdCopiesDescendOneLevelPerHit) {
  Simulator lcd = make(PolicyKind::LCD, 3, 2, 4);
  Simulator mcd = make(PolicyKind::MCD, 3, 2, 4);
  for (Simulator* s : {&lcd, &mcd}) {
    fetch(*s, 0, X);
    EXPECT_TRUE(s->router(1).cs().contains(X));
    fetch(*s, 0, X);
    EXPECT_TRUE(s->router(3).cs().contains(X));
  }
  EXPECT_EQ(copies(lcd, X), 2);
  EXPECT_TRUE(lcd.router(1).cs().contains(X));
  EXPECT_EQ(copies(mcd, X), 1);
  EXPECT_FALSE(mcd.router(1).cs().contains(X));
}

TEST(Simulator, EvictionCascadeReachesServer) {
  Simulator sim = make(PolicyKind::CLS, 3, 1, 1);
  for (int k = 0; k < 3; ++k) fetch(sim, 0, X);
  for (int k = 0; k < 2; ++k) fetch(sim, 0, Y);
  fetch(sim, 0, Z);
  ASSERT_TRUE(sim.router(3).cs().contains(X));
  ASSERT_TRUE(sim.router(2).cs().contains(Y));
  ASSERT_TRUE(sim.router(1).cs().contains(Z));
  const auto before = sim.log().evicted_transfers;
  sim.force_evict(3, X);
  sim.run();
  EXPECT_EQ(sim.log().evicted_transfers - before, 3u);
  EXPECT_TRUE(sim.router(2).cs().contains(X));
  EXPECT_TRUE(sim.router(1).cs().contains(Y));
  EXPECT_FALSE(sim.router(1).cs().contains(Z));
  EXPECT_EQ(sim.router(0).stats().server_absorbed, 1u);
  EXPECT_EQ(sim.router(1).trails().find(Z), nullptr);
}

TEST(Simulator, SameSeedSameMetrics) {
  for (auto p : {PolicyKind::LCE, PolicyKind::CLS}) {
    EXPECT_EQ(run(small_config(p)), run(small_config(p)));
  }
  SimConfig a = small_config(PolicyKind::CLS), b = a;
  b.seed = 2;
  EXPECT_NE(run(a), run(b));
}

TEST(Simulator, EveryRequestCompletes) {
  for (auto p : {PolicyKind::LCE, PolicyKind::LCD, PolicyKind::MCD, PolicyKind::CLS}) {
    SimConfig c = small_config(p);
    Simulator sim = make_simulator(c);
    sim.start_workload({c.alpha, c.lambda_req_per_s, c.num_requests, c.seed});
    sim.run();
    RunLog log = sim.log();
    EXPECT_EQ(log.files_started, c.num_requests);
    EXPECT_EQ(log.files_completed, c.num_requests);
    EXPECT_EQ(log.chunk_requests_issued, c.num_requests * c.chunks_per_file);
    EXPECT_EQ(log.chunk_requests_completed, log.chunk_requests_issued);
    EXPECT_EQ(sim.pending_interest_entries(), 0u);
    EXPECT_EQ(sim.duplicate_deliveries(), 0u);
    // Download time is at least one round trip to the leaf per chunk.
    EXPECT_GE(compute_metrics(log).avg_download_time_ms, 12 * 2 * c.link_delay_ms);
  }
}

TEST(Simulator, NonClsPoliciesNeverUseTrailsOrReturnBack) {
  for (auto p : {PolicyKind::LCE, PolicyKind::LCD, PolicyKind::MCD}) {
    SimConfig c = small_config(p);
    Simulator sim = make_simulator(c);
    sim.start_workload({c.alpha, c.lambda_req_per_s, c.num_requests, c.seed});
    sim.run();
    EXPECT_EQ(sim.log().evicted_transfers, 0u);
    for (std::size_t i = 0; i < sim.topology().nodes.size(); ++i) {
      EXPECT_TRUE(sim.router(NodeId(i)).trails().empty());
    }
  }
}

TEST(Simulator, LargerCachesHitMore) {
  SimConfig small = small_config(PolicyKind::LCE), large = small;
  small.cache_fraction = 0.05;
  large.cache_fraction = 0.5;
  EXPECT_LT(run(small).hit_ratio, run(large).hit_ratio);
}

TEST(Simulator, PopularFilesAreCachedMore) {
  SimConfig c = small_config(PolicyKind::LCE);
  c.num_requests = 2000;
  c.alpha = 1.2;
  Simulator sim = make_simulator(c);
  sim.start_workload({c.alpha, c.lambda_req_per_s, c.num_requests, c.seed});
  sim.run();
  int head = 0, tail = 0;
  for (std::size_t i = 1; i < sim.topology().nodes.size(); ++i) {
    for (const ChunkId& id : sim.router(NodeId(i)).cs().entries()) {
      if (id.file_index < 10) ++head;
      if (id.file_index >= 90) ++tail;
    }
  }
  EXPECT_GT(head, tail);
}

TEST(Simulator, ClsInvariantsHoldOnRandomWorkload) {
  SimConfig c = small_config(PolicyKind::CLS);
  c.num_files = 20;
  c.chunks_per_file = 4;
  c.cache_fraction = 0.3;
  c.num_requests = 1500;
  c.lambda_req_per_s = 50;
  Simulator sim = make_simulator(c);
  sim.enable_invariant_checks(true);
  sim.start_workload({c.alpha, c.lambda_req_per_s, c.num_requests, c.seed});
  sim.run();
  EXPECT_TRUE(sim.violations().empty()) << sim.violations().front();
  EXPECT_GT(sim.invariant_checks(), 0u);
  EXPECT_GT(sim.log().evicted_transfers, 0u);
  EXPECT_EQ(sim.pending_interest_entries(), 0u);
}

TEST(Simulator, RejectsMissingCapacity) {
  Topology t = build_tree(2, 2, 1, 10);
  EXPECT_THROW(Simulator(t, tiny_catalog(), PolicyKind::CLS, SearchThreshold{1},
                         std::vector<std::size_t>{1, 1, 1, 1, 0, 1}),
               ConfigError);
  EXPECT_THROW(Simulator(t, tiny_catalog(), PolicyKind::CLS, SearchThreshold{1},
                         std::vector<std::size_t>{1, 1}),
               ConfigError);
}
