#include <gtest/gtest.h>

#include <set>

#include "clsim/model.hpp"

using namespace clsim;

TEST(Model, SingleChunkFile) {
  auto ids = enumerate_chunks(FileSpec{0, 1, 4096});
  ASSERT_EQ(ids.size(), 1u);
  EXPECT_EQ(ids[0], (ChunkId{0, 0}));
}

TEST(Model, SequentialEnumeration) {
  auto ids = enumerate_chunks(FileSpec{3, 3, 4096});
  std::vector<ChunkId> want{{3, 0}, {3, 1}, {3, 2}};
  EXPECT_EQ(ids, want);
}

TEST(Model, CatalogEnumerationIsDistinct) {
  Catalog cat{100, 12, 4096};
  std::set<ChunkId> all;
  std::size_t total = 0;
  for (std::uint32_t f = 0; f < cat.num_files; ++f) {
    for (const ChunkId& id : enumerate_chunks(cat.file(f))) {
      EXPECT_TRUE(cat.contains(id));
      all.insert(id);
      ++total;
    }
  }
  EXPECT_EQ(total, 1200u);
  EXPECT_EQ(all.size(), 1200u);
  EXPECT_EQ(cat.total_chunks(), 1200u);
}

TEST(Model, ChunkIdEqualityAndHash) {
  ChunkId a{1, 2}, b{1, 2}, c{2, 1};
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(ChunkIdHash{}(a), ChunkIdHash{}(b));
  EXPECT_FALSE(Catalog{}.contains(ChunkId{100, 0}));
  EXPECT_FALSE(Catalog{}.contains(ChunkId{0, 12}));
}
