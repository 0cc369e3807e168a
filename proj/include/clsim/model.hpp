#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace clsim {

/// Globally unique chunk name: (file ordinal, chunk ordinal within file).
struct ChunkId {
  std::uint32_t file_index = 0;
  std::uint32_t chunk_index = 0;

  friend constexpr bool operator==(const ChunkId&, const ChunkId&) = default;
  friend constexpr auto operator<=>(const ChunkId&, const ChunkId&) = default;
};

inline std::string to_string(const ChunkId& id) {
  return std::to_string(id.file_index) + "." + std::to_string(id.chunk_index);
}

inline std::ostream& operator<<(std::ostream& os, const ChunkId& id) { return os << to_string(id); }

struct ChunkIdHash {
  std::size_t operator()(const ChunkId& id) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{id.file_index} << 32) | id.chunk_index);
  }
};

struct FileSpec {
  std::uint32_t file_index = 0;
  std::uint32_t num_chunks = 1;
  std::uint32_t chunk_size_bytes = 4096;
};

/// Local ordinal of a link endpoint at one router.
struct Face {
  std::uint32_t id = 0;

  friend constexpr bool operator==(const Face&, const Face&) = default;
  friend constexpr auto operator<=>(const Face&, const Face&) = default;
};

/// Chunk state marker carried by every Data packet.
enum class FlagR : std::uint8_t { Cached = 0, Hit = 1, Evicted = 2 };

inline const char* to_string(FlagR r) {
  switch (r) {
    case FlagR::Cached: return "0";
    case FlagR::Hit: return "1";
    case FlagR::Evicted: return "2";
  }
  return "?";
}

using RequestId = std::uint64_t;

struct InterestPacket {
  ChunkId chunk_id;
  RequestId request_id = 0;
};

struct DataPacket {
  ChunkId chunk_id;
  std::uint32_t size_bytes = 0;
  FlagR r = FlagR::Hit;
  // Hop count from the server of the node that sent this packet.
  std::uint32_t h = 0;
  // Links traversed since the serving node emitted the chunk (metrics only).
  std::uint32_t hops_travelled = 0;
};

inline std::vector<ChunkId> enumerate_chunks(const FileSpec& file) {
  std::vector<ChunkId> ids;
  ids.reserve(file.num_chunks);
  for (std::uint32_t c = 0; c < file.num_chunks; ++c) ids.push_back({file.file_index, c});
  return ids;
}

/// Uniform catalog: every file has the same chunk count and chunk size.
struct Catalog {
  std::uint32_t num_files = 100;
  std::uint32_t chunks_per_file = 12;
  std::uint32_t chunk_size_bytes = 4096;

  FileSpec file(std::uint32_t index) const { return {index, chunks_per_file, chunk_size_bytes}; }
  std::uint64_t total_chunks() const { return std::uint64_t{num_files} * chunks_per_file; }
  bool contains(const ChunkId& id) const {
    return id.file_index < num_files && id.chunk_index < chunks_per_file;
  }
};

}  // namespace clsim
