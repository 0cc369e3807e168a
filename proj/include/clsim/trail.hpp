#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clsim/error.hpp"
#include "clsim/model.hpp"

namespace clsim {

using Hops = std::uint32_t;

/// Caching-history record for one chunk at one router.
///
/// `in_face` is empty when the chunk arrived straight from the server.
/// `out_faces` lists the child faces the chunk was pushed toward, oldest
/// first; empty means this router holds the copy itself.
struct TrailEntry {
  ChunkId chunk_id;
  std::optional<Face> in_face;
  std::vector<Face> out_faces;
  Hops h = 0;

  bool has_out(Face f) const {
    return std::find(out_faces.begin(), out_faces.end(), f) != out_faces.end();
  }

  friend bool operator==(const TrailEntry&, const TrailEntry&) = default;
};

constexpr Hops merge_h(Hops h_trail, Hops h_chunk) { return std::min(h_trail, h_chunk + 1); }

class TrailTable {
 public:
  const TrailEntry* find(const ChunkId& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Creates the holder entry, or on return-back clears the out faces of the
  /// existing one while keeping the smaller h.
  void record_cached(const ChunkId& id, std::optional<Face> in_face, Hops h) {
    auto [it, inserted] = entries_.try_emplace(id, TrailEntry{id, in_face, {}, h});
    if (!inserted) {
      it->second.in_face = in_face;
      it->second.out_faces.clear();
      it->second.h = std::min(it->second.h, h);
    }
  }

  /// Adds (or refreshes to most recent) a child face the chunk left through.
  void note_pushdown(const ChunkId& id, Face child) {
    auto& e = require(id, "note_pushdown");
    auto pos = std::find(e.out_faces.begin(), e.out_faces.end(), child);
    if (pos != e.out_faces.end()) e.out_faces.erase(pos);
    e.out_faces.push_back(child);
  }

  /// Applies the min-merge to an existing entry; returns the resulting h.
  Hops merge(const ChunkId& id, Hops h_chunk) {
    auto& e = require(id, "merge");
    e.h = merge_h(e.h, h_chunk);
    return e.h;
  }

  void remove_on_evict(const ChunkId& id) {
    auto& e = require(id, "remove_on_evict");
    if (!e.out_faces.empty()) {
      throw ProtocolViolation("trail: eviction of " + to_string(id) +
                              " at a router that has downstream copies");
    }
    entries_.erase(id);
  }

  std::size_t drop_out_face(const ChunkId& id, Face child) {
    auto& e = require(id, "drop_out_face");
    auto pos = std::find(e.out_faces.begin(), e.out_faces.end(), child);
    if (pos == e.out_faces.end()) {
      throw ProtocolViolation("trail: face " + std::to_string(child.id) +
                              " not among out faces of " + to_string(id));
    }
    e.out_faces.erase(pos);
    return e.out_faces.size();
  }

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [id, e] : entries_) f(e);
  }

 private:
  TrailEntry& require(const ChunkId& id, const char* op) {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
      throw ProtocolViolation(std::string("trail: ") + op + " on missing entry " + to_string(id));
    }
    return it->second;
  }

  std::unordered_map<ChunkId, TrailEntry, ChunkIdHash> entries_;
};

}  // namespace clsim
