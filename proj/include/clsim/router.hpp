#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "clsim/content_store.hpp"
#include "clsim/error.hpp"
#include "clsim/model.hpp"
#include "clsim/policy.hpp"
#include "clsim/trail.hpp"

namespace clsim {

using NodeId = std::uint32_t;

enum class FaceKind : std::uint8_t { Parent, Child, Client };

struct PitRecord {
  Face face;
  RequestId request_id = 0;
};

struct PitEntry {
  Face forwarded_to;
  bool downstream = false;  // forwarded along a trail rather than toward the server
  std::vector<PitRecord> records;
};

class PitTable {
 public:
  PitEntry* find(const ChunkId& id) {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }
  const PitEntry* find(const ChunkId& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }
  void create(const ChunkId& id, Face forwarded_to, bool downstream, PitRecord first) {
    entries_[id] = PitEntry{forwarded_to, downstream, {first}};
  }
  std::optional<PitEntry> take(const ChunkId& id) {
    auto it = entries_.find(id);
    if (it == entries_.end()) return std::nullopt;
    PitEntry e = std::move(it->second);
    entries_.erase(it);
    return e;
  }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::unordered_map<ChunkId, PitEntry, ChunkIdHash> entries_;
};

/// Hop threshold at or above which a trail holder searches downstream.
struct SearchThreshold {
  Hops h_th = 1;
};

/// A packet leaving a router through `face`. `request_id` is meaningful only
/// for Data delivered on a client face.
struct Emission {
  Face face;
  std::variant<InterestPacket, DataPacket> packet;
  RequestId request_id = 0;
};

enum class InterestDecision { ServeLocal, ForwardUp, ForwardDownTrail, Aggregated, Absorbed };

inline const char* to_string(InterestDecision d) {
  switch (d) {
    case InterestDecision::ServeLocal: return "serve-local";
    case InterestDecision::ForwardUp: return "forward-up";
    case InterestDecision::ForwardDownTrail: return "forward-down-trail";
    case InterestDecision::Aggregated: return "aggregated";
    case InterestDecision::Absorbed: return "absorbed";
  }
  return "?";
}

struct InterestOutcome {
  InterestDecision decision;
  std::optional<Face> face;  // set for ForwardDownTrail
};

struct RouterStats {
  std::uint64_t interests_arrived = 0;
  std::uint64_t local_hits = 0;
  std::uint64_t unsolicited_data = 0;
  std::uint64_t trail_searches = 0;           // ForwardDownTrail decisions
  std::uint64_t trail_searches_resolved = 0;  // ... answered from below
  std::uint64_t absorbed_interests = 0;
  std::uint64_t evictions = 0;
  std::uint64_t returned_chunks_cached = 0;
  std::uint64_t returned_chunks_discarded = 0;
  std::uint64_t server_absorbed = 0;
  std::uint64_t evictions_dropped_pending = 0;  // copy dropped, Data already on its way
};

/// Packet-processing engine of one tree node.
///
/// Face layout: face 0 is the parent (absent at the server), faces
/// 1..children are child routers, the remaining faces are attached clients.
class Router {
 public:
  Router(NodeId id, Hops level, bool has_parent, std::uint32_t num_children,
         std::uint32_t num_clients, std::size_t capacity_chunks, PolicyKind policy,
         SearchThreshold h_th)
      : id_(id),
        level_(level),
        has_parent_(has_parent),
        num_children_(num_children),
        num_clients_(num_clients),
        cs_(capacity_chunks),
        policy_(policy),
        h_th_(h_th) {}

  NodeId id() const { return id_; }
  Hops level() const { return level_; }
  bool is_server() const { return !has_parent_; }
  bool is_leaf() const { return num_children_ == 0; }
  PolicyKind policy() const { return policy_; }
  SearchThreshold threshold() const { return h_th_; }

  std::uint32_t num_children() const { return num_children_; }
  std::uint32_t num_clients() const { return num_clients_; }
  std::uint32_t num_faces() const { return 1 + num_children_ + num_clients_; }

  static constexpr Face parent_face() { return Face{0}; }
  static Face child_face(std::uint32_t i) { return Face{1 + i}; }
  Face client_face(std::uint32_t i) const { return Face{1 + num_children_ + i}; }

  FaceKind face_kind(Face f) const {
    if (f.id == 0) return FaceKind::Parent;
    if (f.id <= num_children_) return FaceKind::Child;
    return FaceKind::Client;
  }

  const ContentStore& cs() const { return cs_; }
  ContentStore& cs() { return cs_; }
  const TrailTable& trails() const { return trails_; }
  TrailTable& trails() { return trails_; }
  const PitTable& pit() const { return pit_; }
  const RouterStats& stats() const { return stats_; }

  /// The server holds the full catalog permanently.
  bool holds(const ChunkId& id) const { return is_server() || cs_.contains(id); }

  InterestOutcome handle_interest(const InterestPacket& i, Face from, std::uint32_t size_bytes,
                                  std::vector<Emission>& out) {
    ++stats_.interests_arrived;
    const ChunkId& c = i.chunk_id;

    if (is_server() || cs_.lookup(c)) {
      if (!is_server()) ++stats_.local_hits;
      serve_from_store(c, size_bytes, {PitRecord{from, i.request_id}}, out);
      return {InterestDecision::ServeLocal, std::nullopt};
    }

    const bool from_parent = face_kind(from) == FaceKind::Parent;
    PitEntry* pending = pit_.find(c);

    if (policy_ == PolicyKind::CLS) {
      // A trail-directed Interest that finds neither copy nor trail has
      // crossed the evicted copy on its way up; the returning chunk answers
      // the upstream PIT, so the Interest is dropped here.
      if (pending != nullptr && !(from_parent && !pending->downstream)) {
        pending->records.push_back({from, i.request_id});
        return {InterestDecision::Aggregated, std::nullopt};
      }
      const TrailEntry* t = trails_.find(c);
      if (t != nullptr && !t->out_faces.empty() && (from_parent || t->h >= h_th_.h_th)) {
        std::optional<Face> down = choose_out_face(*t, from);
        if (!down) {
          throw ProtocolViolation("node " + std::to_string(id_) + ": trail for " + to_string(c) +
                                  " only points back at the requesting face");
        }
        pit_.create(c, *down, true, {from, i.request_id});
        ++stats_.trail_searches;
        out.push_back({*down, InterestPacket{c, i.request_id}});
        return {InterestDecision::ForwardDownTrail, down};
      }
      if (from_parent) {
        ++stats_.absorbed_interests;
        return {InterestDecision::Absorbed, std::nullopt};
      }
    } else if (pending != nullptr) {
      pending->records.push_back({from, i.request_id});
      return {InterestDecision::Aggregated, std::nullopt};
    }

    if (from_parent) {
      throw ProtocolViolation("node " + std::to_string(id_) +
                              ": Interest from the parent would be sent back upstream");
    }
    pit_.create(c, parent_face(), false, {from, i.request_id});
    out.push_back({parent_face(), InterestPacket{c, i.request_id}});
    return {InterestDecision::ForwardUp, std::nullopt};
  }

  void handle_data(const DataPacket& d, Face from, std::vector<Emission>& out) {
    if (d.r == FlagR::Evicted) {
      handle_evicted_data(d, from, out);
      return;
    }
    std::optional<PitEntry> pending = pit_.take(d.chunk_id);
    if (!pending) {
      ++stats_.unsolicited_data;
      return;
    }
    if (pending->downstream) ++stats_.trail_searches_resolved;
    const ChunkId& c = d.chunk_id;
    const TrailEntry* t = policy_ == PolicyKind::CLS ? trails_.find(c) : nullptr;
    const bool has_trail = t != nullptr;

    if (policy_ == PolicyKind::CLS && d.r == FlagR::Hit && cs_.contains(c)) {
      // A returned copy was cached here while this upstream fetch was in
      // flight; the local copy answers and the incoming one is dropped.
      serve_from_store(c, d.size_bytes, std::move(pending->records), out);
      return;
    }

    DataAction act = policy::on_data(policy_, has_trail, d.r == FlagR::Hit, d.r,
                                     is_leaf() && !pending->records.empty());

    DataPacket next = d;
    next.h = d.h + 1;
    if (act.cache_here && !cs_.contains(c)) {
      if (policy_ == PolicyKind::CLS && face_kind(from) != FaceKind::Parent) {
        throw ProtocolViolation("node " + std::to_string(id_) + ": hit chunk " + to_string(c) +
                                " arrived from below at a router without a trail");
      }
      insert_and_handle_victim(c, d.size_bytes, out);
    }
    for (TrailOp op : act.trail_ops) {
      switch (op) {
        case TrailOp::RecordCached:
          trails_.record_cached(c, upstream_in_face(), d.h + 1);
          break;
        case TrailOp::NotePushdown:
          note_pushdowns(c, pending->records);
          break;
        case TrailOp::MergeH:
          next.h = trails_.merge(c, d.h);
          break;
      }
    }
    if (has_trail && act.trail_ops.empty()) next.h = trails_.find(c)->h;
    if (act.clear_hit_flag) next.r = FlagR::Cached;
    emit_data(next, pending->records, out);
  }

  void handle_evicted_data(const DataPacket& d, Face from, std::vector<Emission>& out) {
    const ChunkId& c = d.chunk_id;
    if (!is_server() && face_kind(from) != FaceKind::Child) {
      throw ProtocolViolation("node " + std::to_string(id_) + ": evicted chunk from non-child face");
    }
    EvictedArrival what = policy::on_evicted_arrival(policy_, is_server(), trails_.find(c), from);
    if (what == EvictedArrival::DiscardAtServer) {
      ++stats_.server_absorbed;
      return;
    }
    const PitEntry* p = pit_.find(c);
    const bool answers_search = p != nullptr && p->downstream && p->forwarded_to == from;

    if (what == EvictedArrival::CacheAndClearOut) {
      ++stats_.returned_chunks_cached;
      const TrailEntry* t = trails_.find(c);
      std::optional<Face> in = t->in_face;
      Hops h = t->h;
      trails_.record_cached(c, in, h);
      insert_and_handle_victim(c, d.size_bytes, out);
      if (answers_search) {
        PitEntry e = *pit_.take(c);
        ++stats_.trail_searches_resolved;
        serve_from_store(c, d.size_bytes, std::move(e.records), out);
      }
      return;
    }

    ++stats_.returned_chunks_discarded;
    trails_.drop_out_face(c, from);
    if (answers_search) {
      // The searched copy was pushed back up while the Interest was on its
      // way down; pass the chunk on instead of losing it.
      PitEntry e = *pit_.take(c);
      ++stats_.trail_searches_resolved;
      note_pushdowns(c, e.records);
      DataPacket next{c, d.size_bytes, FlagR::Hit, trails_.find(c)->h, 0};
      emit_data(next, e.records, out);
    }
  }

  /// Drops a resident chunk as if LRU had selected it (scripted scenarios).
  void force_evict(const ChunkId& c, std::uint32_t size_bytes, std::vector<Emission>& out) {
    if (!cs_.remove(c)) {
      throw ProtocolViolation("node " + std::to_string(id_) + ": force_evict of absent chunk " +
                              to_string(c));
    }
    handle_victim(c, size_bytes, out);
  }

 private:
  std::optional<Face> upstream_in_face() const {
    // A level-1 router received the chunk from the server: recorded as null.
    if (level_ <= 1) return std::nullopt;
    return parent_face();
  }

  Hops own_h(const ChunkId& c) const {
    if (const TrailEntry* t = trails_.find(c)) return t->h;
    return level_;
  }

  std::optional<Face> choose_out_face(const TrailEntry& t, Face exclude) const {
    for (auto it = t.out_faces.rbegin(); it != t.out_faces.rend(); ++it) {
      if (*it != exclude) return *it;
    }
    return std::nullopt;
  }

  void note_pushdowns(const ChunkId& c, const std::vector<PitRecord>& records) {
    for (const auto& r : records) {
      if (face_kind(r.face) == FaceKind::Child) trails_.note_pushdown(c, r.face);
    }
  }

  void serve_from_store(const ChunkId& c, std::uint32_t size_bytes,
                        std::vector<PitRecord> records, std::vector<Emission>& out) {
    bool to_child = false, to_parent = false, to_client = false;
    for (const auto& r : records) {
      switch (face_kind(r.face)) {
        case FaceKind::Child: to_child = true; break;
        case FaceKind::Parent: to_parent = true; break;
        case FaceKind::Client: to_client = true; break;
      }
    }
    HitAction act = policy::on_hit(policy_, !to_child && to_parent, !to_child && to_client,
                                   is_server());
    DataPacket d{c, size_bytes, act.set_r, is_server() ? 0 : own_h(c), 0};
    if (act.delete_after_serve) {
      cs_.remove(c);
      if (policy_ == PolicyKind::CLS) note_pushdowns(c, records);
    }
    emit_data(d, records, out);
  }

  void emit_data(const DataPacket& d, const std::vector<PitRecord>& records,
                 std::vector<Emission>& out) const {
    std::vector<Face> sent;
    for (const auto& r : records) {
      if (face_kind(r.face) == FaceKind::Client) {
        out.push_back({r.face, d, r.request_id});
      } else if (std::find(sent.begin(), sent.end(), r.face) == sent.end()) {
        sent.push_back(r.face);
        out.push_back({r.face, d, 0});
      }
    }
  }

  void insert_and_handle_victim(const ChunkId& c, std::uint32_t size_bytes,
                                std::vector<Emission>& out) {
    if (std::optional<ChunkId> victim = cs_.insert(c)) {
      if (*victim == c) {
        throw ProtocolViolation("node " + std::to_string(id_) + ": zero-capacity content store");
      }
      handle_victim(*victim, size_bytes, out);
    }
  }

  void handle_victim(const ChunkId& v, std::uint32_t size_bytes, std::vector<Emission>& out) {
    ++stats_.evictions;
    if (!policy::on_eviction(policy_).push_up) return;
    Hops h = own_h(v);
    trails_.remove_on_evict(v);
    // A returned copy would cross the Data answering our own pending
    // Interest. The parent still points here and that Data restores a copy.
    if (const PitEntry* p = pit_.find(v); p != nullptr && !p->downstream) {
      ++stats_.evictions_dropped_pending;
      return;
    }
    out.push_back({parent_face(), DataPacket{v, size_bytes, FlagR::Evicted, h, 0}, 0});
  }

  NodeId id_;
  Hops level_;
  bool has_parent_;
  std::uint32_t num_children_;
  std::uint32_t num_clients_;
  ContentStore cs_;
  TrailTable trails_;
  PitTable pit_;
  PolicyKind policy_;
  SearchThreshold h_th_;
  RouterStats stats_;
};

}  // namespace clsim
