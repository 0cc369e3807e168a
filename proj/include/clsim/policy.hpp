#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clsim/error.hpp"
#include "clsim/model.hpp"
#include "clsim/trail.hpp"

namespace clsim {

enum class PolicyKind { LCE, LCD, MCD, CLS };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::LCE: return "lce";
    case PolicyKind::LCD: return "lcd";
    case PolicyKind::MCD: return "mcd";
    case PolicyKind::CLS: return "cls";
  }
  return "?";
}

inline std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "lce") return PolicyKind::LCE;
  if (name == "lcd") return PolicyKind::LCD;
  if (name == "mcd") return PolicyKind::MCD;
  if (name == "cls") return PolicyKind::CLS;
  return std::nullopt;
}

enum class TrailOp { RecordCached, NotePushdown, MergeH };

struct DataAction {
  bool cache_here = false;
  bool clear_hit_flag = false;  // r <- 0 after caching
  bool forward = true;
  std::vector<TrailOp> trail_ops;
};

struct HitAction {
  bool delete_after_serve = false;
  FlagR set_r = FlagR::Hit;
};

struct EvictAction {
  bool push_up = false;
};

enum class EvictedArrival { CacheAndClearOut, DiscardAndDropFace, DiscardAtServer };

namespace policy {

/// Placement decision for a Data packet (r in {0,1}) arriving at a router.
inline DataAction on_data(PolicyKind kind, bool has_trail, bool is_first_uncached_hop, FlagR data_r,
                          bool at_leaf_for_requester) {
  (void)at_leaf_for_requester;
  if (data_r == FlagR::Evicted) {
    throw ProtocolViolation("policy: evicted chunk dispatched to on_data");
  }
  DataAction a;
  switch (kind) {
    case PolicyKind::LCE:
      a.cache_here = true;
      a.clear_hit_flag = data_r == FlagR::Hit;
      break;
    case PolicyKind::LCD:
    case PolicyKind::MCD:
      a.cache_here = is_first_uncached_hop && data_r == FlagR::Hit;
      a.clear_hit_flag = a.cache_here;
      break;
    case PolicyKind::CLS:
      if (data_r != FlagR::Hit) break;
      if (has_trail) {
        a.trail_ops = {TrailOp::NotePushdown, TrailOp::MergeH};
      } else {
        a.cache_here = true;
        a.clear_hit_flag = true;
        a.trail_ops = {TrailOp::RecordCached};
      }
      break;
  }
  return a;
}

/// Whether a local hit keeps its copy. Under CLS the copy stays when the Data
/// heads back toward the trail's in face or straight to an attached client.
inline HitAction on_hit(PolicyKind kind, bool serving_toward_in_face, bool at_leaf_for_requester,
                        bool at_server = false) {
  HitAction a;
  if (at_server) return a;
  switch (kind) {
    case PolicyKind::LCE:
    case PolicyKind::LCD:
      break;
    case PolicyKind::MCD:
      a.delete_after_serve = true;
      break;
    case PolicyKind::CLS:
      a.delete_after_serve = !serving_toward_in_face && !at_leaf_for_requester;
      break;
  }
  return a;
}

/// Called only for LRU replacement victims, never for pull-down deletions.
inline EvictAction on_eviction(PolicyKind kind) { return {kind == PolicyKind::CLS}; }

inline EvictedArrival on_evicted_arrival(PolicyKind kind, bool at_server, const TrailEntry* trail,
                                         Face sender) {
  if (kind != PolicyKind::CLS) {
    throw ProtocolViolation(std::string("policy: evicted chunk under ") + to_string(kind));
  }
  if (at_server) return EvictedArrival::DiscardAtServer;
  if (trail == nullptr) {
    throw ProtocolViolation("policy: evicted chunk from face " + std::to_string(sender.id) +
                            " reached a router without a trail");
  }
  if (!trail->has_out(sender)) {
    throw ProtocolViolation("policy: evicted chunk " + to_string(trail->chunk_id) +
                            " from face " + std::to_string(sender.id) + " not in out faces");
  }
  return trail->out_faces.size() == 1 ? EvictedArrival::CacheAndClearOut
                                      : EvictedArrival::DiscardAndDropFace;
}

}  // namespace policy
}  // namespace clsim
