#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clsim/error.hpp"
#include "clsim/router.hpp"

namespace clsim {

struct TreeNode {
  NodeId id = 0;
  Hops level = 0;
  NodeId parent = 0;            // meaningless for the server
  std::uint32_t child_slot = 0;  // index among the parent's children
  std::vector<NodeId> children;
  std::uint32_t num_clients = 0;
};

struct ClientAttachment {
  NodeId leaf = 0;
  std::uint32_t slot = 0;
};

/// Balanced tree rooted at the server (node 0). Node ids are assigned level
/// by level, left to right.
struct Topology {
  std::uint32_t depth = 0;
  std::uint32_t fanout = 0;
  std::uint32_t clients_per_leaf = 0;
  double link_delay_ms = 0.0;
  std::vector<TreeNode> nodes;
  std::vector<ClientAttachment> clients;

  std::size_t num_routers() const { return nodes.size() - 1; }

  std::vector<NodeId> leaves() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes)
      if (n.level == depth) out.push_back(n.id);
    return out;
  }

  /// Server first, leaf last.
  std::vector<NodeId> path_to(NodeId node) const {
    std::vector<NodeId> path;
    for (NodeId n = node;; n = nodes[n].parent) {
      path.push_back(n);
      if (n == 0) break;
    }
    return {path.rbegin(), path.rend()};
  }
};

inline Topology build_tree(std::int64_t depth, std::int64_t fanout, std::int64_t clients_per_leaf,
                           double link_delay_ms) {
  if (depth < 1) throw ConfigError("depth must be >= 1");
  if (fanout < 1) throw ConfigError("fanout must be >= 1");
  if (clients_per_leaf < 1) throw ConfigError("clients_per_leaf must be >= 1");
  if (!(link_delay_ms >= 0.0)) throw ConfigError("link_delay_ms must be >= 0");

  Topology t;
  t.depth = static_cast<std::uint32_t>(depth);
  t.fanout = static_cast<std::uint32_t>(fanout);
  t.clients_per_leaf = static_cast<std::uint32_t>(clients_per_leaf);
  t.link_delay_ms = link_delay_ms;
  t.nodes.push_back(TreeNode{0, 0, 0, 0, {}, 0});

  std::vector<NodeId> frontier{0};
  for (std::uint32_t level = 1; level <= t.depth; ++level) {
    std::vector<NodeId> next;
    for (NodeId p : frontier) {
      for (std::uint32_t k = 0; k < t.fanout; ++k) {
        NodeId id = static_cast<NodeId>(t.nodes.size());
        t.nodes.push_back(TreeNode{id, level, p, k, {}, 0});
        t.nodes[p].children.push_back(id);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  for (NodeId leaf : frontier) {
    t.nodes[leaf].num_clients = t.clients_per_leaf;
    for (std::uint32_t s = 0; s < t.clients_per_leaf; ++s) t.clients.push_back({leaf, s});
  }
  return t;
}

}  // namespace clsim
