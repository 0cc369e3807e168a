#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clsim/simulator.hpp"

namespace clsim {

/// Trail entry with faces resolved to neighbour names.
struct TrailView {
  std::string in;  // "null" when the chunk came from the server
  std::set<std::string> out;
  Hops h = 0;

  friend bool operator==(const TrailView&, const TrailView&) = default;
};

struct Decision {
  std::string node;
  InterestDecision decision;
  std::string face;  // target name for ForwardDownTrail
};

struct ReplayStep {
  std::string label;
  std::map<std::string, TrailView> trails;  // routers without an entry are omitted
  std::map<std::string, bool> holds;
  std::vector<Decision> decisions;
};

struct ReplayResult {
  std::vector<std::string> lines;
  std::vector<ReplayStep> steps;
};

/// Scripted driver for the worked examples: named routers, one chunk.
class ScriptedScenario {
 public:
  ScriptedScenario(Topology topo, std::size_t capacity, Hops h_th,
                   std::map<NodeId, std::string> names)
      : names_(std::move(names)),
        sim_(make(std::move(topo), capacity, h_th)) {
    sim_.set_tracer([this](const TraceRecord& rec, const Simulator& s) { on_trace(rec, s); });
  }

  std::string name(NodeId id) const {
    auto it = names_.find(id);
    return it != names_.end() ? it->second : "R" + std::to_string(id);
  }

  Simulator& sim() { return sim_; }

  void request(std::uint32_t client, const std::string& label) {
    sim_.request_chunk(client, kChunk, sim_.now());
    sim_.run();
    snapshot(label);
  }

  void evict(const std::string& node, const std::string& label) {
    for (const auto& [id, n] : names_) {
      if (n == node) {
        sim_.force_evict(id, kChunk);
        sim_.run();
        snapshot(label);
        return;
      }
    }
    throw ConfigError("unknown node " + node);
  }

  ReplayResult result() const { return result_; }

  static constexpr ChunkId kChunk{0, 0};

 private:
  static Simulator make(Topology topo, std::size_t capacity, Hops h_th) {
    std::vector<std::size_t> caps(topo.num_routers(), capacity);
    return Simulator(std::move(topo), Catalog{1, 1, 4096}, PolicyKind::CLS, SearchThreshold{h_th},
                     caps);
  }

  std::string neighbour(NodeId node, Face f) const {
    const auto& n = sim_.topology().nodes[node];
    const Router& r = sim_.router(node);
    switch (r.face_kind(f)) {
      case FaceKind::Parent: return name(n.parent);
      case FaceKind::Child: return name(n.children.at(f.id - 1));
      case FaceKind::Client: return "client" + std::to_string(f.id);
    }
    return "?";
  }

  std::optional<TrailView> view(NodeId node) const {
    const TrailEntry* t = sim_.router(node).trails().find(kChunk);
    if (t == nullptr) return std::nullopt;
    TrailView v;
    v.in = t->in_face ? neighbour(node, *t->in_face) : "null";
    for (Face f : t->out_faces) v.out.insert(neighbour(node, f));
    v.h = t->h;
    return v;
  }

  void on_trace(const TraceRecord& rec, const Simulator& s) {
    std::ostringstream line;
    line << "t=" << format_ms(rec.time_ms) << " node=" << name(rec.node) << " event=" << rec.event;
    if (rec.decision) {
      line << "/" << to_string(rec.decision->decision);
      Decision d{name(rec.node), rec.decision->decision, ""};
      if (rec.decision->face) d.face = neighbour(rec.node, *rec.decision->face);
      pending_.push_back(d);
    }
    line << " cs=[";
    if (rec.node != 0) {
      bool first = true;
      for (const ChunkId& c : s.router(rec.node).cs().entries()) {
        line << (first ? "" : ",") << to_string(c);
        first = false;
      }
    } else {
      line << "*";
    }
    line << "] trail(" << to_string(rec.chunk) << ")=";
    if (auto v = rec.node == 0 ? std::nullopt : view(rec.node)) {
      line << "(" << v->in << ",{";
      bool first = true;
      for (const auto& o : v->out) {
        line << (first ? "" : ",") << o;
        first = false;
      }
      line << "}," << v->h << ")";
    } else {
      line << "none";
    }
    result_.lines.push_back(line.str());
  }

  void snapshot(const std::string& label) {
    ReplayStep step;
    step.label = label;
    for (const auto& n : sim_.topology().nodes) {
      if (n.id == 0) continue;
      if (auto v = view(n.id)) step.trails[name(n.id)] = *v;
      step.holds[name(n.id)] = sim_.router(n.id).cs().contains(kChunk);
    }
    step.decisions = std::move(pending_);
    pending_.clear();
    result_.steps.push_back(std::move(step));
    result_.lines.push_back("# " + label);
  }

  static std::string format_ms(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
  }

  std::map<NodeId, std::string> names_;
  Simulator sim_;
  std::vector<Decision> pending_;
  ReplayResult result_;
};

/// Chain S-A-B-C: three requests pull the chunk down one level each, then C
/// evicts it and it returns to B.
inline ReplayResult replay_figure2() {
  ScriptedScenario s(build_tree(3, 1, 1, 10.0), 4, 2, {{0, "S"}, {1, "A"}, {2, "B"}, {3, "C"}});
  s.request(0, "fig2(a) first request");
  s.request(0, "fig2(b) second request");
  s.request(0, "fig2(c) third request");
  s.evict("C", "fig2(d) eviction at C");
  return s.result();
}

inline std::map<NodeId, std::string> figure3_names() {
  // depth 3, fanout 2: A=1 has children B=3 and F=4; B has leaves C=7, D=8;
  // G=9 is the first leaf under F.
  return {{0, "S"}, {1, "A"}, {3, "B"}, {4, "F"}, {7, "C"}, {8, "D"}, {9, "G"}};
}

/// Trail-directed search with H_th = 2. Clients 0, 1, 2 sit under C, D, G.
inline ReplayResult replay_figure3() {
  ScriptedScenario s(build_tree(3, 2, 1, 10.0), 4, 2, figure3_names());
  s.request(0, "setup: chunk reaches A");
  s.request(0, "setup: chunk reaches B");
  s.request(0, "setup: chunk reaches C");
  s.request(1, "fig3(a) request from D");
  s.request(2, "fig3(b) request from F");
  return s.result();
}

/// After the fig3(a) state, C evicts while B has out = {C, D}.
inline ReplayResult replay_figure5() {
  ScriptedScenario s(build_tree(3, 2, 1, 10.0), 4, 2, figure3_names());
  s.request(0, "setup: chunk reaches A");
  s.request(0, "setup: chunk reaches B");
  s.request(0, "setup: chunk reaches C");
  s.request(1, "setup: request from D copies the chunk to D");
  s.evict("C", "fig5 eviction at C");
  return s.result();
}

}  // namespace clsim
