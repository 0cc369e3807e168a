#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "clsim/config.hpp"
#include "clsim/error.hpp"
#include "clsim/metrics.hpp"
#include "clsim/model.hpp"
#include "clsim/router.hpp"
#include "clsim/topology.hpp"
#include "clsim/workload.hpp"

namespace clsim {

/// Splits floor(fraction * total_chunks) slots equally over the routers; the
/// remainder goes to the lowest node ids.
inline std::vector<std::size_t> provision_caches(std::uint64_t total_chunks, double fraction,
                                                 std::size_t num_routers) {
  auto budget = static_cast<std::uint64_t>(std::floor(fraction * double(total_chunks) + 1e-9));
  std::vector<std::size_t> caps(num_routers, static_cast<std::size_t>(budget / num_routers));
  for (std::size_t i = 0; i < budget % num_routers; ++i) ++caps[i];
  return caps;
}

enum class EventKind : std::uint8_t { ClientRequestStart, PacketArrival, ChunkDownloadComplete };

struct TraceRecord {
  double time_ms = 0.0;
  NodeId node = 0;
  const char* event = "";  // interest | data | evicted-data | evict
  ChunkId chunk;
  std::optional<InterestOutcome> decision;
};

struct WorkloadSpec {
  double alpha = 0.9;
  double lambda_req_per_s = 5.0;
  std::uint64_t num_requests = 0;
  std::uint64_t seed = 1;
};

/// Discrete-event engine over a tree of routers. Events at equal times run
/// in scheduling order, so every link is FIFO.
class Simulator {
 public:
  using Tracer = std::function<void(const TraceRecord&, const Simulator&)>;

  /// `capacities[i]` is the CS size of router node i+1.
  Simulator(Topology topo, Catalog catalog, PolicyKind policy, SearchThreshold h_th,
            const std::vector<std::size_t>& capacities)
      : topo_(std::move(topo)), catalog_(catalog), policy_(policy) {
    if (capacities.size() != topo_.num_routers()) {
      throw ConfigError("simulator: need one cache capacity per router");
    }
    if (h_th.h_th < 1) throw ConfigError("h_th: must be >= 1");
    routers_.reserve(topo_.nodes.size());
    for (const auto& n : topo_.nodes) {
      std::size_t cap = n.id == 0 ? 0 : capacities[n.id - 1];
      if (n.id != 0 && cap == 0) throw ConfigError("simulator: router without cache capacity");
      routers_.emplace_back(n.id, n.level, n.id != 0, static_cast<std::uint32_t>(n.children.size()),
                            n.num_clients, cap, policy, h_th);
    }
    auto chunks = static_cast<std::size_t>(catalog_.total_chunks());
    in_flight_.assign(chunks, 0);
    ever_cached_.assign(chunks, 0);
    server_absorbed_.assign(chunks, 0);
  }

  const Topology& topology() const { return topo_; }
  const Catalog& catalog() const { return catalog_; }
  PolicyKind policy() const { return policy_; }
  const Router& router(NodeId id) const { return routers_.at(id); }
  double now() const { return now_; }

  void set_tracer(Tracer t) { tracer_ = std::move(t); }
  void enable_invariant_checks(bool on) { check_invariants_ = on; }
  const std::vector<std::string>& violations() const { return violations_; }
  std::uint64_t invariant_checks() const { return checks_run_; }
  std::uint64_t events_processed() const { return events_processed_; }

  /// Schedules Poisson file requests at every client until `num_requests`
  /// downloads have started in total.
  void start_workload(const WorkloadSpec& w) {
    if (!(w.lambda_req_per_s > 0.0)) throw ConfigError("lambda_req_per_s: must be > 0");
    rng_.emplace(w.seed);
    zipf_.emplace(catalog_.num_files, w.alpha);
    lambda_ = w.lambda_req_per_s;
    file_budget_ = w.num_requests;
    for (std::uint32_t c = 0; c < topo_.clients.size(); ++c) {
      Event e = make(EventKind::ClientRequestStart, now_ + next_gap_ms());
      e.client = c;
      push(e);
    }
  }

  /// Starts a sequential (window 1) download of every chunk of `file`.
  void request_file(std::uint32_t client, std::uint32_t file, double at_ms) {
    check_client(client);
    if (file >= catalog_.num_files) throw ConfigError("request_file: file out of range");
    downloads_.push_back(Download{client, file, at_ms, 0});
    ++log_.files_started;
    issue_chunk(client, {file, 0}, static_cast<std::int64_t>(downloads_.size() - 1), at_ms);
  }

  /// Issues one chunk Interest outside any file download.
  RequestId request_chunk(std::uint32_t client, ChunkId c, double at_ms) {
    check_client(client);
    if (!catalog_.contains(c)) throw ConfigError("request_chunk: chunk outside the catalog");
    return issue_chunk(client, c, -1, at_ms);
  }

  /// Evicts a resident chunk at the current time as if by LRU replacement.
  void force_evict(NodeId node, ChunkId c) {
    std::vector<Emission> out;
    routers_.at(node).force_evict(c, catalog_.chunk_size_bytes, out);
    dispatch(node, out);
    if (tracer_) tracer_(TraceRecord{now_, node, "evict", c, std::nullopt}, *this);
  }

  void run() {
    while (!queue_.empty()) step();
  }

  /// Processes events with time <= t.
  void run_until(double t) {
    while (!queue_.empty() && queue_.top().time <= t) step();
  }

  bool idle() const { return queue_.empty(); }

  /// True when no packet for `c` is on any link.
  bool quiescent(const ChunkId& c) const { return in_flight_[flat(c)] == 0; }

  RunLog log() const {
    RunLog l = log_;
    l.routers.clear();
    for (std::size_t i = 1; i < routers_.size(); ++i) l.routers.push_back(routers_[i].stats());
    return l;
  }

  std::uint64_t pending_interest_entries() const {
    std::uint64_t n = 0;
    for (const auto& r : routers_) n += r.pit().size();
    return n;
  }

  std::uint64_t duplicate_deliveries() const { return duplicate_deliveries_; }

  /// Checks the placement invariants for one chunk; returns a description
  /// of the first breach found.
  std::optional<std::string> check_chunk(const ChunkId& c) {
    if (policy_ != PolicyKind::CLS) {
      for (std::size_t i = 1; i < routers_.size(); ++i) {
        if (routers_[i].trails().find(c) != nullptr) return "trail present under non-CLS policy";
      }
      return std::nullopt;
    }
    std::size_t holders = 0;
    for (std::size_t i = 1; i < routers_.size(); ++i) {
      const Router& r = routers_[i];
      const bool holds = r.cs().contains(c);
      const TrailEntry* t = r.trails().find(c);
      holders += holds;
      if (holds && (t == nullptr || !t->out_faces.empty())) {
        return "node " + std::to_string(i) + " holds " + to_string(c) + " without a holder trail";
      }
      if (t != nullptr && t->out_faces.empty() && !holds) {
        return "node " + std::to_string(i) + " has a holder trail for " + to_string(c) +
               " but no copy";
      }
      if (t != nullptr && t->in_face) {
        const TreeNode& n = topo_.nodes[i];
        const TrailEntry* up = routers_[n.parent].trails().find(c);
        if (up == nullptr || !up->has_out(Router::child_face(n.child_slot))) {
          return "node " + std::to_string(i) + " has a trail for " + to_string(c) +
                 " that its parent does not point to";
        }
      }
      if (t != nullptr && !t->out_faces.empty()) {
        if (auto broken = walk_trail(static_cast<NodeId>(i), c)) return broken;
      }
    }
    if (auto dup = count_path_copies(0, c, 0)) return dup;
    if (holders > 0) ever_cached_[flat(c)] = 1;
    if (ever_cached_[flat(c)] && server_absorbed_[flat(c)] == 0 && holders == 0) {
      return "chunk " + to_string(c) + " vanished without returning to the server";
    }
    return std::nullopt;
  }

 private:
  struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::PacketArrival;
    bool is_data = false;
    NodeId node = 0;
    Face face;
    std::uint32_t client = 0;
    RequestId request = 0;
    InterestPacket interest;
    DataPacket data;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  struct Download {
    std::uint32_t client;
    std::uint32_t file;
    double start_ms;
    std::uint32_t next_chunk;
  };
  struct ChunkRequest {
    std::uint32_t client;
    ChunkId chunk;
    std::int64_t download;
    bool delivered;
  };

  std::size_t flat(const ChunkId& c) const {
    return std::size_t{c.file_index} * catalog_.chunks_per_file + c.chunk_index;
  }

  void check_client(std::uint32_t client) const {
    if (client >= topo_.clients.size()) throw ConfigError("unknown client index");
  }

  double next_gap_ms() { return 1000.0 * poisson_next_interarrival(*rng_, lambda_); }

  Event make(EventKind k, double t) {
    Event e;
    e.kind = k;
    e.time = t;
    return e;
  }

  void push(Event& e) {
    e.seq = seq_++;
    queue_.push(e);
  }

  void schedule_packet(NodeId dest, Face face, const InterestPacket* i, const DataPacket* d,
                       double t) {
    Event e = make(EventKind::PacketArrival, t);
    e.node = dest;
    e.face = face;
    if (d != nullptr) {
      e.is_data = true;
      e.data = *d;
      ++e.data.hops_travelled;
      log_.byte_hops += d->size_bytes;
      if (d->r == FlagR::Evicted) ++log_.evicted_transfers;
      ++in_flight_[flat(d->chunk_id)];
    } else {
      e.interest = *i;
      ++in_flight_[flat(i->chunk_id)];
    }
    push(e);
  }

  RequestId issue_chunk(std::uint32_t client, ChunkId c, std::int64_t download, double at_ms) {
    RequestId id = requests_.size();
    requests_.push_back(ChunkRequest{client, c, download, false});
    ++log_.chunk_requests_issued;
    const ClientAttachment& a = topo_.clients[client];
    InterestPacket i{c, id};
    schedule_packet(a.leaf, routers_[a.leaf].client_face(a.slot), &i, nullptr,
                    at_ms + topo_.link_delay_ms);
    return id;
  }

  void dispatch(NodeId from, const std::vector<Emission>& out) {
    const TreeNode& n = topo_.nodes[from];
    const Router& r = routers_[from];
    const double t = now_ + topo_.link_delay_ms;
    for (const Emission& em : out) {
      const auto* interest = std::get_if<InterestPacket>(&em.packet);
      const auto* data = std::get_if<DataPacket>(&em.packet);
      switch (r.face_kind(em.face)) {
        case FaceKind::Parent:
          schedule_packet(n.parent, Router::child_face(n.child_slot), interest, data, t);
          break;
        case FaceKind::Child:
          schedule_packet(n.children[em.face.id - 1], Router::parent_face(), interest, data, t);
          break;
        case FaceKind::Client: {
          if (data == nullptr) throw ProtocolViolation("Interest emitted toward a client");
          Event e = make(EventKind::ChunkDownloadComplete, t);
          e.is_data = true;
          e.data = *data;
          ++e.data.hops_travelled;
          e.request = em.request_id;
          log_.byte_hops += data->size_bytes;
          push(e);
          break;
        }
      }
    }
  }

  void step() {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    ++events_processed_;
    switch (e.kind) {
      case EventKind::ClientRequestStart:
        if (log_.files_started < file_budget_) {
          request_file(e.client, (*zipf_)(*rng_), now_);
          Event next = make(EventKind::ClientRequestStart, now_ + next_gap_ms());
          next.client = e.client;
          push(next);
        }
        break;
      case EventKind::ChunkDownloadComplete:
        deliver(e);
        break;
      case EventKind::PacketArrival:
        arrive(e);
        break;
    }
  }

  void deliver(const Event& e) {
    ChunkRequest& req = requests_.at(e.request);
    if (req.delivered || req.chunk != e.data.chunk_id) {
      ++duplicate_deliveries_;
      return;
    }
    req.delivered = true;
    ++log_.chunk_requests_completed;
    log_.sum_hit_distance_hops += e.data.hops_travelled;
    if (req.download < 0) return;
    Download& d = downloads_[static_cast<std::size_t>(req.download)];
    if (++d.next_chunk < catalog_.chunks_per_file) {
      issue_chunk(d.client, {d.file, d.next_chunk}, req.download, now_);
    } else {
      ++log_.files_completed;
      log_.sum_download_time_ms += now_ - d.start_ms;
    }
  }

  void arrive(const Event& e) {
    Router& r = routers_[e.node];
    const ChunkId c = e.is_data ? e.data.chunk_id : e.interest.chunk_id;
    --in_flight_[flat(c)];
    scratch_.clear();
    std::optional<InterestOutcome> decision;
    const char* kind = "interest";
    if (!e.is_data) {
      decision = r.handle_interest(e.interest, e.face, catalog_.chunk_size_bytes, scratch_);
    } else if (e.data.r == FlagR::Evicted) {
      kind = "evicted-data";
      if (r.is_server()) ++server_absorbed_[flat(c)];
      r.handle_evicted_data(e.data, e.face, scratch_);
    } else {
      kind = "data";
      r.handle_data(e.data, e.face, scratch_);
    }
    dispatch(e.node, scratch_);
    if (tracer_) tracer_(TraceRecord{now_, e.node, kind, c, decision}, *this);
    if (check_invariants_) {
      // Evictions triggered here may touch other chunks; check those too.
      check_if_quiet(c);
      for (const Emission& em : scratch_) {
        if (const auto* d = std::get_if<DataPacket>(&em.packet); d && d->chunk_id != c) {
          check_if_quiet(d->chunk_id);
        }
      }
    }
  }

  void check_if_quiet(const ChunkId& c) {
    if (!quiescent(c)) return;
    ++checks_run_;
    if (auto v = check_chunk(c)) {
      violations_.push_back("t=" + std::to_string(now_) + " " + *v);
    }
  }

  std::optional<std::string> walk_trail(NodeId start, const ChunkId& c) const {
    std::vector<NodeId> stack{start};
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      const TrailEntry* t = routers_[n].trails().find(c);
      if (t == nullptr) {
        return "trail chain for " + to_string(c) + " from node " + std::to_string(start) +
               " breaks at node " + std::to_string(n);
      }
      if (t->out_faces.empty()) {
        if (!routers_[n].cs().contains(c)) {
          return "trail chain for " + to_string(c) + " ends at node " + std::to_string(n) +
                 " without a copy";
        }
        continue;
      }
      for (Face f : t->out_faces) stack.push_back(topo_.nodes[n].children.at(f.id - 1));
    }
    return std::nullopt;
  }

  std::optional<std::string> count_path_copies(NodeId n, const ChunkId& c, int above) const {
    int here = above + (n != 0 && routers_[n].cs().contains(c) ? 1 : 0);
    if (here > 1) {
      return "two copies of " + to_string(c) + " on the path to node " + std::to_string(n);
    }
    for (NodeId child : topo_.nodes[n].children) {
      if (auto v = count_path_copies(child, c, here)) return v;
    }
    return std::nullopt;
  }

  Topology topo_;
  Catalog catalog_;
  PolicyKind policy_;
  std::vector<Router> routers_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;

  std::optional<Rng> rng_;
  std::optional<ZipfSampler> zipf_;
  double lambda_ = 1.0;
  std::uint64_t file_budget_ = 0;

  std::vector<Download> downloads_;
  std::vector<ChunkRequest> requests_;
  RunLog log_;
  std::uint64_t duplicate_deliveries_ = 0;
  std::uint64_t events_processed_ = 0;

  std::vector<int> in_flight_;
  std::vector<std::uint8_t> ever_cached_;
  std::vector<std::uint32_t> server_absorbed_;
  bool check_invariants_ = false;
  std::uint64_t checks_run_ = 0;
  std::vector<std::string> violations_;
  std::vector<Emission> scratch_;
  Tracer tracer_;
};

inline Simulator make_simulator(const SimConfig& config) {
  validate(config);
  Topology topo = build_tree(config.depth, config.fanout, config.clients_per_leaf,
                             config.link_delay_ms);
  Catalog catalog{config.num_files, config.chunks_per_file, config.chunk_size_bytes};
  auto caps = provision_caches(catalog.total_chunks(), config.cache_fraction, topo.num_routers());
  return Simulator(std::move(topo), catalog, config.policy,
                   SearchThreshold{config.effective_h_th()}, caps);
}

/// Runs the full workload described by `config` and returns its metrics.
inline MetricsReport run(const SimConfig& config) {
  Simulator sim = make_simulator(config);
  sim.start_workload({config.alpha, config.lambda_req_per_s, config.num_requests, config.seed});
  sim.run();
  return compute_metrics(sim.log());
}

}  // namespace clsim
