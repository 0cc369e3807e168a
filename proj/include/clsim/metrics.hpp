#pragma once

#include <cstdint>
#include <vector>

#include "clsim/router.hpp"

namespace clsim {

/// Raw counters accumulated during one run.
struct RunLog {
  std::vector<RouterStats> routers;  // server excluded
  std::uint64_t chunk_requests_issued = 0;
  std::uint64_t chunk_requests_completed = 0;
  double sum_hit_distance_hops = 0.0;
  std::uint64_t files_started = 0;
  std::uint64_t files_completed = 0;
  double sum_download_time_ms = 0.0;
  double byte_hops = 0.0;  // every Data link traversal, return-back included
  std::uint64_t evicted_transfers = 0;
};

struct MetricsReport {
  double hit_ratio = 0.0;
  double avg_hit_distance_hops = 0.0;
  double avg_download_time_ms = 0.0;
  double avg_byte_hops_per_request = 0.0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Hit ratio is the unweighted mean of per-router ratios over routers that
/// saw at least one Interest.
inline MetricsReport compute_metrics(const RunLog& log) {
  MetricsReport m;
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& r : log.routers) {
    if (r.interests_arrived == 0) continue;
    sum += static_cast<double>(r.local_hits) / static_cast<double>(r.interests_arrived);
    ++counted;
  }
  if (counted > 0) m.hit_ratio = sum / static_cast<double>(counted);
  if (log.chunk_requests_completed > 0) {
    m.avg_hit_distance_hops =
        log.sum_hit_distance_hops / static_cast<double>(log.chunk_requests_completed);
  }
  if (log.files_completed > 0) {
    m.avg_download_time_ms = log.sum_download_time_ms / static_cast<double>(log.files_completed);
  }
  if (log.chunk_requests_issued > 0) {
    m.avg_byte_hops_per_request = log.byte_hops / static_cast<double>(log.chunk_requests_issued);
  }
  return m;
}

}  // namespace clsim
