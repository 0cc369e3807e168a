#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "clsim/config.hpp"
#include "clsim/metrics.hpp"
#include "clsim/simulator.hpp"

namespace clsim {

struct SweepSpec {
  SimConfig base;
  std::vector<PolicyKind> policies;
  std::vector<double> alphas;
  std::vector<double> cache_fractions;
  std::vector<std::uint64_t> seeds;
};

struct SweepRow {
  SimConfig config;
  MetricsReport metrics;
};

inline constexpr const char* kCsvHeader =
    "policy,alpha,cache_fraction,seed,hit_ratio,avg_hit_distance_hops,avg_download_time_ms,"
    "avg_byte_hops_per_request";

inline std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_row(const SweepRow& r) {
  const SimConfig& c = r.config;
  const MetricsReport& m = r.metrics;
  return std::string(to_string(c.policy)) + "," + format_g6(c.alpha) + "," +
         format_g6(c.cache_fraction) + "," + std::to_string(c.seed) + "," +
         format_g6(m.hit_ratio) + "," + format_g6(m.avg_hit_distance_hops) + "," +
         format_g6(m.avg_download_time_ms) + "," + format_g6(m.avg_byte_hops_per_request);
}

/// Cartesian product in output order: policy outermost, seed innermost.
inline std::vector<SimConfig> expand(const SweepSpec& spec) {
  std::vector<SimConfig> out;
  for (PolicyKind p : spec.policies)
    for (double a : spec.alphas)
      for (double f : spec.cache_fractions)
        for (std::uint64_t s : spec.seeds) {
          SimConfig c = spec.base;
          c.policy = p;
          c.alpha = a;
          c.cache_fraction = f;
          c.seed = s;
          validate(c);
          out.push_back(c);
        }
  return out;
}

/// Runs every combination, using up to `threads` workers. Results come back
/// in expansion order regardless of completion order.
inline std::vector<SweepRow> run_combinations(const std::vector<SimConfig>& configs,
                                              unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, configs.size())));
  std::vector<SweepRow> rows(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < configs.size();) {
      try {
        rows[i] = SweepRow{configs[i], run(configs[i])};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::ostream& out,
                                       unsigned threads = 0) {
  std::vector<SweepRow> rows = run_combinations(expand(spec), threads);
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << csv_row(r) << '\n';
    if (!out) {
      throw std::runtime_error("failed writing CSV row for policy=" +
                               std::string(to_string(r.config.policy)) +
                               " alpha=" + format_g6(r.config.alpha) +
                               " cache_fraction=" + format_g6(r.config.cache_fraction) +
                               " seed=" + std::to_string(r.config.seed));
    }
  }
  out.flush();
  return rows;
}

inline void print_summary(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << std::left << std::setw(7) << "policy" << std::setw(8) << "alpha" << std::setw(8)
     << "cache" << std::setw(8) << "seed" << std::setw(12) << "hit_ratio" << std::setw(12)
     << "hit_dist" << std::setw(14) << "download_ms" << "byte_hops\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(7) << to_string(r.config.policy) << std::setw(8)
       << format_g6(r.config.alpha) << std::setw(8) << format_g6(r.config.cache_fraction)
       << std::setw(8) << r.config.seed << std::setw(12) << format_g6(r.metrics.hit_ratio)
       << std::setw(12) << format_g6(r.metrics.avg_hit_distance_hops) << std::setw(14)
       << format_g6(r.metrics.avg_download_time_ms)
       << format_g6(r.metrics.avg_byte_hops_per_request) << '\n';
  }
}

}  // namespace clsim
