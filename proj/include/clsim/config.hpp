#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>

#include "clsim/error.hpp"
#include "clsim/policy.hpp"
#include "clsim/trail.hpp"

namespace clsim {

struct SimConfig {
  PolicyKind policy = PolicyKind::CLS;
  std::uint32_t depth = 3;
  std::uint32_t fanout = 2;
  std::uint32_t clients_per_leaf = 1;
  std::uint32_t num_files = 100;
  std::uint32_t chunks_per_file = 12;
  std::uint32_t chunk_size_bytes = 4096;
  double cache_fraction = 0.2;
  double alpha = 0.9;
  double lambda_req_per_s = 5.0;
  std::uint64_t num_requests = 100000;
  std::optional<Hops> h_th;  // default: ceil(depth / 2)
  double link_delay_ms = 10.0;
  std::uint64_t seed = 1;

  Hops effective_h_th() const { return h_th ? *h_th : (depth + 1) / 2; }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string where(std::size_t line, std::string_view key) {
  return "line " + std::to_string(line) + " (" + std::string(key) + ")";
}

template <typename T>
T parse_number(std::string_view v, std::size_t line, std::string_view key) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(where(line, key) + ": expected a number, got '" + std::string(v) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) throw ConfigError(where(line, key) + ": value must be finite");
  }
  return out;
}

template <typename T>
T positive_int(std::string_view v, std::size_t line, std::string_view key) {
  if (!v.empty() && v.front() == '-') {
    throw ConfigError(where(line, key) + ": must be a positive integer");
  }
  auto n = parse_number<std::uint64_t>(v, line, key);
  if (n == 0 || n > std::numeric_limits<T>::max()) {
    throw ConfigError(where(line, key) + ": must be a positive integer");
  }
  return static_cast<T>(n);
}

}  // namespace detail

/// Cross-field checks shared by the parser and programmatic callers.
inline void validate(const SimConfig& c) {
  if (c.depth < 1 || c.fanout < 1 || c.clients_per_leaf < 1)
    throw ConfigError("topology: depth, fanout and clients_per_leaf must be >= 1");
  if (c.num_files < 1 || c.chunks_per_file < 1 || c.chunk_size_bytes < 1)
    throw ConfigError("catalog: num_files, chunks_per_file and chunk_size_bytes must be >= 1");
  if (!(c.cache_fraction > 0.0 && c.cache_fraction <= 1.0))
    throw ConfigError("cache_fraction: must be in (0, 1]");
  if (!(c.alpha >= 0.0)) throw ConfigError("alpha: must be >= 0");
  if (!(c.lambda_req_per_s > 0.0)) throw ConfigError("lambda_req_per_s: must be > 0");
  if (!(c.link_delay_ms > 0.0)) throw ConfigError("link_delay_ms: must be > 0");
  if (c.num_requests < 1) throw ConfigError("num_requests: must be >= 1");
  if (c.h_th && *c.h_th < 1) throw ConfigError("h_th: must be >= 1");

  std::uint64_t routers = 0, width = 1;
  for (std::uint32_t l = 0; l < c.depth; ++l) {
    width *= c.fanout;
    routers += width;
    if (routers > 10'000'000) throw ConfigError("topology: tree too large");
  }
  auto budget = static_cast<std::uint64_t>(
      std::floor(c.cache_fraction * double(c.num_files) * double(c.chunks_per_file) + 1e-9));
  if (budget < routers) {
    throw ConfigError("cache_fraction: budget of " + std::to_string(budget) +
                      " chunks leaves some of the " + std::to_string(routers) +
                      " routers without a cache slot");
  }
}

/// Parses `key = value` lines; `#` starts a comment.
inline SimConfig parse_config(std::string_view text) {
  using detail::parse_number;
  using detail::positive_int;
  SimConfig c;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string_view key = detail::trim(line.substr(0, eq));
    std::string_view val = detail::trim(line.substr(eq + 1));
    auto range = [&](bool ok, const char* msg) {
      if (!ok) throw ConfigError(detail::where(line_no, key) + ": " + msg);
    };

    if (key == "policy") {
      auto p = parse_policy(val);
      range(p.has_value(), "expected one of lce, lcd, mcd, cls");
      c.policy = *p;
    } else if (key == "depth") {
      c.depth = positive_int<std::uint32_t>(val, line_no, key);
    } else if (key == "fanout") {
      c.fanout = positive_int<std::uint32_t>(val, line_no, key);
    } else if (key == "clients_per_leaf") {
      c.clients_per_leaf = positive_int<std::uint32_t>(val, line_no, key);
    } else if (key == "num_files") {
      c.num_files = positive_int<std::uint32_t>(val, line_no, key);
    } else if (key == "chunks_per_file") {
      c.chunks_per_file = positive_int<std::uint32_t>(val, line_no, key);
    } else if (key == "chunk_size_bytes") {
      c.chunk_size_bytes = positive_int<std::uint32_t>(val, line_no, key);
    } else if (key == "cache_fraction") {
      c.cache_fraction = parse_number<double>(val, line_no, key);
      range(c.cache_fraction > 0.0 && c.cache_fraction <= 1.0, "must be in (0, 1]");
    } else if (key == "alpha") {
      c.alpha = parse_number<double>(val, line_no, key);
      range(c.alpha >= 0.0, "must be >= 0");
    } else if (key == "lambda_req_per_s") {
      c.lambda_req_per_s = parse_number<double>(val, line_no, key);
      range(c.lambda_req_per_s > 0.0, "must be > 0");
    } else if (key == "num_requests") {
      c.num_requests = positive_int<std::uint64_t>(val, line_no, key);
    } else if (key == "h_th") {
      c.h_th = positive_int<Hops>(val, line_no, key);
    } else if (key == "link_delay_ms") {
      c.link_delay_ms = parse_number<double>(val, line_no, key);
      range(c.link_delay_ms > 0.0, "must be > 0");
    } else if (key == "seed") {
      if (!val.empty() && val.front() == '-') range(false, "must be a non-negative integer");
      c.seed = parse_number<std::uint64_t>(val, line_no, key);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) +
                        "'");
    }
  }
  validate(c);
  return c;
}

}  // namespace clsim
