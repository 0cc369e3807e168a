#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "clsim/error.hpp"

namespace clsim {

/// 64-bit Mersenne Twister with platform-independent real-valued draws
/// (the std distributions are not bit-reproducible across libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over ranks 0..n-1 with p(i) proportional to (i+1)^-alpha.
class ZipfSampler {
 public:
  ZipfSampler(std::uint32_t n, double alpha) : cdf_(n) {
    if (n < 1) throw ConfigError("zipf: catalog size must be >= 1");
    if (!(alpha >= 0.0)) throw ConfigError("zipf: alpha must be >= 0");
    double sum = 0.0;
    for (std::uint32_t k = 0; k < n; ++k) {
      sum += std::pow(static_cast<double>(k + 1), -alpha);
      cdf_[k] = sum;
    }
    for (double& v : cdf_) v /= sum;
    cdf_.back() = 1.0;
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(cdf_.size()); }

  double probability(std::uint32_t i) const { return cdf_[i] - (i == 0 ? 0.0 : cdf_[i - 1]); }

  std::uint32_t operator()(Rng& rng) const {
    double u = rng.uniform01();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), size() - 1));
  }

 private:
  std::vector<double> cdf_;
};

inline std::uint32_t zipf_sample(Rng& rng, double alpha, std::uint32_t n) {
  return ZipfSampler(n, alpha)(rng);
}

/// Exponential interarrival in seconds with mean 1/lambda.
inline double poisson_next_interarrival(Rng& rng, double lambda_per_s) {
  if (!(lambda_per_s > 0.0)) throw ConfigError("poisson: lambda must be > 0");
  return -std::log1p(-rng.uniform01()) / lambda_per_s;
}

}  // namespace clsim
