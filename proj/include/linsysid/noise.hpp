#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "linsysid/numerics.hpp"

namespace linsysid {

enum class NoiseKind { gaussian, uniform, none };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& text);

/// Process-noise distribution with sub-Gaussian parameter sigma_w^2.
///
/// gaussian: N(0, sigma_w^2) per component. uniform: U[-sqrt(3) sigma_w, sqrt(3) sigma_w],
/// which has the same variance and is strictly sub-Gaussian. none: always zero.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian;
  double sigma_w = 0.5;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);

/// Counter-based random stream. Satisfies UniformRandomBitGenerator.
///
/// Streams are plain values: copying one forks an identical replay.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  double standard_normal() { return normal_(*this); }
  double uniform_symmetric() { return uniform_(*this); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{-1.0, 1.0};
};

/// Maps (master seed, trial, sample) to independent substreams.
struct SeedPolicy {
  std::uint64_t master_seed = 0;

  Stream stream(std::uint64_t trial, std::uint64_t sample = 0) const;

  /// Policy for a sweep cell; the key must depend only on the cell's parameters.
  SeedPolicy for_cell(std::uint64_t cell_key) const;
};

Vector draw_noise(const NoiseSpec& spec, int dim, Stream& stream);
Vector draw_gaussian_input(double sigma_u, int p, Stream& stream);

}  // namespace linsysid
