#include "linsysid/noise.hpp"

#include <cmath>

#include "linsysid/errors.hpp"

namespace linsysid {

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian:
      return "gaussian";
    case NoiseKind::uniform:
      return "uniform";
    case NoiseKind::none:
      return "none";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "gaussian") return NoiseKind::gaussian;
  if (text == "uniform") return NoiseKind::uniform;
  if (text == "none") return NoiseKind::none;
  throw ConfigInvalid("unknown noise kind '" + text + "'");
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value + 0x9E3779B97F4A7C15ULL));
}

Stream SeedPolicy::stream(std::uint64_t trial, std::uint64_t sample) const {
  return Stream(hash_combine(hash_combine(master_seed, trial), sample));
}

SeedPolicy SeedPolicy::for_cell(std::uint64_t cell_key) const {
  return {hash_combine(master_seed ^ 0xC3A5C85C97CB3127ULL, cell_key)};
}

Vector draw_noise(const NoiseSpec& spec, int dim, Stream& stream) {
  if (dim < 1) throw DimensionMismatch("draw_noise: dim must be positive");
  if (!(spec.sigma_w >= 0.0)) throw PreconditionViolated("draw_noise: sigma_w must be >= 0");
  Vector w(dim);
  switch (spec.kind) {
    case NoiseKind::none:
      w.setZero();
      break;
    case NoiseKind::gaussian:
      for (int i = 0; i < dim; ++i) w(i) = spec.sigma_w * stream.standard_normal();
      break;
    case NoiseKind::uniform: {
      const double half_width = std::sqrt(3.0) * spec.sigma_w;
      for (int i = 0; i < dim; ++i) w(i) = half_width * stream.uniform_symmetric();
      break;
    }
  }
  return w;
}

Vector draw_gaussian_input(double sigma_u, int p, Stream& stream) {
  if (p < 1) throw DimensionMismatch("draw_gaussian_input: p must be positive");
  if (!(sigma_u >= 0.0)) throw PreconditionViolated("draw_gaussian_input: sigma_u must be >= 0");
  Vector u(p);
  for (int i = 0; i < p; ++i) u(i) = sigma_u * stream.standard_normal();
  return u;
}

}  // namespace linsysid
