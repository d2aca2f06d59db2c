#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linsysid/dynamics.hpp"
#include "linsysid/errors.hpp"
#include "linsysid/noise.hpp"

namespace linsysid {

enum class AcquisitionMode { multi_traj, single_traj };

std::string to_string(AcquisitionMode mode);
AcquisitionMode parse_mode(const std::string& text);

struct Sample {
  Vector x1;  // observed successor
  Vector x0;
  Vector u0;
};

struct Dataset {
  int n = 0;
  int p = 0;
  std::vector<Sample> samples;
  AcquisitionMode mode = AcquisitionMode::multi_traj;
  double q = 0.0;        // multi_traj only
  double sigma_u = 0.0;  // single_traj only
  std::string system_name;
  std::uint64_t master_seed = 0;
  std::uint64_t trial = 0;
  /// 1-based step at which a single trajectory left the divergence cap.
  std::optional<std::size_t> diverged_at;
  std::vector<std::string> warnings;
};

/// Realized noise and remainder batches, one column per sample. Unobservable
/// to the estimator; kept for error-decomposition checks.
struct AcquisitionTrace {
  Matrix W;
  Matrix R;
};

struct InitialCondition {
  Vector z0;
  int s_next = 1;
};

/// One step of the signed, cycled unit-vector design.
///
/// For i mod (n+p) != 0 the initial condition is s*q*e_{i mod (n+p)}; otherwise
/// it is s*q*e_{n+p} and the sign flips. Unit vectors are 1-based.
InitialCondition alg1_initial_condition(std::size_t i, double q, int n, int p, int s);

/// Feeds each multi-trajectory sample to `visit(x1, z0, w)` without storing it.
/// Draws exactly one noise vector per sample from `stream`.
template <typename Visitor>
void for_each_multi_sample(const SystemModel& sys, double q, std::size_t count,
                           const NoiseSpec& noise, Stream& stream, Visitor&& visit) {
  if (!(q > 0.0)) throw PreconditionViolated("multi-trajectory acquisition: q must be positive");
  int sign = 1;
  for (std::size_t i = 1; i <= count; ++i) {
    InitialCondition ic = alg1_initial_condition(i, q, sys.n(), sys.p(), sign);
    sign = ic.s_next;
    const Vector w = draw_noise(noise, sys.n(), stream);
    const Vector x1 = sys.evaluate(ic.z0) + w;
    visit(x1, ic.z0, w);
  }
}

/// Feeds consecutive single-trajectory transitions to `visit(x1, z0, w)`,
/// starting at x = 0. Stops before emitting a transition whose successor has a
/// component outside [-cap, cap] (or non-finite) and returns its 1-based step.
template <typename Visitor>
std::optional<std::size_t> for_each_single_sample(const SystemModel& sys, double sigma_u,
                                                  std::size_t count, const NoiseSpec& noise,
                                                  Stream& stream, double divergence_cap,
                                                  Visitor&& visit) {
  if (!(divergence_cap > 0.0)) {
    throw PreconditionViolated("single-trajectory acquisition: divergence cap must be positive");
  }
  Vector z = Vector::Zero(sys.z_dim());
  for (std::size_t k = 1; k <= count; ++k) {
    z.tail(sys.p()) = draw_gaussian_input(sigma_u, sys.p(), stream);
    const Vector w = draw_noise(noise, sys.n(), stream);
    const Vector x1 = sys.evaluate(z) + w;
    if (!(x1.cwiseAbs().maxCoeff() <= divergence_cap)) return k;
    visit(x1, z, w);
    z.head(sys.n()) = x1;
  }
  return std::nullopt;
}

/// Multi-trajectory data set with s_1 = +1, noise from seeds.stream(trial).
Dataset collect_multi(const SystemModel& sys, double q, std::size_t count,
                      const NoiseSpec& noise, const SeedPolicy& seeds, std::uint64_t trial,
                      AcquisitionTrace* trace = nullptr);

/// Single-trajectory rollout from x_0 = 0 under i.i.d. N(0, sigma_u^2) inputs.
Dataset collect_single(const SystemModel& sys, double sigma_u, std::size_t count,
                       const NoiseSpec& noise, const SeedPolicy& seeds, std::uint64_t trial,
                       double divergence_cap = 1e6, AcquisitionTrace* trace = nullptr);

/// Writes `path` (CSV, header idx,x0_*,u0_*,x1_*) and `path + ".meta"`.
void write_dataset(const Dataset& ds, const std::string& path);

/// Reads a data set CSV; metadata is taken from the sidecar when present.
Dataset read_dataset(const std::string& path);

}  // namespace linsysid
