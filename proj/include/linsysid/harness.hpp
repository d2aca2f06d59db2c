#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "linsysid/acquisition.hpp"
#include "linsysid/dynamics.hpp"
#include "linsysid/noise.hpp"

namespace linsysid {

/// Parameters of the "linear" built-in system.
struct LinearSystemSpec {
  int n = 2;
  int p = 1;
  double spectral_radius = 0.9;
  std::uint64_t seed = 0;
};

/// Built-in systems by name: "pendulum", "strong", "linear".
SystemModel make_system(const std::string& name, const LinearSystemSpec& linear = {});

struct ExperimentConfig {
  std::string system = "pendulum";
  LinearSystemSpec linear;
  AcquisitionMode mode = AcquisitionMode::multi_traj;
  /// q values (multi_traj) or sigma_u values (single_traj).
  std::vector<double> params;
  std::vector<std::size_t> N_list;
  double lambda = 0.0;
  double delta = 0.1;
  std::size_t trials = 10;
  std::uint64_t master_seed = 0;
  NoiseSpec noise;
  double divergence_cap = 1e6;
  std::string output;

  /// Throws ConfigInvalid.
  void validate() const;
};

/// Keys: system, mode, q_list | sigma_u_list, N_list, lambda, delta, trials,
/// master_seed, noise_kind, sigma_w, divergence_cap, output, linear_n,
/// linear_p, linear_spectral_radius, linear_seed. Unknown keys are rejected.
ExperimentConfig parse_config(const std::map<std::string, std::string>& entries);
ExperimentConfig load_config(const std::string& path);

/// `points` integers spaced evenly in log10 between lo and hi, inclusive.
std::vector<std::size_t> log_spaced_counts(std::size_t lo, std::size_t hi, int points);

/// Pinned configurations for the three figure reproductions (1, 2 or 3).
ExperimentConfig figure_config(int figure, std::uint64_t seed);

struct SweepRow {
  AcquisitionMode mode = AcquisitionMode::multi_traj;
  double param = 0.0;
  std::size_t N = 0;
  std::optional<double> mean_error;
  std::optional<double> std_error;
  std::size_t trials_completed = 0;
  /// Trials without an estimate: divergence, or a singular Gram at lambda = 0.
  std::size_t diverged_count = 0;
  std::size_t singular_count = 0;
  std::optional<double> bound_total;
  bool bound_valid = false;
  /// Errors of completed trials, in trial order.
  std::vector<double> trial_errors;
};

struct SweepResult {
  std::string header_comment;
  std::vector<SweepRow> rows;
};

/// Runs every (param, N, trial) combination. Each trial draws from a
/// substream keyed by (master_seed, mode, param, N, trial), so results do not
/// depend on thread count, scheduling, or which other cells are present.
/// `threads == 0` uses the hardware concurrency.
SweepResult run_sweep(const ExperimentConfig& cfg, unsigned threads = 1);

void write_csv(const SweepResult& res, std::ostream& out);
/// Writes to `path`; throws IoError.
void emit_csv(const SweepResult& res, const std::string& path);

}  // namespace linsysid
