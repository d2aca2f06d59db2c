#include "linsysid/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "linsysid/bounds.hpp"
#include "linsysid/errors.hpp"
#include "linsysid/estimator.hpp"
#include "linsysid/kvtext.hpp"

namespace linsysid {

SystemModel make_system(const std::string& name, const LinearSystemSpec& linear) {
  if (name == "pendulum") return builtin_pendulum();
  if (name == "strong") return builtin_strong();
  if (name == "linear") return random_linear(linear.n, linear.p, linear.spectral_radius, linear.seed);
  throw ConfigInvalid("unknown system '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (system != "pendulum" && system != "strong" && system != "linear") {
    throw ConfigInvalid("unknown system '" + system + "'");
  }
  if (params.empty()) {
    throw ConfigInvalid(mode == AcquisitionMode::multi_traj ? "q_list is empty"
                                                           : "sigma_u_list is empty");
  }
  for (double v : params) {
    if (mode == AcquisitionMode::multi_traj && !(v > 0.0 && std::isfinite(v))) {
      throw ConfigInvalid("q values must be positive");
    }
    if (mode == AcquisitionMode::single_traj && !(v >= 0.0 && std::isfinite(v))) {
      throw ConfigInvalid("sigma_u values must be nonnegative");
    }
  }
  if (N_list.empty()) throw ConfigInvalid("N_list is empty");
  for (auto N : N_list) {
    if (N < 1) throw ConfigInvalid("N values must be positive");
  }
  if (std::set<double>(params.begin(), params.end()).size() != params.size()) {
    throw ConfigInvalid("parameter list has duplicates");
  }
  if (std::set<std::size_t>(N_list.begin(), N_list.end()).size() != N_list.size()) {
    throw ConfigInvalid("N_list has duplicates");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigInvalid("lambda must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigInvalid("delta must be in (0, 1)");
  if (trials < 1) throw ConfigInvalid("trials must be >= 1");
  if (!(noise.sigma_w >= 0.0) || !std::isfinite(noise.sigma_w)) {
    throw ConfigInvalid("sigma_w must be >= 0");
  }
  if (!(divergence_cap > 0.0)) throw ConfigInvalid("divergence_cap must be positive");
  if (linear.n < 1 || linear.p < 1 || !(linear.spectral_radius > 0.0)) {
    throw ConfigInvalid("linear system parameters are invalid");
  }
}

ExperimentConfig parse_config(const std::map<std::string, std::string>& entries) {
  ExperimentConfig cfg;
  bool have_q = false;
  bool have_sigma_u = false;
  std::vector<double> q_list;
  std::vector<double> sigma_u_list;
  for (const auto& [key, value] : entries) {
    if (key == "system") {
      cfg.system = value;
    } else if (key == "mode") {
      cfg.mode = parse_mode(value);
    } else if (key == "q_list") {
      q_list = parse_real_list(value, key);
      have_q = true;
    } else if (key == "sigma_u_list") {
      sigma_u_list = parse_real_list(value, key);
      have_sigma_u = true;
    } else if (key == "N_list") {
      for (auto v : parse_count_list(value, key)) cfg.N_list.push_back(static_cast<std::size_t>(v));
    } else if (key == "lambda") {
      cfg.lambda = parse_real(value, key);
    } else if (key == "delta") {
      cfg.delta = parse_real(value, key);
    } else if (key == "trials") {
      cfg.trials = parse_count(value, key);
    } else if (key == "master_seed") {
      cfg.master_seed = parse_count(value, key);
    } else if (key == "noise_kind") {
      cfg.noise.kind = parse_noise_kind(value);
    } else if (key == "sigma_w") {
      cfg.noise.sigma_w = parse_real(value, key);
    } else if (key == "divergence_cap") {
      cfg.divergence_cap = parse_real(value, key);
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "linear_n") {
      cfg.linear.n = static_cast<int>(parse_count(value, key));
    } else if (key == "linear_p") {
      cfg.linear.p = static_cast<int>(parse_count(value, key));
    } else if (key == "linear_spectral_radius") {
      cfg.linear.spectral_radius = parse_real(value, key);
    } else if (key == "linear_seed") {
      cfg.linear.seed = parse_count(value, key);
    } else {
      throw ConfigInvalid("unknown config key '" + key + "'");
    }
  }
  if (cfg.mode == AcquisitionMode::multi_traj) {
    if (have_sigma_u) throw ConfigInvalid("sigma_u_list given for multi_traj mode");
    if (!have_q) throw ConfigInvalid("multi_traj mode requires q_list");
    cfg.params = q_list;
  } else {
    if (have_q) throw ConfigInvalid("q_list given for single_traj mode");
    if (!have_sigma_u) throw ConfigInvalid("single_traj mode requires sigma_u_list");
    cfg.params = sigma_u_list;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_key_value_file(path));
}

std::vector<std::size_t> log_spaced_counts(std::size_t lo, std::size_t hi, int points) {
  if (lo < 1 || hi < lo || points < 1) {
    throw PreconditionViolated("log_spaced_counts: need 1 <= lo <= hi and points >= 1");
  }
  std::vector<std::size_t> counts;
  const double a = std::log10(static_cast<double>(lo));
  const double b = std::log10(static_cast<double>(hi));
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    const auto v = static_cast<std::size_t>(std::llround(std::pow(10.0, a + t * (b - a))));
    if (counts.empty() || counts.back() != v) counts.push_back(v);
  }
  return counts;
}

ExperimentConfig figure_config(int figure, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.N_list = log_spaced_counts(100, 100000, 12);
  cfg.lambda = 0.0;
  cfg.delta = 0.1;
  cfg.trials = 10;
  cfg.master_seed = seed;
  cfg.noise = {NoiseKind::gaussian, 0.5};
  switch (figure) {
    case 1:
      cfg.system = "pendulum";
      cfg.mode = AcquisitionMode::multi_traj;
      cfg.params = {0.6, 0.9, 1.2};
      break;
    case 2:
      cfg.system = "pendulum";
      cfg.mode = AcquisitionMode::single_traj;
      cfg.params = {0.001, 0.01, 0.1};
      break;
    case 3:
      cfg.system = "strong";
      cfg.mode = AcquisitionMode::multi_traj;
      cfg.params = {0.2, 0.4, 0.6};
      break;
    default:
      throw ConfigInvalid("figure must be 1, 2 or 3");
  }
  return cfg;
}

namespace {

enum class TrialStatus { completed, diverged, singular };

struct TrialOutcome {
  TrialStatus status = TrialStatus::completed;
  double error = 0.0;
};

struct CellSpec {
  double param;
  std::size_t N;
};

std::uint64_t cell_key(AcquisitionMode mode, double param, std::size_t N) {
  std::uint64_t key = mode == AcquisitionMode::multi_traj ? 0x6D756C7469ULL : 0x73696E676CULL;
  key = hash_combine(key, std::bit_cast<std::uint64_t>(param));
  return hash_combine(key, static_cast<std::uint64_t>(N));
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const SystemModel& sys, const CellSpec& cell,
                       std::uint64_t trial) {
  const SeedPolicy seeds = SeedPolicy{cfg.master_seed}.for_cell(cell_key(cfg.mode, cell.param, cell.N));
  Stream stream = seeds.stream(trial);
  GramAccumulator acc(sys.n(), sys.p());
  auto sink = [&acc](const Vector& x1, const Vector& z0, const Vector&) { acc.add(x1, z0); };
  if (cfg.mode == AcquisitionMode::multi_traj) {
    for_each_multi_sample(sys, cell.param, cell.N, cfg.noise, stream, sink);
  } else {
    const auto diverged =
        for_each_single_sample(sys, cell.param, cell.N, cfg.noise, stream, cfg.divergence_cap, sink);
    if (diverged) return {TrialStatus::diverged, 0.0};
  }
  try {
    return {TrialStatus::completed, estimation_error(fit(acc, cfg.lambda), sys.theta_true())};
  } catch (const SingularGram&) {
    return {TrialStatus::singular, 0.0};
  }
}

std::string describe(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# master_seed=" << cfg.master_seed << " system=" << cfg.system
     << " mode=" << to_string(cfg.mode) << " lambda=" << format_real(cfg.lambda)
     << " delta=" << format_real(cfg.delta) << " trials=" << cfg.trials
     << " noise=" << to_string(cfg.noise.kind) << " sigma_w=" << format_real(cfg.noise.sigma_w);
  if (cfg.system == "linear") {
    os << " linear_n=" << cfg.linear.n << " linear_p=" << cfg.linear.p
       << " linear_spectral_radius=" << format_real(cfg.linear.spectral_radius)
       << " linear_seed=" << cfg.linear.seed;
  }
  if (cfg.mode == AcquisitionMode::single_traj) {
    os << " x0=0 divergence_cap=" << format_real(cfg.divergence_cap) << " divergence=stop";
  }
  return os.str();
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const SystemModel sys = make_system(cfg.system, cfg.linear);

  std::vector<double> params = cfg.params;
  std::vector<std::size_t> counts = cfg.N_list;
  std::sort(params.begin(), params.end());
  std::sort(counts.begin(), counts.end());

  std::vector<CellSpec> cells;
  for (double param : params) {
    for (std::size_t N : counts) cells.push_back({param, N});
  }

  const std::size_t tasks = cells.size() * cfg.trials;
  std::vector<TrialOutcome> outcomes(tasks);
  std::vector<std::exception_ptr> failures(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) {
      try {
        outcomes[t] = run_trial(cfg, sys, cells[t / cfg.trials], t % cfg.trials);
      } catch (...) {
        failures[t] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  const double theta_norm = spectral_norm(sys.theta_true().assembled());
  SweepResult res;
  res.header_comment = describe(cfg);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepRow row;
    row.mode = cfg.mode;
    row.param = cells[c].param;
    row.N = cells[c].N;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = outcomes[c * cfg.trials + t];
      switch (o.status) {
        case TrialStatus::completed:
          row.trial_errors.push_back(o.error);
          break;
        case TrialStatus::singular:
          ++row.singular_count;
          ++row.diverged_count;
          break;
        case TrialStatus::diverged:
          ++row.diverged_count;
          break;
      }
    }
    row.trials_completed = row.trial_errors.size();
    if (row.trials_completed > 0) {
      double sum = 0.0;
      for (double e : row.trial_errors) sum += e;
      const double mean = sum / static_cast<double>(row.trials_completed);
      row.mean_error = mean;
      if (row.trials_completed > 1) {
        double ss = 0.0;
        for (double e : row.trial_errors) ss += (e - mean) * (e - mean);
        row.std_error = std::sqrt(ss / static_cast<double>(row.trials_completed - 1));
      }
    }
    if (cfg.mode == AcquisitionMode::multi_traj && sys.remainder_coeff()) {
      BoundInputs in;
      in.n = sys.n();
      in.p = sys.p();
      in.N = row.N;
      in.q = row.param;
      in.lambda = cfg.lambda;
      in.delta = cfg.delta;
      in.sigma_w = cfg.noise.kind == NoiseKind::none ? 0.0 : cfg.noise.sigma_w;
      in.beta = *sys.remainder_coeff();
      in.c = sys.remainder_radius();
      in.theta_norm = theta_norm;
      const BoundReport b = theorem1_bound(in);
      row.bound_total = b.total;
      row.bound_valid = b.valid;
    }
    res.rows.push_back(std::move(row));
  }
  return res;
}

void write_csv(const SweepResult& res, std::ostream& out) {
  out << (res.header_comment.empty() ? std::string("#") : res.header_comment) << "\n";
  out << "mode,param,N,mean_error,std_error,trials_completed,diverged_count,bound_total,bound_valid\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  for (const auto& row : res.rows) {
    out << to_string(row.mode) << ',' << format_real(row.param) << ',' << row.N << ','
        << opt(row.mean_error) << ',' << opt(row.std_error) << ',' << row.trials_completed << ','
        << row.diverged_count << ',' << opt(row.bound_total) << ','
        << (row.bound_total ? (row.bound_valid ? "true" : "false") : "") << "\n";
  }
}

void emit_csv(const SweepResult& res, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_csv(res, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace linsysid
