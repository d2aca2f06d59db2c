#include "linsysid/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>

#include "linsysid/acquisition.hpp"
#include "linsysid/bounds.hpp"
#include "linsysid/errors.hpp"
#include "linsysid/estimator.hpp"
#include "linsysid/harness.hpp"
#include "linsysid/kvtext.hpp"

namespace linsysid {

namespace {

struct SystemOptions {
  std::string name = "pendulum";
  LinearSystemSpec linear;
};

void add_system_options(CLI::App* cmd, SystemOptions& sys) {
  cmd->add_option("--linear-n", sys.linear.n, "State dimension of the linear system");
  cmd->add_option("--linear-p", sys.linear.p, "Input dimension of the linear system");
  cmd->add_option("--linear-radius", sys.linear.spectral_radius, "Spectral radius of A");
  cmd->add_option("--linear-seed", sys.linear.seed, "Seed for the random linear system");
}

struct AcquireOptions {
  SystemOptions system;
  std::string mode = "multi_traj";
  double q = 0.5;
  double sigma_u = 0.1;
  std::size_t N = 100;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::string noise = "gaussian";
  double sigma_w = 0.5;
  double cap = 1e6;
  std::string out;
};

struct EstimateOptions {
  SystemOptions system;
  bool has_system = false;
  std::string in;
  std::string out;
  double lambda = 0.0;
};

struct BoundOptions {
  BoundInputs inputs;
  bool csv = false;
};

struct SweepOptions {
  std::string config;
  std::string out;
  unsigned threads = 0;
};

struct ReproduceOptions {
  std::string figure;
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 0;
  std::size_t trials = 0;
};

int run_acquire(const AcquireOptions& o, std::ostream& out, std::ostream& err) {
  const SystemModel sys = make_system(o.system.name, o.system.linear);
  const NoiseSpec noise{parse_noise_kind(o.noise), o.sigma_w};
  const SeedPolicy seeds{o.seed};
  const Dataset ds = parse_mode(o.mode) == AcquisitionMode::multi_traj
                         ? collect_multi(sys, o.q, o.N, noise, seeds, o.trial)
                         : collect_single(sys, o.sigma_u, o.N, noise, seeds, o.trial, o.cap);
  for (const auto& w : ds.warnings) err << "warning: " << w << "\n";
  write_dataset(ds, o.out);
  out << "wrote " << ds.samples.size() << " samples to " << o.out << "\n";
  return 0;
}

int run_estimate(const EstimateOptions& o, std::ostream& out) {
  const Dataset ds = read_dataset(o.in);
  std::optional<Theta> truth;
  if (o.has_system) {
    const SystemModel sys = make_system(o.system.name, o.system.linear);
    if (sys.n() != ds.n || sys.p() != ds.p) {
      throw DimensionMismatch("estimate: data set dimensions do not match the system");
    }
    truth = sys.theta_true();
  }
  const EstimateReport report = estimate(ds, o.lambda, truth);
  if (o.out.empty()) {
    write_estimate_report(report, out);
  } else {
    std::ofstream file(o.out);
    if (!file) throw IoError("cannot write '" + o.out + "'");
    file << "# master_seed=" << ds.master_seed << "\n";
    write_estimate_report(report, file);
    out << "wrote estimate to " << o.out << "\n";
  }
  return 0;
}

int run_bound(const BoundOptions& o, std::ostream& out) {
  const BoundInputs& in = o.inputs;
  const BoundReport r = theorem1_bound(in);
  auto line = [&](const char* label, const std::string& value) {
    out << std::left << std::setw(14) << label << value << "\n";
  };
  line("noise_term", format_real(r.noise_term));
  line("nonlin_term", format_real(r.nonlin_term));
  line("reg_term", format_real(r.reg_term));
  line("total", format_real(r.total));
  line("zeta", format_real(r.zeta));
  line("gamma", format_real(r.gamma));
  line("valid", r.valid ? "true" : "false");
  if (!in.enough_samples()) out << "note: N < 4(n+p)\n";
  if (!in.q_within_sqrt_d()) out << "note: q > sqrt(n+p)\n";
  if (!in.q_inside_ball()) out << "note: q >= c (outside certified ball)\n";
  if (o.csv) {
    out << "n,p,N,q,lambda,delta,sigma_w,beta,theta_norm,noise_term,nonlin_term,reg_term,total,valid\n";
    out << in.n << ',' << in.p << ',' << in.N << ',' << format_real(in.q) << ','
        << format_real(in.lambda) << ',' << format_real(in.delta) << ','
        << format_real(in.sigma_w) << ',' << format_real(in.beta) << ','
        << format_real(in.theta_norm) << ',' << format_real(r.noise_term) << ','
        << format_real(r.nonlin_term) << ',' << format_real(r.reg_term) << ','
        << format_real(r.total) << ',' << (r.valid ? "true" : "false") << "\n";
  }
  return 0;
}

int run_sweep_command(const SweepOptions& o, std::ostream& out) {
  ExperimentConfig cfg = load_config(o.config);
  if (!o.out.empty()) cfg.output = o.out;
  if (cfg.output.empty()) throw ConfigInvalid("no output path (config key 'output' or --out)");
  const SweepResult res = run_sweep(cfg, o.threads);
  emit_csv(res, cfg.output);
  out << "wrote " << res.rows.size() << " rows to " << cfg.output << "\n";
  return 0;
}

int run_reproduce(const ReproduceOptions& o, std::ostream& out) {
  const int figure = o.figure == "fig1" ? 1 : o.figure == "fig2" ? 2 : 3;
  ExperimentConfig cfg = figure_config(figure, o.seed);
  if (o.trials > 0) cfg.trials = o.trials;
  cfg.output = o.out.empty() ? o.figure + ".csv" : o.out;
  const SweepResult res = run_sweep(cfg, o.threads);
  emit_csv(res, cfg.output);
  out << "wrote " << res.rows.size() << " rows to " << cfg.output << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linearized system identification from multiple short trajectories", "linsysid"};
  app.require_subcommand(1);

  AcquireOptions acq;
  auto* acquire = app.add_subcommand("acquire", "Simulate a data set and write it as CSV");
  acquire->add_option("--system", acq.system.name, "pendulum | strong | linear")
      ->check(CLI::IsMember({"pendulum", "strong", "linear"}));
  add_system_options(acquire, acq.system);
  acquire->add_option("--mode", acq.mode, "multi_traj | single_traj")
      ->check(CLI::IsMember({"multi_traj", "single_traj"}));
  acquire->add_option("--q", acq.q, "Initial-condition magnitude (multi_traj)");
  acquire->add_option("--sigma-u", acq.sigma_u, "Input standard deviation (single_traj)");
  acquire->add_option("--N", acq.N, "Number of samples");
  acquire->add_option("--seed", acq.seed, "Master seed");
  acquire->add_option("--trial", acq.trial, "Trial index");
  acquire->add_option("--noise", acq.noise, "gaussian | uniform | none")
      ->check(CLI::IsMember({"gaussian", "uniform", "none"}));
  acquire->add_option("--sigma-w", acq.sigma_w, "Process noise scale");
  acquire->add_option("--cap", acq.cap, "Divergence cap on |state| (single_traj)");
  acquire->add_option("--out", acq.out, "Output CSV path")->required();

  EstimateOptions est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Fit [A B o] to a data set CSV");
  estimate_cmd->add_option("--in", est.in, "Data set CSV")->required();
  estimate_cmd->add_option("--lambda", est.lambda, "Ridge parameter (>= 0)");
  auto* est_system = estimate_cmd->add_option("--system", est.system.name,
                                              "Ground-truth system for error_vs_truth")
                         ->check(CLI::IsMember({"pendulum", "strong", "linear"}));
  add_system_options(estimate_cmd, est.system);
  estimate_cmd->add_option("--out", est.out, "Report path (default: stdout)");

  BoundOptions bnd;
  bnd.inputs.c = std::numeric_limits<double>::infinity();
  auto* bound = app.add_subcommand("bound", "Evaluate the finite-sample error bound");
  bound->add_option("--n", bnd.inputs.n, "State dimension")->required();
  bound->add_option("--p", bnd.inputs.p, "Input dimension")->required();
  bound->add_option("--N", bnd.inputs.N, "Number of experiments")->required();
  bound->add_option("--q", bnd.inputs.q, "Initial-condition magnitude")->required();
  bound->add_option("--lambda", bnd.inputs.lambda, "Ridge parameter");
  bound->add_option("--delta", bnd.inputs.delta, "Failure probability in (0, 1)");
  bound->add_option("--sigma-w", bnd.inputs.sigma_w, "Sub-Gaussian noise parameter");
  bound->add_option("--beta", bnd.inputs.beta, "Remainder coefficient");
  bound->add_option("--c", bnd.inputs.c, "Certified l1 radius (default: unbounded)");
  bound->add_option("--theta-norm", bnd.inputs.theta_norm, "Spectral norm of [A B o]");
  bound->add_flag("--csv", bnd.csv, "Also print a CSV header and row");

  SweepOptions swp;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment config and write a CSV");
  sweep->add_option("--config", swp.config, "Config file")->required();
  sweep->add_option("--out", swp.out, "Output CSV (overrides the config)");
  sweep->add_option("--threads", swp.threads, "Worker threads (0 = all cores)");

  ReproduceOptions rep;
  auto* reproduce = app.add_subcommand("reproduce", "Run a pinned figure configuration");
  reproduce->add_option("figure", rep.figure, "fig1 | fig2 | fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  reproduce->add_option("--seed", rep.seed, "Master seed");
  reproduce->add_option("--out", rep.out, "Output CSV (default: <figure>.csv)");
  reproduce->add_option("--threads", rep.threads, "Worker threads (0 = all cores)");
  reproduce->add_option("--trials", rep.trials, "Override the trial count");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*acquire) return run_acquire(acq, out, err);
    if (*estimate_cmd) {
      est.has_system = est_system->count() > 0;
      return run_estimate(est, out);
    }
    if (*bound) return run_bound(bnd, out);
    if (*sweep) return run_sweep_command(swp, out);
    if (*reproduce) return run_reproduce(rep, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace linsysid
