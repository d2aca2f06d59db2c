#include "linsysid/acquisition.hpp"

#include <fstream>
#include <sstream>

#include "linsysid/kvtext.hpp"

namespace linsysid {

std::string to_string(AcquisitionMode mode) {
  return mode == AcquisitionMode::multi_traj ? "multi_traj" : "single_traj";
}

AcquisitionMode parse_mode(const std::string& text) {
  if (text == "multi_traj") return AcquisitionMode::multi_traj;
  if (text == "single_traj") return AcquisitionMode::single_traj;
  throw ConfigInvalid("unknown acquisition mode '" + text + "'");
}

InitialCondition alg1_initial_condition(std::size_t i, double q, int n, int p, int s) {
  if (i < 1) throw PreconditionViolated("alg1_initial_condition: index is 1-based");
  if (!(q > 0.0)) throw PreconditionViolated("alg1_initial_condition: q must be positive");
  if (s != 1 && s != -1) throw PreconditionViolated("alg1_initial_condition: sign must be +-1");
  const auto d = static_cast<std::size_t>(n + p);
  InitialCondition ic;
  ic.z0 = Vector::Zero(n + p);
  const std::size_t r = i % d;
  if (r != 0) {
    ic.z0(static_cast<Eigen::Index>(r - 1)) = s * q;
    ic.s_next = s;
  } else {
    ic.z0(static_cast<Eigen::Index>(d - 1)) = s * q;
    ic.s_next = -s;
  }
  return ic;
}

namespace {

void start_trace(AcquisitionTrace* trace, int n, std::size_t count) {
  if (!trace) return;
  trace->W.setZero(n, static_cast<Eigen::Index>(count));
  trace->R.setZero(n, static_cast<Eigen::Index>(count));
}

void finish_trace(AcquisitionTrace* trace, std::size_t kept) {
  if (!trace) return;
  trace->W.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(kept));
  trace->R.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(kept));
}

}  // namespace

Dataset collect_multi(const SystemModel& sys, double q, std::size_t count,
                      const NoiseSpec& noise, const SeedPolicy& seeds, std::uint64_t trial,
                      AcquisitionTrace* trace) {
  if (count < 1) throw PreconditionViolated("collect_multi: need at least one experiment");
  Dataset ds;
  ds.n = sys.n();
  ds.p = sys.p();
  ds.mode = AcquisitionMode::multi_traj;
  ds.q = q;
  ds.system_name = sys.name();
  ds.master_seed = seeds.master_seed;
  ds.trial = trial;
  const auto d = static_cast<std::size_t>(sys.z_dim());
  if (count < 4 * d) {
    ds.warnings.push_back("N < 4(n+p): persistent-excitation bounds do not apply");
  }
  if (q > std::sqrt(static_cast<double>(d))) {
    ds.warnings.push_back("q > sqrt(n+p): finite-sample bound preconditions do not hold");
  }
  ds.samples.reserve(count);
  start_trace(trace, sys.n(), count);
  Stream stream = seeds.stream(trial);
  for_each_multi_sample(sys, q, count, noise, stream,
                        [&](const Vector& x1, const Vector& z0, const Vector& w) {
                          if (trace) {
                            const auto col = static_cast<Eigen::Index>(ds.samples.size());
                            trace->W.col(col) = w;
                            trace->R.col(col) = sys.remainder(z0);
                          }
                          ds.samples.push_back({x1, z0.head(sys.n()), z0.tail(sys.p())});
                        });
  return ds;
}

Dataset collect_single(const SystemModel& sys, double sigma_u, std::size_t count,
                       const NoiseSpec& noise, const SeedPolicy& seeds, std::uint64_t trial,
                       double divergence_cap, AcquisitionTrace* trace) {
  if (count < 1) throw PreconditionViolated("collect_single: need at least one step");
  Dataset ds;
  ds.n = sys.n();
  ds.p = sys.p();
  ds.mode = AcquisitionMode::single_traj;
  ds.sigma_u = sigma_u;
  ds.system_name = sys.name();
  ds.master_seed = seeds.master_seed;
  ds.trial = trial;
  ds.samples.reserve(count);
  start_trace(trace, sys.n(), count);
  Stream stream = seeds.stream(trial);
  ds.diverged_at = for_each_single_sample(
      sys, sigma_u, count, noise, stream, divergence_cap,
      [&](const Vector& x1, const Vector& z0, const Vector& w) {
        if (trace) {
          const auto col = static_cast<Eigen::Index>(ds.samples.size());
          trace->W.col(col) = w;
          trace->R.col(col) = sys.remainder(z0);
        }
        ds.samples.push_back({x1, z0.head(sys.n()), z0.tail(sys.p())});
      });
  finish_trace(trace, ds.samples.size());
  if (ds.diverged_at) {
    ds.warnings.push_back("trajectory left the divergence cap at step " +
                          std::to_string(*ds.diverged_at));
  }
  return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "# master_seed=" << ds.master_seed << " system=" << ds.system_name
      << " mode=" << to_string(ds.mode) << "\n";
  out << "idx";
  for (int i = 1; i <= ds.n; ++i) out << ",x0_" << i;
  for (int i = 1; i <= ds.p; ++i) out << ",u0_" << i;
  for (int i = 1; i <= ds.n; ++i) out << ",x1_" << i;
  out << "\n";
  std::size_t idx = 1;
  for (const auto& s : ds.samples) {
    out << idx++;
    for (auto v : s.x0) out << ',' << format_real(v);
    for (auto v : s.u0) out << ',' << format_real(v);
    for (auto v : s.x1) out << ',' << format_real(v);
    out << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");

  std::ofstream meta(path + ".meta");
  if (!meta) throw IoError("cannot write '" + path + ".meta'");
  meta << "# master_seed=" << ds.master_seed << "\n";
  meta << "mode = " << to_string(ds.mode) << "\n";
  meta << "system = " << ds.system_name << "\n";
  meta << "n = " << ds.n << "\n";
  meta << "p = " << ds.p << "\n";
  if (ds.mode == AcquisitionMode::multi_traj) {
    meta << "q = " << format_real(ds.q) << "\n";
  } else {
    meta << "sigma_u = " << format_real(ds.sigma_u) << "\n";
    meta << "diverged_at = " << (ds.diverged_at ? std::to_string(*ds.diverged_at) : "none")
         << "\n";
  }
  meta << "master_seed = " << ds.master_seed << "\n";
  meta << "trial = " << ds.trial << "\n";
  meta << "samples = " << ds.samples.size() << "\n";
  if (!meta) throw IoError("write failed for '" + path + ".meta'");
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  Dataset ds;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (!have_header) {
      if (fields.empty() || fields.front() != "idx") {
        throw IoError(path + ": missing 'idx' header");
      }
      for (const auto& f : fields) {
        if (f.rfind("x0_", 0) == 0) ++ds.n;
        if (f.rfind("u0_", 0) == 0) ++ds.p;
      }
      if (ds.n < 1 || ds.p < 1 || fields.size() != static_cast<std::size_t>(1 + 2 * ds.n + ds.p)) {
        throw IoError(path + ": header does not match idx,x0_*,u0_*,x1_*");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != static_cast<std::size_t>(1 + 2 * ds.n + ds.p)) {
      throw IoError(path + ": row with wrong field count");
    }
    Sample s{Vector(ds.n), Vector(ds.n), Vector(ds.p)};
    std::size_t k = 1;
    try {
      for (int i = 0; i < ds.n; ++i) s.x0(i) = parse_real(fields[k++], "x0");
      for (int i = 0; i < ds.p; ++i) s.u0(i) = parse_real(fields[k++], "u0");
      for (int i = 0; i < ds.n; ++i) s.x1(i) = parse_real(fields[k++], "x1");
    } catch (const ConfigInvalid& e) {
      throw IoError(path + ": " + e.what());
    }
    ds.samples.push_back(std::move(s));
  }
  if (!have_header) throw IoError(path + ": empty file");

  std::ifstream probe(path + ".meta");
  if (probe) {
    const auto meta = parse_key_values(probe);
    auto get = [&](const char* key) -> const std::string* {
      auto it = meta.find(key);
      return it == meta.end() ? nullptr : &it->second;
    };
    if (auto v = get("mode")) ds.mode = parse_mode(*v);
    if (auto v = get("system")) ds.system_name = *v;
    if (auto v = get("q")) ds.q = parse_real(*v, "q");
    if (auto v = get("sigma_u")) ds.sigma_u = parse_real(*v, "sigma_u");
    if (auto v = get("master_seed")) ds.master_seed = parse_count(*v, "master_seed");
    if (auto v = get("trial")) ds.trial = parse_count(*v, "trial");
    if (auto v = get("diverged_at"); v && *v != "none") {
      ds.diverged_at = parse_count(*v, "diverged_at");
    }
  }
  return ds;
}

}  // namespace linsysid
