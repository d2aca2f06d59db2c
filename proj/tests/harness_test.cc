#include "linsysid/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "linsysid/kvtext.hpp"

namespace linsysid {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.system = "pendulum";
  cfg.mode = AcquisitionMode::multi_traj;
  cfg.params = {0.9, 0.3};
  cfg.N_list = {400, 24, 100};
  cfg.trials = 4;
  cfg.master_seed = 11;
  return cfg;
}

std::string csv_text(const SweepResult& res) {
  std::ostringstream os;
  write_csv(res, os);
  return os.str();
}

std::vector<std::vector<std::string>> data_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::getline(in, line);  // comment
  std::getline(in, line);  // header
  while (std::getline(in, line)) rows.push_back(split(line, ','));
  return rows;
}

TEST(SweepTest, NoiselessLinearRecoversExactly) {
  ExperimentConfig cfg;
  cfg.system = "linear";
  cfg.params = {0.1, 1.0, 1.7};
  cfg.N_list = {12, 50, 333};
  cfg.trials = 3;
  cfg.noise = {NoiseKind::none, 0.0};
  const SweepResult res = run_sweep(cfg);
  ASSERT_EQ(res.rows.size(), 9u);
  for (const auto& row : res.rows) {
    ASSERT_TRUE(row.mean_error.has_value());
    EXPECT_LE(*row.mean_error, 1e-9);
    EXPECT_EQ(row.trials_completed, 3u);
    EXPECT_TRUE(row.bound_total.has_value());
  }
}

TEST(SweepTest, RowOrderAndLayout) {
  const SweepResult res = run_sweep(small_config());
  const auto rows = data_rows(csv_text(res));
  ASSERT_EQ(rows.size(), 6u);
  const std::pair<double, std::size_t> expected[] = {{0.3, 24}, {0.3, 100}, {0.3, 400},
                                                     {0.9, 24}, {0.9, 100}, {0.9, 400}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 9u);
    EXPECT_EQ(rows[i][0], "multi_traj");
    EXPECT_EQ(parse_real(rows[i][1], "param"), expected[i].first);
    EXPECT_EQ(parse_count(rows[i][2], "N"), expected[i].second);
    EXPECT_EQ(parse_real(rows[i][3], "mean"), *res.rows[i].mean_error);
    EXPECT_EQ(rows[i][5], "4");
    EXPECT_EQ(rows[i][6], "0");
    EXPECT_FALSE(rows[i][7].empty());
    EXPECT_EQ(rows[i][8], "true");
  }
}

TEST(SweepTest, EmptyResultWritesHeaderOnly) {
  SweepResult empty;
  empty.header_comment = "# master_seed=0";
  EXPECT_EQ(csv_text(empty),
            "# master_seed=0\n"
            "mode,param,N,mean_error,std_error,trials_completed,diverged_count,bound_total,bound_valid\n");
}

TEST(SweepTest, AggregationMatchesIndependentPass) {
  const SweepResult res = run_sweep(small_config());
  for (const auto& row : res.rows) {
    ASSERT_EQ(row.trial_errors.size(), 4u);
    long double sum = 0.0L;
    for (double e : row.trial_errors) sum += e;
    const long double mean = sum / 4.0L;
    long double ss = 0.0L;
    for (double e : row.trial_errors) ss += (e - mean) * (e - mean);
    EXPECT_NEAR(*row.mean_error, static_cast<double>(mean), 1e-12);
    EXPECT_NEAR(*row.std_error, static_cast<double>(std::sqrt(ss / 3.0L)), 1e-12);
  }
}

TEST(SweepTest, DeterministicAcrossThreadCounts) {
  const ExperimentConfig cfg = small_config();
  const std::string serial = csv_text(run_sweep(cfg, 1));
  EXPECT_EQ(serial, csv_text(run_sweep(cfg, 1)));
  EXPECT_EQ(serial, csv_text(run_sweep(cfg, 3)));
  EXPECT_EQ(serial, csv_text(run_sweep(cfg, 8)));
  EXPECT_EQ(serial, csv_text(run_sweep(cfg, 0)));
}

TEST(SweepTest, CellsAreIndependentOfEachOther) {
  const ExperimentConfig full = small_config();
  ExperimentConfig reduced = full;
  reduced.params = {0.9};
  reduced.N_list = {100};
  const SweepResult a = run_sweep(full);
  const SweepResult b = run_sweep(reduced);
  ASSERT_EQ(b.rows.size(), 1u);
  const SweepRow& match = a.rows[4];
  ASSERT_EQ(match.param, 0.9);
  ASSERT_EQ(match.N, 100u);
  EXPECT_EQ(match.trial_errors, b.rows[0].trial_errors);
}

TEST(SweepTest, StrongSingleTrajectoryDiverges) {
  ExperimentConfig cfg;
  cfg.system = "strong";
  cfg.mode = AcquisitionMode::single_traj;
  cfg.params = {0.1};
  cfg.N_list = {10000};
  cfg.trials = 5;
  const SweepResult res = run_sweep(cfg);
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_EQ(res.rows[0].diverged_count, 5u);
  EXPECT_EQ(res.rows[0].trials_completed, 0u);
  EXPECT_FALSE(res.rows[0].mean_error.has_value());
  EXPECT_FALSE(res.rows[0].bound_total.has_value());
  const auto rows = data_rows(csv_text(res));
  EXPECT_EQ(rows[0][3], "");
  EXPECT_EQ(rows[0][7], "");
}

TEST(SweepTest, SingularTrialsAreCountedNotFatal) {
  ExperimentConfig cfg = small_config();
  cfg.N_list = {2};
  const SweepResult res = run_sweep(cfg);
  for (const auto& row : res.rows) {
    EXPECT_EQ(row.singular_count, 4u);
    EXPECT_EQ(row.diverged_count + row.trials_completed, 4u);
    EXPECT_FALSE(row.bound_valid);
  }
}

TEST(ConfigTest, ParsesAllKeys) {
  std::istringstream text(
      "# sweep\n"
      "system = linear\n"
      "mode = single_traj\n"
      "sigma_u_list = 0.1, 0.01\n"
      "N_list = 100, 1000\n"
      "lambda = 0.5\n"
      "delta = 0.05\n"
      "trials = 3\n"
      "master_seed = 99\n"
      "noise_kind = uniform\n"
      "sigma_w = 0.2\n"
      "divergence_cap = 1e4\n"
      "output = out.csv\n"
      "linear_n = 3\n"
      "linear_p = 2\n"
      "linear_spectral_radius = 0.7\n"
      "linear_seed = 5\n");
  const ExperimentConfig cfg = parse_config(parse_key_values(text));
  EXPECT_EQ(cfg.system, "linear");
  EXPECT_EQ(cfg.mode, AcquisitionMode::single_traj);
  EXPECT_EQ(cfg.params, (std::vector<double>{0.1, 0.01}));
  EXPECT_EQ(cfg.N_list, (std::vector<std::size_t>{100, 1000}));
  EXPECT_EQ(cfg.lambda, 0.5);
  EXPECT_EQ(cfg.delta, 0.05);
  EXPECT_EQ(cfg.trials, 3u);
  EXPECT_EQ(cfg.master_seed, 99u);
  EXPECT_EQ(cfg.noise.kind, NoiseKind::uniform);
  EXPECT_EQ(cfg.noise.sigma_w, 0.2);
  EXPECT_EQ(cfg.divergence_cap, 1e4);
  EXPECT_EQ(cfg.output, "out.csv");
  EXPECT_EQ(cfg.linear.n, 3);
  EXPECT_EQ(cfg.linear.p, 2);
  EXPECT_EQ(cfg.linear.spectral_radius, 0.7);
  EXPECT_EQ(cfg.linear.seed, 5u);
}

TEST(ConfigTest, RejectsInvalidConfigs) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_config(parse_key_values(in));
  };
  EXPECT_THROW(parse("q_list = 0.5\nN_list = 10\nqlist = 1\n"), ConfigInvalid);
  EXPECT_THROW(parse("N_list = 10\n"), ConfigInvalid);
  EXPECT_THROW(parse("q_list = 0.5\nN_list = 10\nsigma_u_list = 0.1\n"), ConfigInvalid);
  EXPECT_THROW(parse("mode = single_traj\nq_list = 0.5\nN_list = 10\n"), ConfigInvalid);
  EXPECT_THROW(parse("q_list = 0.5\nN_list = 10\ntrials = 0\n"), ConfigInvalid);
  EXPECT_THROW(parse("q_list = -0.5\nN_list = 10\n"), ConfigInvalid);
  EXPECT_THROW(parse("q_list = 0.5\nN_list = 10\nsystem = cartpole\n"), ConfigInvalid);
  EXPECT_THROW(parse("q_list = 0.5\nN_list = 10\ndelta = 1\n"), ConfigInvalid);
  EXPECT_THROW(parse("q_list = 0.5, 0.5\nN_list = 10\n"), ConfigInvalid);
  EXPECT_THROW(parse("q_list = 0.5\nq_list = 0.6\nN_list = 10\n"), ConfigInvalid);
  EXPECT_THROW(parse("q_list = 0.5\nN_list = ten\n"), ConfigInvalid);
  EXPECT_THROW(parse("just a line\n"), ConfigInvalid);
}

TEST(FigureConfigTest, PinnedGrids) {
  const auto grid = log_spaced_counts(100, 100000, 12);
  ASSERT_EQ(grid.size(), 12u);
  EXPECT_EQ(grid.front(), 100u);
  EXPECT_EQ(grid.back(), 100000u);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));

  const ExperimentConfig fig1 = figure_config(1, 7);
  EXPECT_EQ(fig1.system, "pendulum");
  EXPECT_EQ(fig1.mode, AcquisitionMode::multi_traj);
  EXPECT_EQ(fig1.params, (std::vector<double>{0.6, 0.9, 1.2}));
  EXPECT_EQ(fig1.trials, 10u);
  EXPECT_EQ(fig1.master_seed, 7u);
  EXPECT_EQ(fig1.noise.sigma_w, 0.5);
  EXPECT_EQ(figure_config(2, 0).mode, AcquisitionMode::single_traj);
  EXPECT_EQ(figure_config(2, 0).params, (std::vector<double>{0.001, 0.01, 0.1}));
  EXPECT_EQ(figure_config(3, 0).system, "strong");
  EXPECT_EQ(figure_config(3, 0).params, (std::vector<double>{0.2, 0.4, 0.6}));
  EXPECT_THROW(figure_config(4, 0), ConfigInvalid);
}

}  // namespace
}  // namespace linsysid
