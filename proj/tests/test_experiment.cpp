#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cfmimo/experiment.hpp"

using namespace cfmimo;

namespace {

ExperimentConfig toy_config() {
  ExperimentConfig config;
  config.n_aps = 4;
  config.n_users = 2;
  config.m_ap = 2;
  config.cluster_size = 2;
  config.n_iterations = 2;
  config.seed = 42;
  return config;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults match the reference evaluation constants") {
  const ExperimentConfig config;
  CHECK(config.n_aps == 100);
  CHECK(config.n_users == 40);
  CHECK(config.m_ap == 4);
  CHECK(config.cluster_size == 15);
  CHECK(config.side_length_m == 1000.0);
  CHECK(config.ap_height_m == 10.0);
  CHECK(config.user_height_m == 1.65);
  CHECK(config.eta_w == 0.2);
  CHECK(config.bandwidth_hz == 2e7);
  CHECK(config.tau_ratio == 0.42);
  CHECK(config.noise_figure_db == 9.0);
  CHECK(config.noise_psd_dbm_hz == -174.0);
  CHECK(config.freq_ghz == 1.9);
  CHECK(config.shadow_sigma_db == 4.0);
  CHECK(config.shadow_r0_m == 9.0);
  CHECK(config.delta == 1000.0);
  CHECK(config.n_iterations == 250);
  // sigma_w^2 = B 10^(0.1(N_f + N_0) - 3) = 2e7 * 10^-19.5
  CHECK(config.sigma_w2() == doctest::Approx(2e7 * std::pow(10.0, -19.5)).epsilon(1e-14));
  CHECK(config.sigma_w2() == doctest::Approx(6.3246e-13).epsilon(1e-4));
}

TEST_CASE("config text round trip") {
  ExperimentConfig config = toy_config();
  config.strategy = SolveStrategy::bnb;
  config.schemes = {Scheme::cbf_ppa, Scheme::minmax};
  const ExperimentConfig parsed = ExperimentConfig::from_text(config.to_text());
  CHECK(parsed.to_text() == config.to_text());
  CHECK(parsed.hash() == config.hash());
}

TEST_CASE("unknown keys and malformed values are rejected") {
  CHECK_THROWS_AS(ExperimentConfig::from_text("network.n_apz = 4\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_text("network.n_aps = four\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_text("run.schemes = warp-drive\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_text("junk line\n"), ConfigError);
  CHECK_NOTHROW(ExperimentConfig::from_text("# comment only\n\nnetwork.n_aps = 7\n"));
}

TEST_CASE("validation catches inconsistent settings") {
  ExperimentConfig config = toy_config();
  config.cluster_size = 99;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = toy_config();
  config.schemes.clear();
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("cbf-only experiment saturates budgets and is deterministic") {
  ExperimentConfig config = toy_config();
  config.schemes = {Scheme::cbf_upa};
  const ResultsDataset ds1 = run_experiment(config, 1);
  const ResultsDataset ds2 = run_experiment(config, 2);
  REQUIRE(ds1.iterations.size() == 2);
  for (const auto& iter : ds1.iterations) {
    REQUIRE(iter.per_scheme.size() == 1);
    REQUIRE(iter.per_scheme[0].ok);
    for (double p : iter.per_scheme[0].metrics.ap_power_w) {
      if (p > 0.0) CHECK(p == doctest::Approx(config.eta_w).epsilon(1e-12));
    }
  }
  // Thread count must not change results.
  for (std::size_t i = 0; i < ds1.iterations.size(); ++i) {
    CHECK(ds1.iterations[i].per_scheme[0].metrics.sum_rate_bps ==
          ds2.iterations[i].per_scheme[0].metrics.sum_rate_bps);
  }
}

TEST_CASE("full scheme set on a toy network keeps the signal window") {
  ExperimentConfig config = toy_config();
  const ResultsDataset ds = run_experiment(config, 0);
  for (const auto& iter : ds.iterations) {
    REQUIRE(iter.per_scheme.size() == 3);
    for (const auto& rec : iter.per_scheme) {
      REQUIRE(rec.ok);
      if (rec.scheme == Scheme::minmax) {
        CHECK(rec.feasibility_worst <= 1e-6);
      }
    }
  }
  // The minmax signal power must lie inside [rho, mu]: re-derive the bounds.
  const IterationInputs in = make_iteration_inputs(config, 0);
  const auto& rec = ds.iterations[0].per_scheme[0];
  REQUIRE(rec.scheme == Scheme::minmax);
  for (int u = 0; u < config.n_users; ++u) {
    CHECK(rec.metrics.signal_w[u] >= in.bounds.rho[u] * (1.0 - 1e-6));
    CHECK(rec.metrics.signal_w[u] <= in.bounds.mu[u] * (1.0 + 1e-6));
  }
}

TEST_CASE("fixed positions reuse the same layout across iterations") {
  ExperimentConfig config = toy_config();
  config.redraw_positions = false;
  const IterationInputs a = make_iteration_inputs(config, 0);
  const IterationInputs b = make_iteration_inputs(config, 1);
  REQUIRE(a.layout.ap_positions.size() == b.layout.ap_positions.size());
  for (std::size_t i = 0; i < a.layout.ap_positions.size(); ++i) {
    CHECK(a.layout.ap_positions[i].x == b.layout.ap_positions[i].x);
  }
  // Fading still differs.
  CHECK(a.channel.h != b.channel.h);

  config.redraw_positions = true;
  const IterationInputs c = make_iteration_inputs(config, 0);
  const IterationInputs d = make_iteration_inputs(config, 1);
  CHECK(c.layout.ap_positions[0].x != d.layout.ap_positions[0].x);
}

TEST_CASE("emit_cdf writes the definitional table") {
  TempDir dir("cfmimo_cdf_test");
  const std::string path = dir.file("t.cdf");
  emit_cdf({3.0, 1.0, 2.0}, path);
  std::ifstream is(path);
  double v, c;
  is >> v >> c;
  CHECK(v == 1.0);
  CHECK(c == doctest::Approx(1.0 / 3.0));
  is >> v >> c;
  CHECK(v == 2.0);
  CHECK(c == doctest::Approx(2.0 / 3.0));
  is >> v >> c;
  CHECK(v == 3.0);
  CHECK(c == doctest::Approx(1.0));

  // Duplicates keep both rows with increasing CDF.
  emit_cdf({5.0, 5.0}, path);
  const auto values = read_cdf_values(path);
  REQUIRE(values.size() == 2);
  CHECK(values[0] == 5.0);
  CHECK(values[1] == 5.0);

  CHECK_THROWS(emit_cdf({}, path));
}

TEST_CASE("empirical CDF of uniform samples stays inside the DKW band") {
  Rng rng(2718);
  const int n = 10000;
  std::vector<double> samples(n);
  for (auto& v : samples) v = rng.uniform01();
  std::sort(samples.begin(), samples.end());
  // 99% band: eps = sqrt(ln(2/alpha) / (2n)).
  const double eps = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double emp = static_cast<double>(i + 1) / n;
    worst = std::max(worst, std::abs(emp - samples[i]));
  }
  CHECK(worst < eps);
}

TEST_CASE("percentile uses the emitted CDF convention") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(percentile(v, 0.05) == 5.0);
  CHECK(percentile(v, 0.5) == 50.0);
  CHECK(percentile(v, 1.0) == 100.0);
}

TEST_CASE("identical records give unit ratios") {
  ResultsDataset ds;
  ds.config = toy_config();
  ds.config.schemes = {Scheme::cbf_upa, Scheme::cbf_ppa};
  IterationRecord iter;
  iter.iteration = 0;
  SchemeRecord rec;
  rec.ok = true;
  rec.metrics.rate_bps = {1e6, 2e6};
  rec.metrics.rate_ub_bps = {2e6, 3e6};
  rec.metrics.ap_power_w = {0.2, 0.2};
  rec.metrics.sum_rate_bps = 3e6;
  rec.metrics.total_power_w = 0.4;
  rec.metrics.energy_efficiency_bpj = 7.5e6;
  rec.scheme = Scheme::cbf_upa;
  iter.per_scheme.push_back(rec);
  rec.scheme = Scheme::cbf_ppa;
  iter.per_scheme.push_back(rec);
  ds.iterations.push_back(iter);

  const ComparisonSummary summary = compare_schemes(ds);
  REQUIRE(summary.ratios.size() == 2);
  for (const auto& r : summary.ratios) {
    CHECK(r.rate_p5_ratio == doctest::Approx(1.0));
    CHECK(r.rate_median_ratio == doctest::Approx(1.0));
    CHECK(r.ee_min_over_best == doctest::Approx(1.0));
  }
}

TEST_CASE("write_outputs and summarize_directory round trip") {
  ExperimentConfig config = toy_config();
  config.schemes = {Scheme::cbf_upa, Scheme::cbf_ppa};
  const ResultsDataset ds = run_experiment(config, 0);
  TempDir dir("cfmimo_out_test");
  write_outputs(ds, dir.path.string());
  for (const char* name :
       {"rates_cbf-upa.cdf", "se_cbf-upa.cdf", "rates_upper_cbf-upa.cdf",
        "ap_power_cbf-upa.cdf", "ee_cbf-upa.cdf", "rates_cbf-ppa.cdf", "summary.txt",
        "config.echo"}) {
    CHECK(std::filesystem::exists(dir.path / name));
  }
  const ComparisonSummary live = compare_schemes(ds);
  const ComparisonSummary fromdir = summarize_directory(dir.path.string());
  REQUIRE(live.per_scheme.size() == fromdir.per_scheme.size());
  for (std::size_t i = 0; i < live.per_scheme.size(); ++i) {
    CHECK(live.per_scheme[i].rate_p5 ==
          doctest::Approx(fromdir.per_scheme[i].rate_p5).epsilon(1e-12));
    CHECK(live.per_scheme[i].ee_min ==
          doctest::Approx(fromdir.per_scheme[i].ee_min).epsilon(1e-12));
  }
  // Echoed config parses back to the same canonical text.
  const ExperimentConfig echoed = ExperimentConfig::from_file(dir.file("config.echo"));
  CHECK(echoed.to_text() == config.to_text());
}

TEST_CASE("excessive exclusions fail the run instead of being dropped") {
  // A vanishing power budget makes the signal lower bound unreachable, so
  // every minmax iteration comes back infeasible and must be counted.
  ExperimentConfig config = toy_config();
  config.eta_w = 1e-30;
  config.schemes = {Scheme::minmax};
  CHECK_THROWS_WITH_AS(run_experiment(config, 1),
                       doctest::Contains("excluded"), std::runtime_error);
}

TEST_CASE("repeat runs produce byte-identical CDF files") {
  ExperimentConfig config = toy_config();
  config.schemes = {Scheme::minmax, Scheme::cbf_upa};
  TempDir d1("cfmimo_det_a");
  TempDir d2("cfmimo_det_b");
  write_outputs(run_experiment(config, 2), d1.path.string());
  write_outputs(run_experiment(config, 1), d2.path.string());
  for (const char* name : {"rates_minmax.cdf", "ap_power_minmax.cdf", "ee_minmax.cdf",
                           "rates_cbf-upa.cdf", "summary.txt"}) {
    CHECK(slurp(d1.file(name)) == slurp(d2.file(name)));
  }
}

}  // TEST_SUITE
