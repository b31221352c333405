#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfmimo/metrics.hpp"
#include "cfmimo/minmax.hpp"

namespace cfmimo {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scheme { minmax, cbf_upa, cbf_ppa };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);
std::string strategy_name(SolveStrategy s);
SolveStrategy parse_strategy(const std::string& name);

/// Flat dotted-key configuration; defaults mirror the reference evaluation
/// setup (100 APs, 40 users, 4 antennas, 15-AP clusters, 1 km wrap-around
/// square, 200 mW budgets, 20 MHz, 1.9 GHz, 250 iterations).
struct ExperimentConfig {
  int n_aps = 100;
  int n_users = 40;
  int m_ap = 4;
  int cluster_size = 15;
  double side_length_m = 1000.0;
  double ap_height_m = 10.0;
  double user_height_m = 1.65;
  double eta_w = 0.2;
  double bandwidth_hz = 2e7;
  double tau_ratio = 0.42;
  double noise_figure_db = 9.0;
  double noise_psd_dbm_hz = -174.0;
  double freq_ghz = 1.9;
  double shadow_sigma_db = 4.0;
  double shadow_r0_m = 9.0;
  double delta = 1000.0;
  int n_iterations = 250;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes = {Scheme::minmax, Scheme::cbf_upa, Scheme::cbf_ppa};
  SolveStrategy strategy = SolveStrategy::wlog;
  bool redraw_positions = true;

  double sigma_w2() const;
  void validate() const;

  /// Canonical dotted-key text form (also the config.echo payload).
  std::string to_text() const;
  std::uint64_t hash() const;

  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  /// Applies one `section.key = value` assignment; unknown keys throw.
  void set(const std::string& key, const std::string& value);
};

struct SchemeRecord {
  Scheme scheme = Scheme::minmax;
  bool ok = false;
  std::string error;
  MetricsRecord metrics;
  // Solver diagnostics (minmax only).
  double z_value = 0.0;
  int solver_iterations = 0;
  double solve_seconds = 0.0;
  double feasibility_worst = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  std::uint64_t seed = 0;
  std::vector<SchemeRecord> per_scheme;
};

struct ResultsDataset {
  ExperimentConfig config;
  std::vector<IterationRecord> iterations;

  int excluded_count(Scheme s) const;
  /// Pooled per-user rates over successful iterations of one scheme.
  std::vector<double> pooled_rates(Scheme s) const;
  std::vector<double> pooled_rates_upper(Scheme s) const;
  std::vector<double> pooled_spectral_efficiency(Scheme s) const;
  std::vector<double> pooled_ap_powers(Scheme s) const;
  std::vector<double> per_iteration_ee(Scheme s) const;
};

/// Everything one iteration derives from its seed, before beamforming.
struct IterationInputs {
  NetworkLayout layout;
  LargeScaleTable table;
  AssociationMap assoc;
  ChannelRealization channel;
  QosBounds bounds;
};

IterationInputs make_iteration_inputs(const ExperimentConfig& config, int iteration);

/// Seeded Monte-Carlo sweep: layout, channels, bounds, then every requested
/// scheme per iteration. Deterministic for a fixed config; iterations run on
/// `n_threads` workers (0 = hardware concurrency). Throws when more than 5%
/// of the iterations of any scheme had to be excluded.
ResultsDataset run_experiment(const ExperimentConfig& config, int n_threads = 0);

/// Two-column empirical CDF: sorted values, rank/n in the second column.
void emit_cdf(const std::vector<double>& samples, const std::string& path);
std::vector<double> read_cdf_values(const std::string& path);

/// Sorted-sample percentile matching the emitted CDF convention: the
/// smallest value whose empirical CDF reaches `frac`.
double percentile(std::vector<double> samples, double frac);

struct SchemeSummary {
  Scheme scheme = Scheme::minmax;
  int samples = 0;
  int excluded = 0;
  double rate_p5 = 0.0;  // 95%-likely user rate
  double rate_median = 0.0;
  double ap_power_min_w = 0.0;
  double ap_power_max_w = 0.0;
  double ap_power_min_db_rel_eta = 0.0;
  double ap_power_max_db_rel_eta = 0.0;
  double ee_min = 0.0;
  double ee_median = 0.0;
  double ee_max = 0.0;
};

struct PairwiseRatios {
  Scheme numerator = Scheme::minmax;
  Scheme denominator = Scheme::cbf_upa;
  double rate_p5_ratio = 0.0;
  double rate_median_ratio = 0.0;
  /// Least EE of the numerator over the best EE of the denominator.
  double ee_min_over_best = 0.0;
  double ee_median_ratio = 0.0;
};

struct ComparisonSummary {
  std::vector<SchemeSummary> per_scheme;
  std::vector<PairwiseRatios> ratios;
  std::string to_text(const ExperimentConfig& config) const;
};

ComparisonSummary compare_schemes(const ResultsDataset& dataset);

/// Builds the comparison from previously emitted CDF files.
ComparisonSummary summarize_directory(const std::string& dir);

/// rates_/se_/rates_upper_/ap_power_/ee_ CDF files plus summary.txt and
/// config.echo, as one run directory.
void write_outputs(const ResultsDataset& dataset, const std::string& out_dir);

}  // namespace cfmimo
