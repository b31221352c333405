#include "cfmimo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace cfmimo {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::minmax: return "minmax";
    case Scheme::cbf_upa: return "cbf-upa";
    case Scheme::cbf_ppa: return "cbf-ppa";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "minmax") return Scheme::minmax;
  if (name == "cbf-upa") return Scheme::cbf_upa;
  if (name == "cbf-ppa") return Scheme::cbf_ppa;
  throw ConfigError("unknown scheme '" + name + "'");
}

std::string strategy_name(SolveStrategy s) {
  return s == SolveStrategy::wlog ? "wlog" : "bnb";
}

SolveStrategy parse_strategy(const std::string& name) {
  if (name == "wlog") return SolveStrategy::wlog;
  if (name == "bnb") return SolveStrategy::bnb;
  throw ConfigError("unknown strategy '" + name + "' (expected wlog or bnb)");
}

double ExperimentConfig::sigma_w2() const {
  return bandwidth_hz * std::pow(10.0, 0.1 * (noise_figure_db + noise_psd_dbm_hz) - 3.0);
}

void ExperimentConfig::validate() const {
  if (n_aps < 1) throw ConfigError("network.n_aps must be >= 1");
  if (n_users < 1) throw ConfigError("network.n_users must be >= 1");
  if (m_ap < 1) throw ConfigError("network.m_ap must be >= 1");
  if (cluster_size < 1 || cluster_size > n_aps) {
    throw ConfigError("network.cluster_size must be in [1, network.n_aps]");
  }
  if (side_length_m <= 0.0) throw ConfigError("network.side_length_m must be > 0");
  if (!(ap_height_m > user_height_m) || !(user_height_m > 0.0)) {
    throw ConfigError("need network.ap_height_m > network.user_height_m > 0");
  }
  if (eta_w <= 0.0) throw ConfigError("radio.eta_w must be > 0");
  if (bandwidth_hz <= 0.0) throw ConfigError("radio.bandwidth_hz must be > 0");
  if (tau_ratio <= 0.0 || tau_ratio > 1.0) throw ConfigError("radio.tau_ratio must be in (0, 1]");
  if (freq_ghz <= 0.0) throw ConfigError("radio.freq_ghz must be > 0");
  if (shadow_r0_m <= 0.0) throw ConfigError("channel.shadow_r0_m must be > 0");
  if (n_iterations < 1) throw ConfigError("run.n_iterations must be >= 1");
  if (schemes.empty()) throw ConfigError("run.schemes must not be empty");
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return static_cast<int>(v);
  } catch (...) {
    throw ConfigError("invalid integer for " + key + ": '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("invalid number for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + value + "'");
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "network.n_aps") n_aps = parse_int(key, value);
  else if (key == "network.n_users") n_users = parse_int(key, value);
  else if (key == "network.m_ap") m_ap = parse_int(key, value);
  else if (key == "network.cluster_size") cluster_size = parse_int(key, value);
  else if (key == "network.side_length_m") side_length_m = parse_double(key, value);
  else if (key == "network.ap_height_m") ap_height_m = parse_double(key, value);
  else if (key == "network.user_height_m") user_height_m = parse_double(key, value);
  else if (key == "radio.eta_w") eta_w = parse_double(key, value);
  else if (key == "radio.bandwidth_hz") bandwidth_hz = parse_double(key, value);
  else if (key == "radio.tau_ratio") tau_ratio = parse_double(key, value);
  else if (key == "radio.noise_figure_db") noise_figure_db = parse_double(key, value);
  else if (key == "radio.noise_psd_dbm_hz") noise_psd_dbm_hz = parse_double(key, value);
  else if (key == "radio.freq_ghz") freq_ghz = parse_double(key, value);
  else if (key == "channel.shadow_sigma_db") shadow_sigma_db = parse_double(key, value);
  else if (key == "channel.shadow_r0_m") shadow_r0_m = parse_double(key, value);
  else if (key == "optimizer.delta") delta = parse_double(key, value);
  else if (key == "run.n_iterations") n_iterations = parse_int(key, value);
  else if (key == "run.seed") {
    try {
      std::size_t pos = 0;
      seed = std::stoull(value, &pos);
      if (pos != value.size()) throw std::invalid_argument("");
    } catch (...) {
      throw ConfigError("invalid integer for run.seed: '" + value + "'");
    }
  }
  else if (key == "run.schemes") {
    schemes.clear();
    for (const auto& name : split(value, ',')) {
      if (!name.empty()) schemes.push_back(parse_scheme(name));
    }
  } else if (key == "run.strategy") strategy = parse_strategy(value);
  else if (key == "run.redraw_positions") redraw_positions = parse_bool(key, value);
  else throw ConfigError("unknown configuration key '" + key + "'");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  os << "network.n_aps = " << n_aps << "\n";
  os << "network.n_users = " << n_users << "\n";
  os << "network.m_ap = " << m_ap << "\n";
  os << "network.cluster_size = " << cluster_size << "\n";
  os << "network.side_length_m = " << num(side_length_m) << "\n";
  os << "network.ap_height_m = " << num(ap_height_m) << "\n";
  os << "network.user_height_m = " << num(user_height_m) << "\n";
  os << "radio.eta_w = " << num(eta_w) << "\n";
  os << "radio.bandwidth_hz = " << num(bandwidth_hz) << "\n";
  os << "radio.tau_ratio = " << num(tau_ratio) << "\n";
  os << "radio.noise_figure_db = " << num(noise_figure_db) << "\n";
  os << "radio.noise_psd_dbm_hz = " << num(noise_psd_dbm_hz) << "\n";
  os << "radio.freq_ghz = " << num(freq_ghz) << "\n";
  os << "channel.shadow_sigma_db = " << num(shadow_sigma_db) << "\n";
  os << "channel.shadow_r0_m = " << num(shadow_r0_m) << "\n";
  os << "optimizer.delta = " << num(delta) << "\n";
  os << "run.n_iterations = " << n_iterations << "\n";
  os << "run.seed = " << seed << "\n";
  os << "run.schemes = ";
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    os << (i ? "," : "") << scheme_name(schemes[i]);
  }
  os << "\n";
  os << "run.strategy = " << strategy_name(strategy) << "\n";
  os << "run.redraw_positions = " << (redraw_positions ? "true" : "false") << "\n";
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string text = to_text();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig config;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << is.rdbuf();
  return from_text(buffer.str());
}

// ---------------------------------------------------------------------------
// Monte-Carlo driver
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kLayoutStream = 0x6c61796f7574ULL;  // fixed-layout stream id

struct FixedLayout {
  NetworkLayout layout;
  ShadowCovariance shadow;
};

NetworkLayout draw_layout(const ExperimentConfig& config, Rng& rng) {
  NetworkLayout layout;
  layout.side_length = config.side_length_m;
  layout.ap_height = config.ap_height_m;
  layout.user_height = config.user_height_m;
  layout.ap_positions = place_uniform(config.n_aps, config.side_length_m, rng);
  layout.user_positions = place_uniform(config.n_users, config.side_length_m, rng);
  return layout;
}

SchemeRecord evaluate_scheme(const ExperimentConfig& config, Scheme scheme,
                             const ChannelRealization& ch, const AssociationMap& assoc,
                             const QosBounds& bounds) {
  SchemeRecord rec;
  rec.scheme = scheme;
  const double sigma_w2 = config.sigma_w2();
  try {
    if (scheme == Scheme::cbf_upa || scheme == Scheme::cbf_ppa) {
      const BeamformerSet f = scheme == Scheme::cbf_upa ? cbf_upa(ch, assoc, config.eta_w)
                                                        : cbf_ppa(ch, assoc, config.eta_w);
      rec.metrics = compute_metrics(ch, f, assoc, sigma_w2, config.bandwidth_hz,
                                    config.tau_ratio);
      rec.ok = true;
      return rec;
    }
    const MinMaxModel model = build_model(ch, assoc, bounds);
    BeamformingSolution sol = solve_minmax(model, config.strategy);
    rec.z_value = sol.z_value;
    rec.solver_iterations = sol.iterations;
    rec.solve_seconds = sol.solve_seconds;
    if (!sol.optimal()) {
      rec.error = "solver status " + conic::status_name(sol.status) + ": " + sol.message;
      return rec;
    }
    const FeasibilityReport feas = check_feasibility(sol, ch, assoc, bounds);
    rec.feasibility_worst = feas.worst;
    if (!feas.pass(1e-6)) {
      rec.error = "feasibility check failed (worst " + std::to_string(feas.worst) + ")";
      return rec;
    }
    rec.metrics = compute_metrics(ch, sol.beamformers, assoc, sigma_w2,
                                  config.bandwidth_hz, config.tau_ratio);
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

IterationInputs make_inputs(const ExperimentConfig& config, int iteration,
                            const FixedLayout* fixed) {
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(iteration)));

  IterationInputs in;
  const ShadowCovariance* shadow = nullptr;
  ShadowCovariance local_shadow;
  if (config.redraw_positions || fixed == nullptr) {
    in.layout = draw_layout(config, rng);
    local_shadow = shadow_covariance(in.layout.user_positions, config.side_length_m,
                                     config.shadow_r0_m, config.shadow_sigma_db);
    shadow = &local_shadow;
  } else {
    in.layout = fixed->layout;
    shadow = &fixed->shadow;
  }

  in.table = make_large_scale(in.layout, config.freq_ghz, *shadow, rng);
  in.assoc =
      associate_users(in.table.beta_dB, config.n_users, config.n_aps, config.cluster_size);
  in.channel = draw_channel(in.table, config.m_ap, rng, iteration);
  in.bounds = compute_bounds(in.channel, in.assoc, config.eta_w, config.sigma_w2(),
                             config.n_aps, config.n_users, config.delta);
  return in;
}

IterationRecord run_iteration(const ExperimentConfig& config, int iteration,
                              const FixedLayout* fixed) {
  IterationRecord out;
  out.iteration = iteration;
  out.seed = derive_seed(config.seed, static_cast<std::uint64_t>(iteration));
  const IterationInputs in = make_inputs(config, iteration, fixed);
  out.per_scheme.reserve(config.schemes.size());
  for (Scheme scheme : config.schemes) {
    out.per_scheme.push_back(evaluate_scheme(config, scheme, in.channel, in.assoc, in.bounds));
  }
  return out;
}

}  // namespace

IterationInputs make_iteration_inputs(const ExperimentConfig& config, int iteration) {
  config.validate();
  if (!config.redraw_positions) {
    Rng rng(derive_seed(config.seed, kLayoutStream));
    FixedLayout fixed;
    fixed.layout = draw_layout(config, rng);
    fixed.shadow = shadow_covariance(fixed.layout.user_positions, config.side_length_m,
                                     config.shadow_r0_m, config.shadow_sigma_db);
    return make_inputs(config, iteration, &fixed);
  }
  return make_inputs(config, iteration, nullptr);
}

ResultsDataset run_experiment(const ExperimentConfig& config, int n_threads) {
  config.validate();
  ResultsDataset dataset;
  dataset.config = config;
  dataset.iterations.resize(config.n_iterations);

  FixedLayout fixed;
  const bool use_fixed = !config.redraw_positions;
  if (use_fixed) {
    Rng rng(derive_seed(config.seed, kLayoutStream));
    fixed.layout = draw_layout(config, rng);
    fixed.shadow = shadow_covariance(fixed.layout.user_positions, config.side_length_m,
                                     config.shadow_r0_m, config.shadow_sigma_db);
  }

  int workers = n_threads > 0 ? n_threads
                              : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, config.n_iterations));

  std::atomic<int> next{0};
  auto body = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= config.n_iterations) return;
      dataset.iterations[i] = run_iteration(config, i, use_fixed ? &fixed : nullptr);
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }

  for (Scheme s : config.schemes) {
    const int excluded = dataset.excluded_count(s);
    if (excluded * 20 > config.n_iterations) {  // > 5%
      throw std::runtime_error("run_experiment: scheme " + scheme_name(s) + " excluded " +
                               std::to_string(excluded) + "/" +
                               std::to_string(config.n_iterations) + " iterations (> 5%)");
    }
  }
  return dataset;
}

// ---------------------------------------------------------------------------
// Dataset views
// ---------------------------------------------------------------------------

namespace {

template <typename Fn>
void for_scheme_records(const ResultsDataset& ds, Scheme s, Fn&& fn) {
  for (const auto& iter : ds.iterations) {
    for (const auto& rec : iter.per_scheme) {
      if (rec.scheme == s) fn(rec);
    }
  }
}

}  // namespace

int ResultsDataset::excluded_count(Scheme s) const {
  int count = 0;
  for_scheme_records(*this, s, [&](const SchemeRecord& rec) {
    if (!rec.ok) ++count;
  });
  return count;
}

std::vector<double> ResultsDataset::pooled_rates(Scheme s) const {
  std::vector<double> out;
  for_scheme_records(*this, s, [&](const SchemeRecord& rec) {
    if (rec.ok) out.insert(out.end(), rec.metrics.rate_bps.begin(), rec.metrics.rate_bps.end());
  });
  return out;
}

std::vector<double> ResultsDataset::pooled_rates_upper(Scheme s) const {
  std::vector<double> out;
  for_scheme_records(*this, s, [&](const SchemeRecord& rec) {
    if (rec.ok) {
      out.insert(out.end(), rec.metrics.rate_ub_bps.begin(), rec.metrics.rate_ub_bps.end());
    }
  });
  return out;
}

std::vector<double> ResultsDataset::pooled_spectral_efficiency(Scheme s) const {
  std::vector<double> out = pooled_rates(s);
  for (double& v : out) v /= config.bandwidth_hz;
  return out;
}

std::vector<double> ResultsDataset::pooled_ap_powers(Scheme s) const {
  std::vector<double> out;
  for_scheme_records(*this, s, [&](const SchemeRecord& rec) {
    if (rec.ok) {
      out.insert(out.end(), rec.metrics.ap_power_w.begin(), rec.metrics.ap_power_w.end());
    }
  });
  return out;
}

std::vector<double> ResultsDataset::per_iteration_ee(Scheme s) const {
  std::vector<double> out;
  for_scheme_records(*this, s, [&](const SchemeRecord& rec) {
    if (rec.ok) out.push_back(rec.metrics.energy_efficiency_bpj);
  });
  return out;
}

// ---------------------------------------------------------------------------
// CDF files and summaries
// ---------------------------------------------------------------------------

void emit_cdf(const std::vector<double>& samples, const std::string& path) {
  if (samples.empty()) throw std::invalid_argument("emit_cdf: empty sample set");
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("emit_cdf: cannot open '" + path + "'");
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    std::fprintf(f, "%.17g %.17g\n", sorted[i], static_cast<double>(i + 1) / n);
  }
  std::fclose(f);
}

std::vector<double> read_cdf_values(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open CDF file '" + path + "'");
  std::vector<double> values;
  double v = 0.0, cdf = 0.0;
  while (is >> v >> cdf) values.push_back(v);
  return values;
}

double percentile(std::vector<double> samples, double frac) {
  if (samples.empty()) throw std::invalid_argument("percentile: empty sample set");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
  std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(std::ceil(frac * n)) - 1;
  idx = std::clamp<std::ptrdiff_t>(idx, 0, n - 1);
  return samples[idx];
}

namespace {

SchemeSummary summarize_samples(Scheme scheme, const std::vector<double>& rates,
                                const std::vector<double>& powers,
                                const std::vector<double>& ees, double eta, int excluded) {
  SchemeSummary s;
  s.scheme = scheme;
  s.samples = static_cast<int>(rates.size());
  s.excluded = excluded;
  if (!rates.empty()) {
    s.rate_p5 = percentile(rates, 0.05);
    s.rate_median = percentile(rates, 0.5);
  }
  if (!powers.empty()) {
    const auto [mn, mx] = std::minmax_element(powers.begin(), powers.end());
    s.ap_power_min_w = *mn;
    s.ap_power_max_w = *mx;
    s.ap_power_min_db_rel_eta = 10.0 * std::log10(std::max(*mn, 1e-300) / eta);
    s.ap_power_max_db_rel_eta = 10.0 * std::log10(std::max(*mx, 1e-300) / eta);
  }
  if (!ees.empty()) {
    const auto [mn, mx] = std::minmax_element(ees.begin(), ees.end());
    s.ee_min = *mn;
    s.ee_max = *mx;
    s.ee_median = percentile(ees, 0.5);
  }
  return s;
}

ComparisonSummary build_comparison(const std::vector<SchemeSummary>& per_scheme) {
  ComparisonSummary out;
  out.per_scheme = per_scheme;
  for (std::size_t i = 0; i < per_scheme.size(); ++i) {
    for (std::size_t j = 0; j < per_scheme.size(); ++j) {
      if (i == j) continue;
      PairwiseRatios r;
      r.numerator = per_scheme[i].scheme;
      r.denominator = per_scheme[j].scheme;
      const auto& a = per_scheme[i];
      const auto& b = per_scheme[j];
      r.rate_p5_ratio = b.rate_p5 > 0.0 ? a.rate_p5 / b.rate_p5 : 0.0;
      r.rate_median_ratio = b.rate_median > 0.0 ? a.rate_median / b.rate_median : 0.0;
      r.ee_min_over_best = b.ee_max > 0.0 ? a.ee_min / b.ee_max : 0.0;
      r.ee_median_ratio = b.ee_median > 0.0 ? a.ee_median / b.ee_median : 0.0;
      out.ratios.push_back(r);
    }
  }
  return out;
}

}  // namespace

ComparisonSummary compare_schemes(const ResultsDataset& dataset) {
  if (dataset.config.schemes.size() < 2) {
    throw std::invalid_argument("compare_schemes: need at least two schemes");
  }
  std::vector<SchemeSummary> per_scheme;
  for (Scheme s : dataset.config.schemes) {
    per_scheme.push_back(summarize_samples(s, dataset.pooled_rates(s),
                                           dataset.pooled_ap_powers(s),
                                           dataset.per_iteration_ee(s),
                                           dataset.config.eta_w,
                                           dataset.excluded_count(s)));
  }
  return build_comparison(per_scheme);
}

std::string ComparisonSummary::to_text(const ExperimentConfig& config) const {
  std::ostringstream os;
  os.precision(10);
  os << "config.hash = " << config.hash() << "\n";
  os << "run.seed = " << config.seed << "\n";
  os << "run.n_iterations = " << config.n_iterations << "\n";
  for (const auto& s : per_scheme) {
    const std::string k = scheme_name(s.scheme);
    os << "samples." << k << " = " << s.samples << "\n";
    os << "excluded_iterations." << k << " = " << s.excluded << "\n";
    os << "rate_p5_bps." << k << " = " << s.rate_p5 << "\n";
    os << "rate_median_bps." << k << " = " << s.rate_median << "\n";
    os << "ap_power_min_w." << k << " = " << s.ap_power_min_w << "\n";
    os << "ap_power_max_w." << k << " = " << s.ap_power_max_w << "\n";
    os << "ap_power_min_db_rel_eta." << k << " = " << s.ap_power_min_db_rel_eta << "\n";
    os << "ap_power_max_db_rel_eta." << k << " = " << s.ap_power_max_db_rel_eta << "\n";
    os << "ee_min_bpj." << k << " = " << s.ee_min << "\n";
    os << "ee_median_bpj." << k << " = " << s.ee_median << "\n";
    os << "ee_max_bpj." << k << " = " << s.ee_max << "\n";
  }
  for (const auto& r : ratios) {
    const std::string k = scheme_name(r.numerator) + "_over_" + scheme_name(r.denominator);
    os << "ratio.rate_p5." << k << " = " << r.rate_p5_ratio << "\n";
    os << "ratio.rate_median." << k << " = " << r.rate_median_ratio << "\n";
    os << "ratio.ee_min_over_best." << k << " = " << r.ee_min_over_best << "\n";
    os << "ratio.ee_median." << k << " = " << r.ee_median_ratio << "\n";
  }
  return os.str();
}

void write_outputs(const ResultsDataset& dataset, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  for (Scheme s : dataset.config.schemes) {
    const std::string k = scheme_name(s);
    emit_cdf(dataset.pooled_rates(s), path("rates_" + k + ".cdf"));
    emit_cdf(dataset.pooled_spectral_efficiency(s), path("se_" + k + ".cdf"));
    emit_cdf(dataset.pooled_rates_upper(s), path("rates_upper_" + k + ".cdf"));
    emit_cdf(dataset.pooled_ap_powers(s), path("ap_power_" + k + ".cdf"));
    emit_cdf(dataset.per_iteration_ee(s), path("ee_" + k + ".cdf"));
  }

  {
    std::ofstream os(path("config.echo"));
    os << dataset.config.to_text();
  }
  {
    std::ofstream os(path("summary.txt"));
    if (dataset.config.schemes.size() >= 2) {
      os << compare_schemes(dataset).to_text(dataset.config);
    } else {
      std::vector<SchemeSummary> one;
      const Scheme s = dataset.config.schemes.front();
      one.push_back(summarize_samples(s, dataset.pooled_rates(s),
                                      dataset.pooled_ap_powers(s),
                                      dataset.per_iteration_ee(s), dataset.config.eta_w,
                                      dataset.excluded_count(s)));
      ComparisonSummary summary;
      summary.per_scheme = std::move(one);
      os << summary.to_text(dataset.config);
    }
  }
}

ComparisonSummary summarize_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  const ExperimentConfig config =
      ExperimentConfig::from_file((fs::path(dir) / "config.echo").string());
  std::vector<SchemeSummary> per_scheme;
  for (Scheme s : config.schemes) {
    const std::string k = scheme_name(s);
    const auto rates = read_cdf_values((fs::path(dir) / ("rates_" + k + ".cdf")).string());
    const auto powers = read_cdf_values((fs::path(dir) / ("ap_power_" + k + ".cdf")).string());
    const auto ees = read_cdf_values((fs::path(dir) / ("ee_" + k + ".cdf")).string());
    per_scheme.push_back(summarize_samples(s, rates, powers, ees, config.eta_w, 0));
  }
  return build_comparison(per_scheme);
}

}  // namespace cfmimo
