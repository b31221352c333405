#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfmimo/experiment.hpp"
#include "cfmimo/kernels.hpp"
#include "cfmimo/oracles.hpp"

namespace {

using namespace cfmimo;

int cmd_run(const std::string& config_path, int iterations, long long seed,
            const std::string& schemes_csv, const std::string& strategy,
            const std::string& out_dir, int threads, bool dump_model, bool quiet) {
  ExperimentConfig config;
  if (!config_path.empty()) config = ExperimentConfig::from_file(config_path);
  if (iterations > 0) config.n_iterations = iterations;
  if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
  if (!schemes_csv.empty()) config.set("run.schemes", schemes_csv);
  if (!strategy.empty()) config.strategy = parse_strategy(strategy);
  config.validate();

  if (!quiet) {
    std::printf("cfmimo run: %d iterations, seed %llu, strategy %s, kernels %s\n",
                config.n_iterations, static_cast<unsigned long long>(config.seed),
                strategy_name(config.strategy).c_str(),
                kernels::isa_name(kernels::active_isa()).c_str());
  }

  if (dump_model) {
    const IterationInputs in = make_iteration_inputs(config, 0);
    const MinMaxModel model = build_model(in.channel, in.assoc, in.bounds);
    const LoweredProgram lowered = config.strategy == SolveStrategy::wlog
                                       ? reduce_phase_wlog(model)
                                       : relax_binaries(model, std::vector<int>(model.n_users, -1));
    std::filesystem::create_directories(out_dir);
    std::ofstream os(std::filesystem::path(out_dir) / "model_dump.txt");
    os << "continuous variables: " << model.n_continuous << "\n";
    os << "binary variables:     " << model.n_binary << "\n";
    os << lowered.program.dump();
  }

  const ResultsDataset dataset = run_experiment(config, threads);
  write_outputs(dataset, out_dir);

  if (!quiet) {
    for (Scheme s : config.schemes) {
      std::printf("  %-8s excluded %d/%d iterations\n", scheme_name(s).c_str(),
                  dataset.excluded_count(s), config.n_iterations);
    }
    if (config.schemes.size() >= 2) {
      std::fputs(compare_schemes(dataset).to_text(config).c_str(), stdout);
    }
    std::printf("outputs written to %s\n", out_dir.c_str());
  }
  return 0;
}

int cmd_summarize(const std::string& in_dir) {
  const ExperimentConfig config =
      ExperimentConfig::from_file((std::filesystem::path(in_dir) / "config.echo").string());
  const ComparisonSummary summary = summarize_directory(in_dir);
  std::fputs(summary.to_text(config).c_str(), stdout);
  return 0;
}

bool report(const char* name, bool ok, const std::string& detail = "") {
  std::printf("[%s] %s%s%s\n", ok ? "ok" : "FAIL", name, detail.empty() ? "" : ": ",
              detail.c_str());
  return ok;
}

int cmd_selftest(long long seed_arg) {
  const std::uint64_t seed = seed_arg >= 0 ? static_cast<std::uint64_t>(seed_arg) : 7;
  bool all_ok = true;

  // Route agreement on tiny instances.
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(derive_seed(seed, trial));
    const int n_users = 2 + trial % 3;
    const TinyInstance inst = random_tiny_instance(3, n_users, 2, 2, rng);
    const MinMaxModel model = build_model(inst.channel, inst.assoc, inst.bounds);
    const BeamformingSolution wlog = solve_socp(model, reduce_phase_wlog(model));
    const BeamformingSolution bnb = branch_and_bound(model);
    const BeamformingSolution enumerated = enumerate_phi_solve(model);
    const double scale = std::max({wlog.z_value, bnb.z_value, enumerated.z_value,
                                   1e-6 * model.amp_scale()});
    const bool ok = wlog.optimal() && bnb.optimal() && enumerated.optimal() &&
                    std::abs(wlog.z_value - enumerated.z_value) <= 1e-5 * scale &&
                    std::abs(bnb.z_value - enumerated.z_value) <= 1e-5 * scale;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "z wlog %.6e, bnb %.6e, enum %.6e",
                  wlog.z_value, bnb.z_value, enumerated.z_value);
    all_ok &= report("optimizer route agreement", ok, detail);
  }

  // Received-signal regrouping identity.
  {
    Rng rng(derive_seed(seed, 100));
    const TinyInstance inst = random_tiny_instance(3, 3, 2, 2, rng);
    const BeamformerSet f = cbf_upa(inst.channel, inst.assoc, 1.0);
    std::vector<std::complex<double>> symbols;
    for (int u = 0; u < 3; ++u) {
      const double phase = 2.0 * M_PI * rng.uniform01();
      symbols.emplace_back(std::cos(phase), std::sin(phase));
    }
    bool ok = true;
    for (int u = 0; u < 3; ++u) {
      const ReceivedSignal rs =
          received_signal_bruteforce(inst.channel, f, inst.assoc, symbols, {0.1, -0.2}, u);
      ok &= std::abs(rs.plain_sum - rs.regrouped_sum) <= 1e-12 * std::abs(rs.plain_sum);
    }
    all_ok &= report("received-signal regrouping identity", ok);
  }

  // Sampling oracle never beats the solver.
  {
    Rng rng(derive_seed(seed, 200));
    const TinyInstance inst = random_tiny_instance(2, 2, 1, 2, rng);
    const MinMaxModel model = build_model(inst.channel, inst.assoc, inst.bounds);
    const BeamformingSolution sol = solve_socp(model, reduce_phase_wlog(model));
    const SearchResult search =
        random_feasible_search(inst.channel, inst.assoc, inst.bounds, 400, rng, 100);
    const bool ok = sol.optimal() && search.found &&
                    search.best_objective >= sol.z_value - 1e-4 * std::max(1.0, sol.z_value);
    char detail[120];
    std::snprintf(detail, sizeof(detail), "solver %.6e, search %.6e (%d feasible)",
                  sol.z_value, search.best_objective, search.n_feasible);
    all_ok &= report("sampling oracle bound", ok, detail);
  }

  std::printf("%s\n", all_ok ? "selftest passed" : "selftest FAILED");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cell-free massive MIMO downlink simulator and min-max optimizer"};
  app.require_subcommand(1);

  std::string config_path;
  int iterations = -1;
  long long seed = -1;
  std::string schemes_csv;
  std::string strategy;
  std::string out_dir = "out";
  int threads = 0;
  bool dump_model = false;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "run a Monte-Carlo experiment");
  run->add_option("--config", config_path, "configuration file (dotted keys)");
  run->add_option("--iterations", iterations, "override run.n_iterations");
  run->add_option("--seed", seed, "override run.seed");
  run->add_option("--schemes", schemes_csv, "comma-separated scheme list");
  run->add_option("--strategy", strategy, "minmax solve strategy: wlog | bnb");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_flag("--dump-model", dump_model, "write model_dump.txt for iteration 0");
  run->add_flag("--quiet", quiet, "suppress progress output");

  std::string in_dir;
  CLI::App* summarize = app.add_subcommand("summarize", "summarize an output directory");
  summarize->add_option("--in", in_dir, "directory with emitted CDF files")->required();

  long long selftest_seed = -1;
  CLI::App* selftest = app.add_subcommand("selftest", "run the oracle cross-checks");
  selftest->add_option("--seed", selftest_seed, "master seed for the checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, iterations, seed, schemes_csv, strategy, out_dir,
                     threads, dump_model, quiet);
    }
    if (summarize->parsed()) return cmd_summarize(in_dir);
    if (selftest->parsed()) return cmd_selftest(selftest_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
