// Command-line front end: run scheduler sweeps, dump single-iteration traces
// and print the default experiment configuration.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "resched/experiment.hpp"

namespace {

int run_command(const std::optional<std::string>& config_path,
                const std::optional<std::uint64_t>& seed,
                const std::optional<std::size_t>& iterations,
                const std::optional<std::size_t>& workers,
                const std::optional<std::string>& out_dir,
                const std::vector<std::string>& filter, bool trace) {
  resched::ExperimentConfig config =
      config_path ? resched::load_config(*config_path) : resched::default_config();
  if (seed) config.master_seed = *seed;
  if (iterations) config.n_iterations = *iterations;
  if (workers) config.worker_count = *workers;
  if (!filter.empty()) {
    std::erase_if(config.schedulers, [&](const resched::SchedulerEntry& e) {
      return std::find(filter.begin(), filter.end(), e.id) == filter.end();
    });
  }
  if (out_dir) {
    const std::filesystem::path dir(*out_dir);
    config.results_path = dir / config.results_path.filename();
    config.plot_dir = dir / "plots";
    if (trace) config.trace_dir = dir / "traces";
  } else if (trace && !config.trace_dir) {
    config.trace_dir = "traces";
  }
  config.validate();

  const resched::ResultsTable table = resched::run_experiment(config);
  resched::emit_results(table, config.results_path);
  if (config.plot_dir) resched::emit_plot_data(table, *config.plot_dir);

  std::cout << "wrote " << table.size() << " rows to " << config.results_path.string() << '\n';
  for (const auto& r : table) {
    std::cout << "  " << r.scheduler << " alpha=" << resched::format_double(r.alpha)
              << " R=" << r.resilience_R << "  F_cst=" << resched::format_double(r.f_cst_mean)
              << " +/- " << resched::format_double(r.f_cst_stderr) << '\n';
  }
  return 0;
}

int trace_command(const std::optional<std::string>& config_path, const std::string& scheduler,
                  double alpha, resched::Slot R, std::uint64_t iteration,
                  const std::optional<std::uint64_t>& seed, const std::string& out_path) {
  resched::ExperimentConfig config =
      config_path ? resched::load_config(*config_path) : resched::default_config();
  if (seed) config.master_seed = *seed;
  resched::Variant variant;
  variant.spec = resched::SchedulerSpec::parse(scheduler, alpha);
  variant.spec.utility.floor_history = config.floor_history;
  variant.scheduler = scheduler;
  variant.alpha = variant.spec.utility.alpha;
  resched::IterationConfig it = resched::iteration_config(config, variant, R, iteration);
  it.record_log = true;
  const resched::IterationTrace trace = resched::run_iteration(it);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  resched::write_trace_csv(trace, out);
  const auto window = std::min<std::size_t>(config.slope_window, trace.s_series.size());
  std::cout << "S(end)=" << trace.s_series.back() << " F_cst="
            << resched::format_double(resched::steady_slope(
                   std::span<const std::int64_t>(trace.s_series), std::max<std::size_t>(window, 2)))
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilience-aware radio scheduling simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scheduler sweep and write results");
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> workers;
  std::optional<std::string> out_dir;
  std::vector<std::string> filter;
  bool trace = false;
  run->add_option("-c,--config", config_path, "Experiment config (JSON); defaults if omitted");
  run->add_option("-s,--seed", seed, "Override run.master_seed");
  run->add_option("-n,--iterations", iterations, "Override run.n_iterations");
  run->add_option("-j,--workers", workers, "Worker threads (0 = hardware concurrency)");
  run->add_option("-o,--out", out_dir, "Output directory for results, plots and traces");
  run->add_option("--scheduler", filter, "Only run these scheduler ids");
  run->add_flag("--trace", trace, "Write per-slot traces of iteration 0 of every cell");

  auto* tr = app.add_subcommand("trace", "Dump the per-slot trace of one iteration");
  std::optional<std::string> tr_config;
  std::string tr_scheduler = "olt-r";
  double tr_alpha = 0.0;
  resched::Slot tr_R = 100;
  std::uint64_t tr_iteration = 0;
  std::optional<std::uint64_t> tr_seed;
  std::string tr_out = "trace.csv";
  tr->add_option("-c,--config", tr_config, "Experiment config supplying N, T, D and channel");
  tr->add_option("--scheduler", tr_scheduler, "Scheduler id")->capture_default_str();
  tr->add_option("--alpha", tr_alpha, "Utility alpha")->capture_default_str();
  tr->add_option("-R,--resilience", tr_R, "Resilience R")->capture_default_str();
  tr->add_option("-i,--iteration", tr_iteration, "Iteration index")->capture_default_str();
  tr->add_option("-s,--seed", tr_seed, "Override run.master_seed");
  tr->add_option("-o,--out", tr_out, "Output CSV")->capture_default_str();

  auto* cfg = app.add_subcommand("default-config", "Print the default experiment config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, seed, iterations, workers, out_dir, filter, trace);
    if (*tr) return trace_command(tr_config, tr_scheduler, tr_alpha, tr_R, tr_iteration, tr_seed, tr_out);
    if (*cfg) {
      std::cout << resched::dump_config(resched::default_config());
      return 0;
    }
  } catch (const resched::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
