#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resched/engine.hpp"
#include "resched/metrics.hpp"
#include "resched/schedulers.hpp"

namespace resched {

struct SchedulerEntry {
  std::string id;
  std::vector<double> alphas;  // ignored (must be empty or {0}) for baselines
};

/// A sweep over scheduler variants and resilience values. Stored as JSON:
///
///   {
///     "agents":     {"n_agents": 100, "period_T": 100, "lifetime_D": 100,
///                    "resilience_R": [90, 95, 100, 105, 110, 115]},
///     "channel":    {"p_lo": 0.001, "p_hi": 0.1, "jitter_factor": 2.0,
///                    "spacing": "log"},
///     "run":        {"n_slots": 10000, "n_iterations": 100, "master_seed": 1,
///                    "worker_count": 0, "slope_window": 5000},
///     "model":      {"consume_on_success": false, "floor_history": true,
///                    "redraw_channel_per_slot": false},
///     "schedulers": [{"id": "olt-r", "alpha": [0, -1]}, {"id": "round-robin"}],
///     "output":     {"results_path": "results.csv", "plot_dir": "plots",
///                    "trace_dir": null}
///   }
///
/// Every section and key is optional except "schedulers"; missing values
/// take the defaults below. Unknown keys are rejected.
struct ExperimentConfig {
  std::size_t n_agents = 100;
  Slot period_T = 100;
  Slot lifetime_D = 100;
  std::vector<Slot> resilience_R{90, 95, 100, 105, 110, 115};

  double p_lo = 1e-3;
  double p_hi = 1e-1;
  double jitter_factor = 2.0;
  /// Spread of the per-agent means over [p_lo, p_hi]: "log" or "linear".
  MeanSpacing spacing = MeanSpacing::Log;

  Slot n_slots = 10000;
  std::size_t n_iterations = 100;
  std::uint64_t master_seed = 1;
  std::size_t worker_count = 0;  // 0 selects the hardware concurrency
  std::size_t slope_window = 5000;

  bool consume_on_success = false;
  bool floor_history = true;
  bool redraw_channel_per_slot = false;

  std::vector<SchedulerEntry> schedulers;

  std::filesystem::path results_path = "results.csv";
  std::optional<std::filesystem::path> plot_dir;
  std::optional<std::filesystem::path> trace_dir;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Full sweep at 100 iterations per cell: OLS-R/OLT-R/OLT-Q over
/// alpha in {0, -1, -2, -5} plus both baselines.
ExperimentConfig default_config();

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& config);

/// One scheduler configuration of the sweep.
struct Variant {
  SchedulerSpec spec;
  std::string scheduler;  // id string
  double alpha = 0.0;
  std::string heuristic;  // "R", "Q" or "-"
};

std::vector<Variant> expand_variants(const ExperimentConfig& config);

/// Iteration settings shared by every cell of the sweep.
IterationConfig iteration_config(const ExperimentConfig& config, const Variant& variant, Slot R,
                                 std::uint64_t iteration_index);

struct ResultRow {
  std::string scheduler;
  double alpha = 0.0;
  std::string heuristic;
  std::size_t n_agents = 0;
  Slot period_T = 0;
  Slot lifetime_D = 0;
  Slot resilience_R = 0;
  Slot n_slots = 0;
  std::size_t n_iterations = 0;
  std::uint64_t master_seed = 0;
  double f_cst_mean = 0.0;
  double f_cst_stderr = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

using ResultsTable = std::vector<ResultRow>;

/// Runs every (variant, R) cell for n_iterations iterations on a worker
/// pool. Output is independent of the worker count. Writes iteration-0
/// traces into trace_dir when set. Returns rows sorted by (scheduler, alpha, R).
ResultsTable run_experiment(const ExperimentConfig& config);

/// Sort by (scheduler, alpha, R).
void sort_results(ResultsTable& table);

/// Comma-separated, one header line, '\n' line endings. Floats use the
/// shortest representation that round-trips.
void write_results(const ResultsTable& table, std::ostream& out);
void emit_results(const ResultsTable& table, const std::filesystem::path& path);
ResultsTable read_results(std::istream& in);

/// One file per variant with columns R,f_cst_mean,f_cst_stderr. Returns the
/// paths written.
std::vector<std::filesystem::path> emit_plot_data(const ResultsTable& table,
                                                  const std::filesystem::path& dir);

/// File stem used for a variant's plot data and traces.
std::string variant_stem(std::string_view scheduler, double alpha, bool uses_utility);

std::string format_double(double value);

}  // namespace resched
