#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "resched/channel.hpp"
#include "resched/resilience.hpp"
#include "resched/schedulers.hpp"
#include "resched/timeline.hpp"

namespace resched {

/// Independent random streams of one iteration.
struct RandomStreams {
  Rng env;       // start offsets and channel realization
  Rng channel;   // per-slot transmission outcomes
  Rng decision;  // tie-breaks and Round-Robin permutations
};

/// Deterministic in (master_seed, iteration_index); the streams do not depend
/// on the scheduler, so every policy sees the same environment for a given
/// iteration.
RandomStreams derive_streams(std::uint64_t master_seed, std::uint64_t iteration_index);

struct IterationConfig {
  std::size_t n_agents = 100;
  Slot n_slots = 10000;
  Slot period_T = 100;
  Slot lifetime_D = 100;
  Slot resilience_R = 100;
  SchedulerSpec scheduler;
  std::uint64_t master_seed = 1;
  std::uint64_t iteration_index = 0;

  double p_lo = 1e-3;
  double p_hi = 1e-1;
  double jitter_factor = 2.0;
  MeanSpacing spacing = MeanSpacing::Log;

  /// A successfully delivered packet leaves the buffer until the next arrival.
  /// Off by default: an alive packet keeps competing for the resource.
  bool consume_on_success = false;
  /// Redraw every p_k at each slot instead of once per iteration.
  bool redraw_channel_per_slot = false;
  /// Keep a per-slot record of decisions and events.
  bool record_log = false;

  /// Replace the random start offsets / channel realization.
  std::optional<std::vector<Slot>> start_offsets;
  std::optional<std::vector<double>> error_probs;

  void validate() const;
};

struct SlotRecord {
  Slot t = 0;
  std::optional<AgentId> allocated;
  bool success = false;
  std::vector<AgentId> violators;  // agents meeting E1 this slot
  std::int64_t s_value = 0;
  std::size_t n_candidates = 0;
  /// max_k f_hat_k under the decision; the first-order expansion behind the
  /// on-line Taylor metric is accurate while this stays small.
  double taylor_gap = 0.0;
};

struct IterationTrace {
  std::vector<std::int64_t> s_series;         // S(t) after slot t
  std::vector<std::int64_t> final_violations;  // V_k at the end of the run
  std::vector<AgentProfile> profiles;
  std::vector<double> error_probs;             // realization used (first slot)
  std::vector<SlotRecord> log;                 // empty unless record_log
};

IterationTrace run_iteration(const IterationConfig& config);

/// One line per slot: t,allocated,success,violators,s,candidates,taylor_gap.
/// `allocated` is -1 for an idle slot; violators are ';'-separated ids.
void write_trace_csv(const IterationTrace& trace, std::ostream& out);

}  // namespace resched
