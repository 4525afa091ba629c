#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resched/types.hpp"

namespace resched {

/// Short-term violation heuristic: f_r = p^r or f_q = p^q.
enum class Heuristic { R, Q };

struct UtilityParams {
  double alpha = 0.0;
  Heuristic heuristic = Heuristic::R;
  /// On-line Taylor weights history by max(V, 1)^-alpha when set, by the raw
  /// V^-alpha otherwise (which zeroes every fresh agent for alpha < 0).
  bool floor_history = true;
};

/// What a scheduler sees of one agent holding an alive packet.
struct CandidateView {
  AgentId agent_id = 0;
  double error_prob = 0.5;
  Slot remaining_r = 1;
  Slot opportunities_q = 1;
  std::int64_t violations_prev = 0;
  double snr = 1.0;
};

struct Decision {
  std::optional<AgentId> agent;

  bool allocated() const noexcept { return agent.has_value(); }
  friend bool operator==(const Decision&, const Decision&) = default;
};

/// alpha-fair utility: x^(1-alpha)/(1-alpha), or log x at alpha = 1.
/// Throws std::domain_error for x <= 0.
double utility(double alpha, double x);

/// p^r (kind R) or p^q (kind Q). Underflows to 0 for long windows; the
/// deciders work with `log_heuristic_f` instead.
double heuristic_f(Heuristic kind, const CandidateView& c);
double log_heuristic_f(Heuristic kind, const CandidateView& c);

/// Predicted short-term violation: f when not allocated, p*f when allocated.
double f_hat(const CandidateView& c, bool allocated, Heuristic kind);

/// Predicted violation count V(t-1) + f_hat.
double v_hat(const CandidateView& c, bool allocated, Heuristic kind);

// ---------------------------------------------------------------------------
// On-line sum

/// Column costs of the on-line sum table, evaluated literally in double
/// precision: cost[j] = sum_k U(v_hat(k, k == j)). Useful for inspection of
/// small instances; when f is negligible next to V the columns collapse to
/// the same rounded value, which is why `ols_decide` does not use it.
std::vector<double> ols_column_costs(std::span<const CandidateView> candidates,
                                     const UtilityParams& params);

/// log of the cost reduction obtained by allocating `c`, i.e. of
/// U(v_hat(c, false)) - U(v_hat(c, true)). Every column of the table shares
/// the non-allocated baseline, so the minimal column is the candidate with
/// the largest reduction. Computed in the log domain so that f = p^r keeps
/// its resolution far below double-precision underflow.
double ols_log_gain(const CandidateView& c, const UtilityParams& params);

/// Minimal-column decision of the on-line sum table. Ties are broken
/// uniformly at random with `tie_rng`.
Decision ols_decide(std::span<const CandidateView> candidates, const UtilityParams& params,
                    Rng& tie_rng);

// ---------------------------------------------------------------------------
// On-line Taylor

/// log M_k with M_k = (1 - p) f V^-alpha (V floored at 1 unless disabled).
double olt_log_metric(const CandidateView& c, const UtilityParams& params);

Decision olt_decide(std::span<const CandidateView> candidates, const UtilityParams& params,
                    Rng& tie_rng);

// ---------------------------------------------------------------------------
// Round-Robin

struct RoundRobinState {
  std::vector<AgentId> buffer;  // permutation of [0, N)
  std::size_t cursor = 0;
  std::size_t steps = 0;        // allocations served from the current buffer

  static RoundRobinState make(std::size_t n_agents, Rng& rng);
};

/// Scans the buffer cyclically from the cursor and allocates the first agent
/// holding an alive packet. After N allocations the buffer is replaced by a
/// fresh random permutation.
Decision round_robin_decide(std::span<const CandidateView> candidates, RoundRobinState& state,
                            Rng& rng);

// ---------------------------------------------------------------------------
// PF-like

struct PfState {
  std::vector<double> accumulated_capacity;  // sum of w_k(t') log2(1 + snr_k(t'))
};

/// argmax log2(1 + snr_k) / accumulated_k; a zero denominator ranks first.
Decision pf_like_decide(std::span<const CandidateView> candidates, const PfState& state,
                        Rng& tie_rng);

/// accumulated_k += log2(1 + snr_k) for every agent whose weight flag is set.
void pf_update(PfState& state, std::span<const std::uint8_t> weight_flags,
               std::span<const double> snrs);

// ---------------------------------------------------------------------------
// Policy selection

enum class SchedulerKind { OnlineSum, OnlineTaylor, RoundRobin, PfLike };

/// Which slots count in the PF-like denominator: slots in which the agent was
/// allocated ("pf-like"), or every slot in which it held an alive packet
/// ("pf-like-alive"). With a constant SNR the alive weighting reduces the
/// priority to 1 / (alive slots so far), so the most recently started agent
/// keeps the resource indefinitely when D = T.
enum class PfWeighting { Alive, Allocated };

struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::OnlineTaylor;
  UtilityParams utility;
  PfWeighting pf_weighting = PfWeighting::Allocated;

  /// "ols-r", "ols-q", "olt-r", "olt-q", "round-robin", "pf-like" or
  /// "pf-like-alive".
  std::string id() const;
  bool uses_utility() const noexcept {
    return kind == SchedulerKind::OnlineSum || kind == SchedulerKind::OnlineTaylor;
  }

  /// Throws ConfigError for unknown ids.
  static SchedulerSpec parse(std::string_view id, double alpha = 0.0);
};

/// A scheduling policy together with its mutable memory. Owned by a single
/// simulation worker.
class Scheduler {
 public:
  Scheduler(const SchedulerSpec& spec, std::size_t n_agents, Rng& decision_rng);

  Decision decide(std::span<const CandidateView> candidates);

  /// Per-slot bookkeeping after the decision. `alive` flags agents that were
  /// candidates this slot, `snrs` holds every agent's current SNR.
  void end_slot(std::span<const std::uint8_t> alive, std::span<const double> snrs,
                const Decision& decision);

  const SchedulerSpec& spec() const noexcept { return spec_; }
  const PfState& pf_state() const noexcept { return pf_; }
  const RoundRobinState& round_robin_state() const noexcept { return rr_; }

 private:
  SchedulerSpec spec_;
  Rng* rng_;
  RoundRobinState rr_;
  PfState pf_;
  std::vector<std::uint8_t> scratch_;
};

}  // namespace resched
