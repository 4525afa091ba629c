#pragma once

#include "resched/types.hpp"

namespace resched {

/// Static parameters of one agent's periodic data stream.
struct AgentProfile {
  AgentId agent_id = 0;
  Slot period_T = 1;
  Slot lifetime_D = 1;
  Slot resilience_R = 1;
  Slot start_offset = 0;
  double mean_error_prob = 0.5;

  /// Throws ConfigError when D > T, the offset is outside [0, T), or the
  /// mean error probability is outside (0, 1).
  void validate() const;
};

/// True when slot `t` lies inside the lifetime of one of the agent's packets.
/// Packets arrive at start_offset + n*T and live for D slots, [arrival, arrival + D).
bool is_alive(const AgentProfile& profile, Slot t) noexcept;

/// True when a new packet arrives at slot `t`.
bool is_arrival(const AgentProfile& profile, Slot t) noexcept;

/// Number of alive slots in the window [t, t + horizon). Closed form.
Slot count_opportunities(const AgentProfile& profile, Slot t, Slot horizon) noexcept;

}  // namespace resched
