#pragma once

#include "resched/timeline.hpp"

namespace resched {

/// Evolving per-agent state. `remaining_r` is the value entering the next
/// slot; it is reset to R in the same slot an event fires, so it is always
/// at least 1 between slots.
struct AgentState {
  Slot resilience_R = 1;
  Slot remaining_r = 1;
  std::int64_t violations = 0;
  bool has_alive_packet = false;
  Slot q_cached = 0;
};

struct SlotEvents {
  bool e0 = false;  // successful transmission
  bool e1 = false;  // resilience violation
};

AgentState init_state(const AgentProfile& profile);

/// One slot of the resilience state machine. Success is checked first and
/// resets r to R; otherwise r is decremented and a violation fires when it
/// reaches zero, incrementing V and resetting r to R.
SlotEvents advance_slot(AgentState& state, bool tx_success);

}  // namespace resched
