#include "resched/resilience.hpp"

#include <cassert>

namespace resched {

AgentState init_state(const AgentProfile& profile) {
  AgentState state;
  state.resilience_R = profile.resilience_R;
  state.remaining_r = profile.resilience_R;
  state.violations = 0;
  state.has_alive_packet = is_alive(profile, 0);
  state.q_cached = 0;
  return state;
}

SlotEvents advance_slot(AgentState& state, bool tx_success) {
  assert(state.remaining_r >= 1 && state.remaining_r <= state.resilience_R);
  SlotEvents events;
  if (tx_success) {
    events.e0 = true;
    state.remaining_r = state.resilience_R;
    return events;
  }
  if (--state.remaining_r == 0) {
    events.e1 = true;
    ++state.violations;
    state.remaining_r = state.resilience_R;
  }
  return events;
}

}  // namespace resched
