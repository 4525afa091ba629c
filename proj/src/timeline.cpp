#include "resched/timeline.hpp"

#include <algorithm>

namespace resched {

void AgentProfile::validate() const {
  if (period_T <= 0) throw ConfigError("period_T", "must be positive");
  if (lifetime_D <= 0) throw ConfigError("lifetime_D", "must be positive");
  if (lifetime_D > period_T) throw ConfigError("lifetime_D", "must not exceed period_T");
  if (resilience_R <= 0) throw ConfigError("resilience_R", "must be positive");
  if (start_offset < 0 || start_offset >= period_T)
    throw ConfigError("start_offset", "must lie in [0, period_T)");
  if (!(mean_error_prob > 0.0 && mean_error_prob < 1.0))
    throw ConfigError("mean_error_prob", "must lie in (0, 1)");
}

bool is_alive(const AgentProfile& profile, Slot t) noexcept {
  if (t < profile.start_offset) return false;
  return (t - profile.start_offset) % profile.period_T < profile.lifetime_D;
}

bool is_arrival(const AgentProfile& profile, Slot t) noexcept {
  return t >= profile.start_offset && (t - profile.start_offset) % profile.period_T == 0;
}

namespace {

// Alive slots in [start_offset, x).
Slot alive_before(const AgentProfile& profile, Slot x) noexcept {
  if (x <= profile.start_offset) return 0;
  const Slot elapsed = x - profile.start_offset;
  return (elapsed / profile.period_T) * profile.lifetime_D +
         std::min(elapsed % profile.period_T, profile.lifetime_D);
}

}  // namespace

Slot count_opportunities(const AgentProfile& profile, Slot t, Slot horizon) noexcept {
  if (horizon <= 0) return 0;
  return alive_before(profile, t + horizon) - alive_before(profile, t);
}

}  // namespace resched
