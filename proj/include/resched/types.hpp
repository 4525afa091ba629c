#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace resched {

using Slot = std::int64_t;
using AgentId = std::size_t;

/// Random stream used throughout the simulator. One engine per purpose
/// (environment, channel, decisions) and per iteration.
using Rng = std::mt19937_64;

/// Raised for invalid configuration values. `field()` names the offending
/// setting as a dotted path (e.g. "agents.lifetime_D").
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace resched
