#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "resched/types.hpp"

namespace resched {

/// Violation rate S(t) / t (system-wide) or V_k(t) / t (per agent).
/// Throws std::domain_error at t = 0.
double f_of_t(std::int64_t s_value, Slot t);

/// Least-squares slope of (t, S(t)) over the last `window` points. Slopes
/// below 1e-12 in magnitude or negative are clamped to 0.
/// Throws std::invalid_argument when window < 2 or window > series length.
double steady_slope(std::span<const std::int64_t> s_series, std::size_t window);
double steady_slope(std::span<const double> s_series, std::size_t window);

struct RunSummary {
  std::string scheduler_id;
  double alpha = 0.0;
  std::string heuristic;  // "R", "Q" or "-"
  Slot resilience_R = 0;
  double f_cst = 0.0;
  std::int64_t final_S = 0;
  Slot n_slots = 0;
};

struct Aggregate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(count)
  std::size_t count = 0;
};

/// Mean and standard error of f_cst, accumulated in list order.
/// Throws std::invalid_argument on an empty or heterogeneous list.
Aggregate aggregate(std::span<const RunSummary> summaries);

}  // namespace resched
