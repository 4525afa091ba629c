#include "resched/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace resched {

namespace {

constexpr double kSlopeClamp = 1e-12;

template <typename T>
double slope_impl(std::span<const T> series, std::size_t window) {
  if (window < 2) throw std::invalid_argument("steady_slope: window must be at least 2");
  if (window > series.size()) throw std::invalid_argument("steady_slope: window exceeds series");
  const std::size_t first = series.size() - window;
  // Abscissae centred on the window: x_i = i - (w - 1)/2.
  const double centre = 0.5 * static_cast<double>(window - 1);
  double mean_y = 0.0;
  for (std::size_t i = 0; i < window; ++i) mean_y += static_cast<double>(series[first + i]);
  mean_y /= static_cast<double>(window);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    const double x = static_cast<double>(i) - centre;
    sxy += x * (static_cast<double>(series[first + i]) - mean_y);
    sxx += x * x;
  }
  const double slope = sxy / sxx;
  return slope < kSlopeClamp ? 0.0 : slope;
}

}  // namespace

double f_of_t(std::int64_t s_value, Slot t) {
  if (t <= 0) throw std::domain_error("f_of_t: t must be positive");
  return static_cast<double>(s_value) / static_cast<double>(t);
}

double steady_slope(std::span<const std::int64_t> s_series, std::size_t window) {
  return slope_impl(s_series, window);
}

double steady_slope(std::span<const double> s_series, std::size_t window) {
  return slope_impl(s_series, window);
}

Aggregate aggregate(std::span<const RunSummary> summaries) {
  if (summaries.empty()) throw std::invalid_argument("aggregate: empty list");
  const RunSummary& head = summaries.front();
  for (const auto& s : summaries) {
    if (s.scheduler_id != head.scheduler_id || s.alpha != head.alpha ||
        s.heuristic != head.heuristic || s.resilience_R != head.resilience_R)
      throw std::invalid_argument("aggregate: heterogeneous summaries");
  }
  Aggregate out;
  out.count = summaries.size();
  double sum = 0.0;
  for (const auto& s : summaries) sum += s.f_cst;
  out.mean = sum / static_cast<double>(out.count);
  if (out.count > 1) {
    double ss = 0.0;
    for (const auto& s : summaries) ss += (s.f_cst - out.mean) * (s.f_cst - out.mean);
    const double sd = std::sqrt(ss / static_cast<double>(out.count - 1));
    out.std_error = sd / std::sqrt(static_cast<double>(out.count));
  }
  return out;
}

}  // namespace resched
