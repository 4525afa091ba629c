#include "resched/channel.hpp"

#include <algorithm>
#include <cmath>

namespace resched {

std::vector<double> linear_means(std::size_t n_agents, double p_lo, double p_hi) {
  if (n_agents == 0) throw ConfigError("channel.n_agents", "must be at least 1");
  if (!(p_lo > 0.0 && p_lo < p_hi && p_hi < 1.0))
    throw ConfigError("channel", "require 0 < p_lo < p_hi < 1");
  std::vector<double> means(n_agents, p_lo);
  if (n_agents == 1) return means;
  const double step = (p_hi - p_lo) / static_cast<double>(n_agents - 1);
  for (std::size_t k = 1; k + 1 < n_agents; ++k) means[k] = p_lo + static_cast<double>(k) * step;
  means.back() = p_hi;
  return means;
}

std::vector<double> log_means(std::size_t n_agents, double p_lo, double p_hi) {
  if (n_agents == 0) throw ConfigError("channel.n_agents", "must be at least 1");
  if (!(p_lo > 0.0 && p_lo < p_hi && p_hi < 1.0))
    throw ConfigError("channel", "require 0 < p_lo < p_hi < 1");
  std::vector<double> means(n_agents, p_lo);
  if (n_agents == 1) return means;
  const double log_lo = std::log(p_lo);
  const double step = (std::log(p_hi) - log_lo) / static_cast<double>(n_agents - 1);
  for (std::size_t k = 1; k + 1 < n_agents; ++k)
    means[k] = std::exp(log_lo + static_cast<double>(k) * step);
  means.back() = p_hi;
  return means;
}

std::vector<double> spaced_means(MeanSpacing spacing, std::size_t n_agents, double p_lo,
                                 double p_hi) {
  return spacing == MeanSpacing::Linear ? linear_means(n_agents, p_lo, p_hi)
                                        : log_means(n_agents, p_lo, p_hi);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ChannelRealization draw_realization(std::span<const double> means, double jitter_factor, Rng& rng) {
  if (!(jitter_factor >= 1.0)) throw ConfigError("channel.jitter_factor", "must be >= 1");
  ChannelRealization out;
  out.error_probs.reserve(means.size());
  const double log_jitter = std::log(jitter_factor);
  for (double mean : means) {
    const double u = 2.0 * uniform01(rng) - 1.0;
    const double p = mean * std::exp(u * log_jitter);
    out.error_probs.push_back(std::clamp(p, kErrorProbEpsilon, 1.0 - kErrorProbEpsilon));
  }
  return out;
}

bool transmission_outcome(double p, Rng& rng) { return uniform01(rng) >= p; }

double snr_from_error_prob(double p) { return 1.0 / p - 1.0; }

double error_prob_from_snr(double snr) { return 1.0 / (1.0 + snr); }

}  // namespace resched
