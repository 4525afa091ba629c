#pragma once

#include <span>
#include <vector>

#include "resched/types.hpp"

namespace resched {

/// Probabilities are clamped to [kErrorProbEpsilon, 1 - kErrorProbEpsilon].
inline constexpr double kErrorProbEpsilon = 1e-9;

/// Per-agent channel error probabilities for one iteration.
struct ChannelRealization {
  std::vector<double> error_probs;
};

/// Arithmetic progression of `n_agents` means from p_lo to p_hi inclusive.
std::vector<double> linear_means(std::size_t n_agents, double p_lo, double p_hi);

/// Geometric progression of `n_agents` means from p_lo to p_hi inclusive.
std::vector<double> log_means(std::size_t n_agents, double p_lo, double p_hi);

/// How configured means are spread over [p_lo, p_hi].
enum class MeanSpacing { Linear, Log };

std::vector<double> spaced_means(MeanSpacing spacing, std::size_t n_agents, double p_lo, double p_hi);

/// p_k = clamp(mean_k * jitter^u, eps, 1 - eps) with u ~ U[-1, 1] per agent.
ChannelRealization draw_realization(std::span<const double> means, double jitter_factor, Rng& rng);

/// Uniform draw in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Success with probability 1 - p.
bool transmission_outcome(double p, Rng& rng);

/// Linear SNR paired with an error probability through p = 1 / (1 + snr).
double snr_from_error_prob(double p);
double error_prob_from_snr(double snr);

}  // namespace resched
