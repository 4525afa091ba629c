#include "resched/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace resched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this log ratio f/V the allocation gain is evaluated to first order
// around V; the neglected term is O((f/V)^2).
constexpr double kSmallRatioLog = -20.0;

/// Index of the maximal score; exact ties resolved uniformly with one draw.
template <typename ScoreFn>
Decision argmax_random_ties(std::span<const CandidateView> candidates, ScoreFn score, Rng& rng) {
  if (candidates.empty()) return {};
  double best = -kInf;
  std::vector<std::size_t> tied;
  tied.reserve(4);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double s = score(candidates[i]);
    if (s > best) {
      best = s;
      tied.clear();
      tied.push_back(i);
    } else if (s == best) {
      tied.push_back(i);
    }
  }
  std::size_t pick = tied.front();
  if (tied.size() > 1) {
    std::uniform_int_distribution<std::size_t> dist(0, tied.size() - 1);
    pick = tied[dist(rng)];
  }
  return Decision{candidates[pick].agent_id};
}

Slot heuristic_exponent(Heuristic kind, const CandidateView& c) {
  return kind == Heuristic::R ? c.remaining_r : c.opportunities_q;
}

}  // namespace

double utility(double alpha, double x) {
  if (!(x > 0.0)) throw std::domain_error("utility: argument must be positive");
  if (alpha == 1.0) return std::log(x);
  const double beta = 1.0 - alpha;
  return std::pow(x, beta) / beta;
}

double heuristic_f(Heuristic kind, const CandidateView& c) {
  return std::pow(c.error_prob, static_cast<double>(heuristic_exponent(kind, c)));
}

double log_heuristic_f(Heuristic kind, const CandidateView& c) {
  return static_cast<double>(heuristic_exponent(kind, c)) * std::log(c.error_prob);
}

double f_hat(const CandidateView& c, bool allocated, Heuristic kind) {
  const double f = heuristic_f(kind, c);
  return allocated ? c.error_prob * f : f;
}

double v_hat(const CandidateView& c, bool allocated, Heuristic kind) {
  return static_cast<double>(c.violations_prev) + f_hat(c, allocated, kind);
}

std::vector<double> ols_column_costs(std::span<const CandidateView> candidates,
                                     const UtilityParams& params) {
  std::vector<double> idle(candidates.size());
  std::vector<double> served(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    idle[k] = utility(params.alpha, v_hat(candidates[k], false, params.heuristic));
    served[k] = utility(params.alpha, v_hat(candidates[k], true, params.heuristic));
  }
  std::vector<double> costs(candidates.size(), 0.0);
  for (std::size_t col = 0; col < candidates.size(); ++col) {
    for (std::size_t k = 0; k < candidates.size(); ++k) costs[col] += k == col ? served[k] : idle[k];
  }
  return costs;
}

double ols_log_gain(const CandidateView& c, const UtilityParams& params) {
  const double alpha = params.alpha;
  const double p = c.error_prob;
  const double log_p = std::log(p);
  const double log1m_p = std::log1p(-p);
  const double log_f = log_heuristic_f(params.heuristic, c);

  // Linear utility: the gain is exactly (1 - p) f.
  if (alpha == 0.0) return log_f + log1m_p;

  const double beta = 1.0 - alpha;
  if (c.violations_prev == 0) {
    // U(f) - U(p f)
    if (alpha == 1.0) return std::log(-log_p);
    return beta * log_f + std::log(-std::expm1(beta * log_p) / beta);
  }

  const double v = static_cast<double>(c.violations_prev);
  const double log_v = std::log(v);
  const double log_ratio = log_f - log_v;
  if (log_ratio < kSmallRatioLog) {
    // (1 - p) f times the mean of x^-alpha over [v + p f, v + f].
    const double mid_offset = 0.5 * (1.0 + p) * std::exp(log_ratio);
    return log_f + log1m_p - alpha * log_v + std::log1p(-alpha * mid_offset);
  }

  // U(b) - U(a) with a = v + p f, b = v + f, as a function of log(b / a).
  const double f = std::exp(log_f);
  const double a = v + p * f;
  const double width = std::exp(log1m_p + log_f);
  const double log_ratio_ba = std::log1p(width / a);
  if (alpha == 1.0) return std::log(log_ratio_ba);
  return beta * std::log(a) + std::log(std::expm1(beta * log_ratio_ba) / beta);
}

Decision ols_decide(std::span<const CandidateView> candidates, const UtilityParams& params,
                    Rng& tie_rng) {
  return argmax_random_ties(
      candidates, [&](const CandidateView& c) { return ols_log_gain(c, params); }, tie_rng);
}

double olt_log_metric(const CandidateView& c, const UtilityParams& params) {
  const double base = log_heuristic_f(params.heuristic, c) + std::log1p(-c.error_prob);
  if (params.alpha == 0.0) return base;
  std::int64_t v = c.violations_prev;
  if (params.floor_history) v = std::max<std::int64_t>(v, 1);
  if (v == 0) return params.alpha < 0.0 ? -kInf : kInf;
  return base - params.alpha * std::log(static_cast<double>(v));
}

Decision olt_decide(std::span<const CandidateView> candidates, const UtilityParams& params,
                    Rng& tie_rng) {
  return argmax_random_ties(
      candidates, [&](const CandidateView& c) { return olt_log_metric(c, params); }, tie_rng);
}

RoundRobinState RoundRobinState::make(std::size_t n_agents, Rng& rng) {
  RoundRobinState state;
  state.buffer.resize(n_agents);
  std::iota(state.buffer.begin(), state.buffer.end(), AgentId{0});
  std::shuffle(state.buffer.begin(), state.buffer.end(), rng);
  return state;
}

Decision round_robin_decide(std::span<const CandidateView> candidates, RoundRobinState& state,
                            Rng& rng) {
  if (candidates.empty()) return {};
  const std::size_t n = state.buffer.size();
  std::vector<std::uint8_t> alive(n, 0);
  for (const auto& c : candidates) alive.at(c.agent_id) = 1;

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = (state.cursor + i) % n;
    const AgentId agent = state.buffer[pos];
    if (!alive[agent]) continue;
    state.cursor = (pos + 1) % n;
    if (++state.steps == n) state = RoundRobinState::make(n, rng);
    return Decision{agent};
  }
  return {};
}

Decision pf_like_decide(std::span<const CandidateView> candidates, const PfState& state,
                        Rng& tie_rng) {
  return argmax_random_ties(
      candidates,
      [&](const CandidateView& c) {
        const double acc = state.accumulated_capacity.at(c.agent_id);
        if (acc <= 0.0) return kInf;
        return std::log2(1.0 + c.snr) / acc;
      },
      tie_rng);
}

void pf_update(PfState& state, std::span<const std::uint8_t> weight_flags,
               std::span<const double> snrs) {
  if (weight_flags.size() != state.accumulated_capacity.size() ||
      snrs.size() != state.accumulated_capacity.size())
    throw std::invalid_argument("pf_update: vector length mismatch");
  for (std::size_t k = 0; k < weight_flags.size(); ++k) {
    if (weight_flags[k]) state.accumulated_capacity[k] += std::log2(1.0 + snrs[k]);
  }
}

std::string SchedulerSpec::id() const {
  const char* suffix = utility.heuristic == Heuristic::R ? "-r" : "-q";
  switch (kind) {
    case SchedulerKind::OnlineSum:
      return std::string("ols") + suffix;
    case SchedulerKind::OnlineTaylor:
      return std::string("olt") + suffix;
    case SchedulerKind::RoundRobin:
      return "round-robin";
    case SchedulerKind::PfLike:
      return pf_weighting == PfWeighting::Allocated ? "pf-like" : "pf-like-alive";
  }
  return "unknown";
}

SchedulerSpec SchedulerSpec::parse(std::string_view id, double alpha) {
  SchedulerSpec spec;
  spec.utility.alpha = alpha;
  if (id == "ols-r" || id == "ols-q") {
    spec.kind = SchedulerKind::OnlineSum;
  } else if (id == "olt-r" || id == "olt-q") {
    spec.kind = SchedulerKind::OnlineTaylor;
  } else if (id == "round-robin") {
    spec.kind = SchedulerKind::RoundRobin;
  } else if (id == "pf-like") {
    spec.kind = SchedulerKind::PfLike;
  } else if (id == "pf-like-alive") {
    spec.kind = SchedulerKind::PfLike;
    spec.pf_weighting = PfWeighting::Alive;
  } else {
    throw ConfigError("scheduler", "unknown scheduler id '" + std::string(id) + "'");
  }
  if (spec.uses_utility()) {
    spec.utility.heuristic = id.ends_with("-q") ? Heuristic::Q : Heuristic::R;
    if (!(alpha <= 0.0)) throw ConfigError("alpha", "solvers support alpha <= 0");
  } else {
    spec.utility.alpha = 0.0;
  }
  return spec;
}

Scheduler::Scheduler(const SchedulerSpec& spec, std::size_t n_agents, Rng& decision_rng)
    : spec_(spec), rng_(&decision_rng), scratch_(n_agents, 0) {
  if (spec_.kind == SchedulerKind::RoundRobin) rr_ = RoundRobinState::make(n_agents, *rng_);
  if (spec_.kind == SchedulerKind::PfLike) pf_.accumulated_capacity.assign(n_agents, 0.0);
}

Decision Scheduler::decide(std::span<const CandidateView> candidates) {
  switch (spec_.kind) {
    case SchedulerKind::OnlineSum:
      return ols_decide(candidates, spec_.utility, *rng_);
    case SchedulerKind::OnlineTaylor:
      return olt_decide(candidates, spec_.utility, *rng_);
    case SchedulerKind::RoundRobin:
      return round_robin_decide(candidates, rr_, *rng_);
    case SchedulerKind::PfLike:
      return pf_like_decide(candidates, pf_, *rng_);
  }
  return {};
}

void Scheduler::end_slot(std::span<const std::uint8_t> alive, std::span<const double> snrs,
                         const Decision& decision) {
  if (spec_.kind != SchedulerKind::PfLike) return;
  if (spec_.pf_weighting == PfWeighting::Alive) {
    pf_update(pf_, alive, snrs);
    return;
  }
  std::fill(scratch_.begin(), scratch_.end(), 0);
  if (decision.agent) scratch_[*decision.agent] = 1;
  pf_update(pf_, scratch_, snrs);
}

}  // namespace resched
