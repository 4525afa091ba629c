#include "resched/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "resched/channel.hpp"

namespace resched {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng make_stream(std::uint64_t base, std::uint64_t tag) {
  const std::uint64_t a = splitmix64(base ^ splitmix64(tag));
  const std::uint64_t b = splitmix64(a);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

}  // namespace

RandomStreams derive_streams(std::uint64_t master_seed, std::uint64_t iteration_index) {
  const std::uint64_t base = splitmix64(splitmix64(master_seed) ^ splitmix64(~iteration_index));
  return RandomStreams{make_stream(base, 1), make_stream(base, 2), make_stream(base, 3)};
}

void IterationConfig::validate() const {
  if (n_agents == 0) throw ConfigError("n_agents", "must be positive");
  if (n_slots < 1) throw ConfigError("n_slots", "must be positive");
  if (period_T < 1) throw ConfigError("period_T", "must be positive");
  if (lifetime_D < 1 || lifetime_D > period_T)
    throw ConfigError("lifetime_D", "must lie in [1, period_T]");
  if (resilience_R < 1) throw ConfigError("resilience_R", "must be positive");
  if (!(jitter_factor >= 1.0)) throw ConfigError("jitter_factor", "must be >= 1");
  if (start_offsets) {
    if (start_offsets->size() != n_agents)
      throw ConfigError("start_offsets", "length must equal n_agents");
    for (Slot o : *start_offsets)
      if (o < 0 || o >= period_T) throw ConfigError("start_offsets", "entries must lie in [0, T)");
  }
  if (error_probs) {
    if (error_probs->size() != n_agents)
      throw ConfigError("error_probs", "length must equal n_agents");
    for (double p : *error_probs)
      if (!(p > 0.0 && p < 1.0)) throw ConfigError("error_probs", "entries must lie in (0, 1)");
  } else if (!(p_lo > 0.0 && p_hi < 1.0 && (p_lo < p_hi || n_agents == 1))) {
    throw ConfigError("p_lo", "require 0 < p_lo < p_hi < 1");
  }
}

IterationTrace run_iteration(const IterationConfig& config) {
  config.validate();
  const std::size_t n = config.n_agents;
  RandomStreams streams = derive_streams(config.master_seed, config.iteration_index);

  // Environment: offsets first, then the channel realization.
  std::vector<double> means = n == 1 ? std::vector<double>{config.p_lo}
                                      : spaced_means(config.spacing, n, config.p_lo, config.p_hi);
  IterationTrace trace;
  trace.profiles.resize(n);
  std::uniform_int_distribution<Slot> offset_dist(0, config.period_T - 1);
  for (std::size_t k = 0; k < n; ++k) {
    AgentProfile& prof = trace.profiles[k];
    prof.agent_id = k;
    prof.period_T = config.period_T;
    prof.lifetime_D = config.lifetime_D;
    prof.resilience_R = config.resilience_R;
    prof.mean_error_prob = means[k];
    const Slot drawn = offset_dist(streams.env);
    prof.start_offset = config.start_offsets ? (*config.start_offsets)[k] : drawn;
  }
  std::vector<double> probs = draw_realization(means, config.jitter_factor, streams.env).error_probs;
  if (config.error_probs) probs = *config.error_probs;
  trace.error_probs = probs;

  std::vector<double> snrs(n);
  auto refresh_snrs = [&] {
    for (std::size_t k = 0; k < n; ++k) snrs[k] = snr_from_error_prob(probs[k]);
  };
  refresh_snrs();

  std::vector<AgentState> states;
  states.reserve(n);
  for (const auto& prof : trace.profiles) states.push_back(init_state(prof));
  std::vector<std::uint8_t> pending(n, 0);    // packet not yet delivered
  std::vector<std::uint8_t> candidate(n, 0);

  Scheduler scheduler(config.scheduler, n, streams.decision);
  std::vector<CandidateView> candidates;
  candidates.reserve(n);

  trace.s_series.resize(static_cast<std::size_t>(config.n_slots));
  if (config.record_log) trace.log.reserve(static_cast<std::size_t>(config.n_slots));
  std::int64_t s_value = 0;

  for (Slot t = 0; t < config.n_slots; ++t) {
    if (config.redraw_channel_per_slot && t > 0 && !config.error_probs) {
      probs = draw_realization(means, config.jitter_factor, streams.env).error_probs;
      refresh_snrs();
    }

    // (1)-(2) arrivals, expiry and candidate set.
    candidates.clear();
    for (std::size_t k = 0; k < n; ++k) {
      const AgentProfile& prof = trace.profiles[k];
      AgentState& st = states[k];
      candidate[k] = 0;
      if (t < prof.start_offset) {
        st.has_alive_packet = false;
        continue;
      }
      if (is_arrival(prof, t)) pending[k] = 1;
      const bool alive = is_alive(prof, t);
      if (!alive) pending[k] = 0;
      st.has_alive_packet = alive && (pending[k] || !config.consume_on_success);
      st.q_cached = count_opportunities(prof, t, st.remaining_r);
      if (!st.has_alive_packet) continue;
      candidate[k] = 1;
      candidates.push_back(CandidateView{k, probs[k], st.remaining_r, st.q_cached, st.violations,
                                         snrs[k]});
    }

    // (3)-(4) decision and channel draw.
    const Decision decision = scheduler.decide(candidates);
    bool success = false;
    if (decision.agent) success = transmission_outcome(probs[*decision.agent], streams.channel);

    SlotRecord record;
    if (config.record_log) {
      record.t = t;
      record.allocated = decision.agent;
      record.success = success;
      record.n_candidates = candidates.size();
      for (const auto& c : candidates) {
        const bool served = decision.agent && *decision.agent == c.agent_id;
        double log_fh = log_heuristic_f(config.scheduler.utility.heuristic, c);
        if (served) log_fh += std::log(c.error_prob);
        record.taylor_gap = std::max(record.taylor_gap, std::exp(log_fh));
      }
    }

    // (5) resilience update for every agent whose time-line has started.
    for (std::size_t k = 0; k < n; ++k) {
      if (t < trace.profiles[k].start_offset) continue;
      const bool tx_ok = success && *decision.agent == k;
      const SlotEvents ev = advance_slot(states[k], tx_ok);
      if (ev.e1) {
        ++s_value;
        if (config.record_log) record.violators.push_back(k);
      }
      if (ev.e0 && config.consume_on_success) pending[k] = 0;
    }

    // (6)-(7)
    scheduler.end_slot(candidate, snrs, decision);
    trace.s_series[static_cast<std::size_t>(t)] = s_value;
    if (config.record_log) {
      record.s_value = s_value;
      trace.log.push_back(std::move(record));
    }
  }

  trace.final_violations.reserve(n);
  for (const auto& st : states) trace.final_violations.push_back(st.violations);
  return trace;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
  out << "t,allocated,success,violators,s,candidates,taylor_gap\n";
  for (const auto& r : trace.log) {
    out << r.t << ',';
    if (r.allocated)
      out << *r.allocated;
    else
      out << -1;
    out << ',' << (r.success ? 1 : 0) << ',';
    for (std::size_t i = 0; i < r.violators.size(); ++i) out << (i ? ";" : "") << r.violators[i];
    out << ',' << r.s_value << ',' << r.n_candidates << ',' << r.taylor_gap << '\n';
  }
}

}  // namespace resched
