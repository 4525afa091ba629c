#pragma once

// Reference implementations used by the unit and acceptance tests. They
// evaluate the scheduler quantities literally in high precision, with no
// log-domain rewriting, so they share no arithmetic with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "resched/channel.hpp"
#include "resched/schedulers.hpp"
#include "resched/timeline.hpp"

namespace oracle {

// f = p^r reaches 1e-360 for the generated instances while column costs
// reach 1e13; 450 digits keep the differences resolvable.
using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<450>>;
// The Taylor metric is a single product; 50 digits with the wide exponent
// range of cpp_bin_float are plenty.
using Wide = boost::multiprecision::cpp_bin_float_50;

inline Big big_utility(double alpha, const Big& x) {
  if (alpha == 1.0) return log(x);
  const Big beta = Big(1) - Big(alpha);
  return pow(x, beta) / beta;
}

template <typename T = Big>
T big_f(resched::Heuristic kind, const resched::CandidateView& c) {
  const std::int64_t e = kind == resched::Heuristic::R ? c.remaining_r : c.opportunities_q;
  return pow(T(c.error_prob), static_cast<int>(e));
}

/// Cost of every column of the on-line sum table: column j allocates
/// candidate j, every other candidate is left idle.
inline std::vector<Big> table_columns(const std::vector<resched::CandidateView>& cands,
                                      const resched::UtilityParams& params) {
  std::vector<Big> cost(cands.size(), Big(0));
  for (std::size_t j = 0; j < cands.size(); ++j) {
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const Big f = big_f(params.heuristic, cands[k]);
      const Big fh = k == j ? Big(cands[k].error_prob) * f : f;
      cost[j] += big_utility(params.alpha, Big(cands[k].violations_prev) + fh);
    }
  }
  return cost;
}

/// Cost of the column that allocates nobody.
inline Big idle_column(const std::vector<resched::CandidateView>& cands,
                       const resched::UtilityParams& params) {
  Big cost(0);
  for (const auto& c : cands)
    cost += big_utility(params.alpha, Big(c.violations_prev) + big_f(params.heuristic, c));
  return cost;
}

/// M_k = (1 - p) f max(V, 1)^-alpha.
inline Wide taylor_metric(const resched::CandidateView& c, const resched::UtilityParams& params) {
  const Wide v(std::max<std::int64_t>(c.violations_prev, 1));
  return (Wide(1) - Wide(c.error_prob)) * big_f<Wide>(params.heuristic, c) *
         pow(v, Wide(-params.alpha));
}

/// Indices whose value is within `rel` of the maximum.
template <typename T>
std::vector<std::size_t> near_max(const std::vector<T>& values, double rel) {
  std::vector<std::size_t> out;
  if (values.empty()) return out;
  const T best = *std::max_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= best - abs(best) * T(rel)) out.push_back(i);
  return out;
}

/// Loop reference for count_opportunities.
inline resched::Slot count_by_loop(const resched::AgentProfile& p, resched::Slot t,
                                   resched::Slot h) {
  resched::Slot n = 0;
  for (resched::Slot s = t; s < t + h; ++s) n += resched::is_alive(p, s) ? 1 : 0;
  return n;
}

/// Random candidate set. About one in five candidates copies the fields of an
/// earlier one, so exact ties occur regularly.
inline std::vector<resched::CandidateView> random_candidates(std::mt19937_64& rng,
                                                             std::size_t max_n,
                                                             resched::Slot max_r = 120,
                                                             std::int64_t max_v = 100) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_n);
  std::uniform_real_distribution<double> logp(std::log(1e-3), std::log(0.999));
  std::uniform_int_distribution<resched::Slot> r_dist(1, max_r);
  std::uniform_int_distribution<std::int64_t> v_dist(0, max_v);
  std::bernoulli_distribution dup(0.2);
  std::bernoulli_distribution zero_v(0.2);

  const std::size_t n = n_dist(rng);
  std::vector<resched::AgentId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);

  std::vector<resched::CandidateView> out;
  for (std::size_t i = 0; i < n; ++i) {
    resched::CandidateView c;
    if (i > 0 && dup(rng)) {
      c = out[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
    } else {
      c.error_prob = std::exp(logp(rng));
      c.remaining_r = r_dist(rng);
      c.opportunities_q = std::uniform_int_distribution<resched::Slot>(1, c.remaining_r)(rng);
      c.violations_prev = zero_v(rng) ? 0 : v_dist(rng);
      c.snr = resched::snr_from_error_prob(c.error_prob);
    }
    c.agent_id = ids[i];
    out.push_back(c);
  }
  return out;
}

}  // namespace oracle
