#include <set>

#include "doctest.h"
#include "resched/resilience.hpp"
#include "resched/timeline.hpp"

using namespace resched;

namespace {

AgentProfile with_R(Slot R) {
  AgentProfile p;
  p.period_T = 100;
  p.lifetime_D = 100;
  p.resilience_R = R;
  return p;
}

AgentState state(Slot R, Slot r, std::int64_t V) {
  AgentState s = init_state(with_R(R));
  s.remaining_r = r;
  s.violations = V;
  return s;
}

}  // namespace

TEST_SUITE("resilience") {

TEST_CASE("init_state") {
  const auto a = init_state(with_R(10));
  CHECK(a.remaining_r == 10);
  CHECK(a.violations == 0);
  CHECK(a.has_alive_packet);
  const auto b = init_state(with_R(1));
  CHECK(b.remaining_r == 1);
  CHECK(b.violations == 0);
}

TEST_CASE("success resets the window") {
  auto s = state(10, 4, 0);
  const auto ev = advance_slot(s, true);
  CHECK(ev.e0);
  CHECK_FALSE(ev.e1);
  CHECK(s.remaining_r == 10);
  CHECK(s.violations == 0);
}

TEST_CASE("last slot of the window is a violation") {
  auto s = state(10, 1, 0);
  const auto ev = advance_slot(s, false);
  CHECK(ev.e1);
  CHECK_FALSE(ev.e0);
  CHECK(s.remaining_r == 10);
  CHECK(s.violations == 1);
}

TEST_CASE("plain decrement") {
  auto s = state(10, 5, 3);
  const auto ev = advance_slot(s, false);
  CHECK_FALSE(ev.e0);
  CHECK_FALSE(ev.e1);
  CHECK(s.remaining_r == 4);
  CHECK(s.violations == 3);
}

TEST_CASE("R=10 trajectory with successes at 7, 10, 28, 29") {
  // r = 10 at t = 1; each later slot is one advance.
  const std::set<int> successes{7, 10, 28, 29};
  auto s = init_state(with_R(10));
  std::vector<int> e0_at, e0_pre, e1_at;
  for (int t = 2; t <= 47; ++t) {
    const Slot before = s.remaining_r;
    const auto ev = advance_slot(s, successes.count(t) > 0);
    if (ev.e0) {
      e0_at.push_back(t);
      e0_pre.push_back(static_cast<int>(before - 1));
    }
    if (ev.e1) e1_at.push_back(t);
    CHECK(s.remaining_r >= 1);
    CHECK(s.remaining_r <= 10);
  }
  CHECK(e0_at == std::vector<int>{7, 10, 28, 29});
  CHECK(e0_pre == std::vector<int>{4, 7, 2, 9});
  CHECK(e1_at == std::vector<int>{20, 39});
  CHECK(s.violations == 2);
}

TEST_CASE("violations bounded by ceil(t / R) without success") {
  for (Slot R : {1, 3, 7, 10}) {
    auto s = init_state(with_R(R));
    for (Slot t = 1; t <= 100; ++t) {
      const auto ev = advance_slot(s, false);
      CHECK(s.violations <= (t + R - 1) / R);
      CHECK(ev.e1 == (t % R == 0));
    }
  }
}

}
