#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "resched/timeline.hpp"
#include "resched/types.hpp"

using namespace resched;

namespace {

AgentProfile profile(Slot T, Slot D, Slot offset) {
  AgentProfile p;
  p.period_T = T;
  p.lifetime_D = D;
  p.resilience_R = 10;
  p.start_offset = offset;
  p.mean_error_prob = 0.1;
  return p;
}

}  // namespace

TEST_SUITE("timeline") {

TEST_CASE("alive slots with T=4, D=3") {
  const auto p = profile(4, 3, 0);
  CHECK(is_alive(p, 0));
  CHECK(is_alive(p, 1));
  CHECK(is_alive(p, 2));
  CHECK_FALSE(is_alive(p, 3));
  CHECK(is_alive(p, 4));
  CHECK_FALSE(is_alive(p, 7));
}

TEST_CASE("no holes when D equals T") {
  const auto p = profile(4, 4, 0);
  for (Slot t = 0; t < 50; ++t) CHECK(is_alive(p, t));
}

TEST_CASE("nothing alive before the first arrival") {
  const auto p = profile(4, 3, 2);
  CHECK_FALSE(is_alive(p, 0));
  CHECK_FALSE(is_alive(p, 1));
  CHECK(is_alive(p, 2));
  CHECK(is_alive(p, 4));
  CHECK_FALSE(is_alive(p, 5));
  CHECK(is_arrival(p, 2));
  CHECK(is_arrival(p, 6));
  CHECK_FALSE(is_arrival(p, 0));
}

TEST_CASE("count_opportunities examples") {
  CHECK(count_opportunities(profile(4, 4, 0), 5, 7) == 7);
  CHECK(count_opportunities(profile(4, 3, 0), 0, 8) == 6);
  CHECK(count_opportunities(profile(4, 3, 1), 9, 0) == 0);
  CHECK(count_opportunities(profile(7, 2, 3), 0, 0) == 0);
}

TEST_CASE("count_opportunities agrees with a slot loop") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 3000; ++i) {
    const Slot T = std::uniform_int_distribution<Slot>(1, 30)(rng);
    const Slot D = std::uniform_int_distribution<Slot>(1, T)(rng);
    const Slot off = std::uniform_int_distribution<Slot>(0, T - 1)(rng);
    const Slot t = std::uniform_int_distribution<Slot>(0, 200)(rng);
    const Slot h = std::uniform_int_distribution<Slot>(0, 150)(rng);
    const auto p = profile(T, D, off);
    REQUIRE(count_opportunities(p, t, h) == oracle::count_by_loop(p, t, h));
  }
}

TEST_CASE("window additivity and bound") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    const Slot T = std::uniform_int_distribution<Slot>(1, 20)(rng);
    const Slot D = std::uniform_int_distribution<Slot>(1, T)(rng);
    const auto p = profile(T, D, std::uniform_int_distribution<Slot>(0, T - 1)(rng));
    const Slot t = std::uniform_int_distribution<Slot>(0, 100)(rng);
    const Slot h1 = std::uniform_int_distribution<Slot>(0, 60)(rng);
    const Slot h2 = std::uniform_int_distribution<Slot>(0, 60)(rng);
    const Slot whole = count_opportunities(p, t, h1 + h2);
    REQUIRE(whole == count_opportunities(p, t, h1) + count_opportunities(p, t + h1, h2));
    REQUIRE(whole <= h1 + h2);
    if (D == T && t >= p.start_offset) REQUIRE(whole == h1 + h2);
  }
}

TEST_CASE("is_alive is periodic after the offset") {
  const auto p = profile(9, 5, 4);
  for (Slot t = 4; t < 100; ++t) CHECK(is_alive(p, t) == is_alive(p, t + 9));
}

TEST_CASE("profile validation") {
  CHECK_NOTHROW(profile(4, 3, 3).validate());
  CHECK_THROWS_AS(profile(4, 5, 0).validate(), ConfigError);
  CHECK_THROWS_AS(profile(4, 3, 4).validate(), ConfigError);
  auto p = profile(4, 3, 0);
  p.mean_error_prob = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

}
