#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "resched/metrics.hpp"

using namespace resched;

namespace {

RunSummary summary(double f) {
  RunSummary s;
  s.scheduler_id = "olt-r";
  s.heuristic = "R";
  s.resilience_R = 100;
  s.f_cst = f;
  return s;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("violation rate") {
  CHECK(f_of_t(0, 17) == 0.0);
  CHECK(f_of_t(50, 100) == doctest::Approx(0.5));
  CHECK_THROWS_AS(f_of_t(3, 0), std::domain_error);
}

TEST_CASE("slope of exact lines") {
  std::vector<std::int64_t> line(10000), flat(10000, 42);
  for (std::size_t t = 0; t < line.size(); ++t) line[t] = 3 * static_cast<std::int64_t>(t) + 7;
  for (std::size_t w : {2u, 10u, 5000u, 10000u}) {
    CHECK(steady_slope(line, w) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(steady_slope(flat, w) == 0.0);
  }
}

TEST_CASE("slope under alternating noise") {
  std::vector<double> s(10000);
  for (std::size_t t = 0; t < s.size(); ++t) s[t] = t + (t % 2 ? 0.5 : -0.5);
  CHECK(std::abs(steady_slope(s, 5000) - 1.0) < 1e-3);
}

TEST_CASE("decreasing tails clamp to zero") {
  std::vector<double> s{5, 4, 3, 2, 1};
  CHECK(steady_slope(s, 5) == 0.0);
}

TEST_CASE("slope of a random non-decreasing series is within [0, N]") {
  std::mt19937_64 rng(1);
  std::vector<std::int64_t> s(3000);
  std::int64_t acc = 0;
  for (auto& v : s) v = acc += std::uniform_int_distribution<int>(0, 10)(rng);
  const double k = steady_slope(s, 1500);
  CHECK(k >= 0.0);
  CHECK(k <= 10.0);
}

TEST_CASE("rate converges to the tail slope on affine data") {
  std::vector<std::int64_t> s(200000);
  for (std::size_t t = 0; t < s.size(); ++t) s[t] = 100 + 2 * static_cast<std::int64_t>(t);
  const double slope = steady_slope(s, 5000);
  CHECK(f_of_t(s.back(), static_cast<Slot>(s.size())) == doctest::Approx(slope).epsilon(1e-3));
}

TEST_CASE("slope window errors") {
  std::vector<std::int64_t> s(10, 1);
  CHECK_THROWS_AS(steady_slope(s, 1), std::invalid_argument);
  CHECK_THROWS_AS(steady_slope(s, 11), std::invalid_argument);
}

TEST_CASE("aggregate examples") {
  const std::vector<RunSummary> same{summary(0.5), summary(0.5), summary(0.5)};
  const auto a = aggregate(same);
  CHECK(a.mean == 0.5);
  CHECK(a.std_error == 0.0);
  CHECK(a.count == 3);
  const std::vector<RunSummary> two{summary(0.0), summary(1.0)};
  const auto b = aggregate(two);
  CHECK(b.mean == doctest::Approx(0.5));
  CHECK(b.std_error == doctest::Approx(0.5));
  const std::vector<RunSummary> one{summary(0.3)};
  CHECK(aggregate(one).std_error == 0.0);
}

TEST_CASE("aggregate recovers a known mean") {
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> dist(4.0);
  std::vector<RunSummary> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(summary(dist(rng)));
  const auto a = aggregate(xs);
  CHECK(std::abs(a.mean - 0.25) < 3 * a.std_error);
}

TEST_CASE("aggregate errors") {
  CHECK_THROWS_AS(aggregate(std::span<const RunSummary>{}), std::invalid_argument);
  std::vector<RunSummary> mixed{summary(0.1), summary(0.2)};
  mixed[1].resilience_R = 90;
  CHECK_THROWS_AS(aggregate(mixed), std::invalid_argument);
}

}
