#include <doctest.h>

#include <algorithm>

#include "qal/error.hpp"
#include "qal/rng.hpp"
#include "qal/schedule.hpp"

using namespace qal;

TEST_CASE("linear schedule endpoints") {
  const auto lin = Schedule::linear();
  CHECK(lin.eval(1.0).A == 0.0);
  CHECK(lin.eval(1.0).B == 1.0);
  CHECK(lin.eval(0.0).A == 1.0);
  CHECK(lin.eval(0.0).B == 0.0);
  CHECK(lin.eval(0.25).A == 0.75);
  CHECK(lin.eval(0.25).B == 0.25);
  CHECK_THROWS_AS(lin.eval(1.5), DomainError);
  CHECK_THROWS_AS(lin.eval(-0.1), DomainError);
}

TEST_CASE("quadratic schedule and scales") {
  const auto q = Schedule::quadratic(2.0, 3.0);
  CHECK(q.eval(0.5).A == doctest::Approx(0.5));
  CHECK(q.eval(0.5).B == doctest::Approx(0.75));
  CHECK_THROWS_AS(Schedule::linear(0.0), DomainError);
  CHECK(parse_schedule_family("quadratic") == Schedule::Family::quadratic);
  CHECK_THROWS_AS(parse_schedule_family("cubic"), ConfigError);
}

TEST_CASE("monotone families") {
  Rng rng(9);
  for (const auto& sched : {Schedule::linear(), Schedule::quadratic(), Schedule::linear(2.0, 0.5)}) {
    std::vector<double> s(1000);
    for (auto& v : s) v = rng.uniform();
    std::sort(s.begin(), s.end());
    for (std::size_t k = 1; k < s.size(); ++k) {
      CHECK(sched.eval(s[k]).A <= sched.eval(s[k - 1]).A);
      CHECK(sched.eval(s[k]).B >= sched.eval(s[k - 1]).B);
    }
  }
}

TEST_CASE("s_for_ratio inverts A/B") {
  for (const auto& sched : {Schedule::linear(), Schedule::quadratic(), Schedule::linear(1.5, 0.7)})
    for (double r : {0.01, 0.05, 0.3, 1.0, 4.0, 50.0}) {
      const auto v = sched.eval(sched.s_for_ratio(r));
      CHECK(v.A / v.B == doctest::Approx(r).epsilon(1e-12));
    }
  CHECK(Schedule::linear().s_for_ratio(1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Schedule::linear().s_for_ratio(0.0), DomainError);
}

TEST_CASE("forward path") {
  const auto p = forward_path(10.0);
  CHECK(p.s_at(5.0) == 0.5);
  CHECK(p.s_at(0.0) == 0.0);
  CHECK(p.s_at(10.0) == 1.0);
  double prev = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double s = p.s_at(0.1 * k);
    CHECK(s >= prev);
    prev = s;
  }
  CHECK_THROWS_AS(forward_path(0.0), DomainError);
  CHECK_THROWS_AS(p.s_at(10.5), DomainError);
}

TEST_CASE("local search path") {
  auto p = local_search_path(1.0, 4.0, 10.0);
  CHECK(p.duration() == 4.0);
  CHECK(p.min_s() == 1.0);
  CHECK(p.s_at(2.0) == 1.0);

  p = local_search_path(0.5, 0.0, 10.0);
  CHECK(p.waypoints() == std::vector<Waypoint>{{0, 1}, {5, 0.5}, {10, 1}});
  CHECK(local_search_path(0.5, 3.0, 10.0).duration() == 13.0);
  CHECK(local_search_path(0.7, 5.0, 10.0).duration() == doctest::Approx(11.0));

  for (double sp : {0.0, 0.3, 0.77, 0.95})
    for (double tau : {0.0, 2.5}) {
      const auto q = local_search_path(sp, tau, 7.0);
      CHECK(q.start_s() == 1.0);
      CHECK(q.end_s() == 1.0);
      CHECK(q.min_s() == sp);
      for (const auto& w : q.waypoints()) CHECK(q.s_at(w.t) == w.s);
    }
  CHECK_THROWS_AS(local_search_path(1.2, 0.0, 10.0), DomainError);
  CHECK_THROWS_AS(local_search_path(0.5, -1.0, 10.0), DomainError);
  CHECK_THROWS_AS(local_search_path(0.5, 0.0, 0.0), DomainError);
}

TEST_CASE("waypoint validation") {
  CHECK_THROWS_AS(AnnealPath(std::vector<Waypoint>{}), DomainError);
  CHECK_THROWS_AS(AnnealPath({{1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(AnnealPath({{0.0, 0.0}, {0.0, 1.0}}), DomainError);
  CHECK(hold_path(0.4, 3.0).s_at(1.7) == 0.4);
}
