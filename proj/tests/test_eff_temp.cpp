#include <doctest.h>

#include <cmath>

#include "qal/eff_temp.hpp"
#include "qal/error.hpp"

using namespace qal;

TEST_CASE("amplitude ratio closed forms") {
  CHECK(amplitude_ratio(1.0, 0.0) == 1.0);
  CHECK(amplitude_ratio(1.0, 1.0) == doctest::Approx(2.414214).epsilon(1e-6));
  CHECK_THROWS_AS(amplitude_ratio(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(amplitude_ratio(1.0, -1.0), DomainError);
  for (double c : {0.01, 0.5, 3.0, 1e4}) CHECK(amplitude_ratio(c * 0.3, c * 0.7) == doctest::Approx(amplitude_ratio(0.3, 0.7)).epsilon(1e-14));
  double prev = 1.0;
  for (int k = 1; k < 50; ++k) {
    const double r = amplitude_ratio(1.0, 0.1 * k);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("effective temperature") {
  CHECK(effective_temperature(1.0, 0.0) == kInfiniteTemperature);
  CHECK(effective_temperature(1.0, 1.0) == doctest::Approx(1.134593).epsilon(1e-6));
  CHECK(std::abs(effective_temperature(1.0, 1.0) - 1.0 / std::log(1.0 + std::sqrt(2.0))) < 1e-12);
  CHECK(effective_temperature(1, 100) < effective_temperature(1, 10));
  CHECK(effective_temperature(1, 10) < effective_temperature(1, 1));
  for (double b : {0.01, 0.2, 1.0, 7.0}) {
    const double r = amplitude_ratio(1.0, b);
    CHECK(effective_temperature(1.0, b) == doctest::Approx(2.0 / std::log(r * r)).epsilon(1e-12));
  }
}

TEST_CASE("ladder") {
  const auto pts = ladder(Schedule::linear(), {0.2, 0.5, 0.8});
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].T_eff > pts[1].T_eff);
  CHECK(pts[1].T_eff > pts[2].T_eff);
  CHECK(pts[1].A == 0.5);
  CHECK(pts[1].B == 0.5);
  CHECK(pts[1].T_eff == doctest::Approx(1.134593).epsilon(1e-6));

  const auto zero = ladder(Schedule::linear(), {0.0});
  CHECK(zero[0].infinite());
  CHECK(zero[0].beta() == 0.0);
  CHECK_THROWS_AS(ladder(Schedule::linear(), {0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(ladder(Schedule::linear(), {0.5, 0.4}), DomainError);
}

TEST_CASE("temperature text") {
  CHECK(format_temperature(kInfiniteTemperature) == "inf");
  CHECK(parse_temperature("inf") == kInfiniteTemperature);
  CHECK(parse_temperature(format_temperature(0.1)) == 0.1);
  CHECK_THROWS_AS(parse_temperature("warm"), DomainError);
  const auto csv = ladder_csv(ladder(Schedule::linear(), {0.0, 0.5}));
  CHECK(csv.rfind("s_prime,A,B,ratio,T_eff\n", 0) == 0);
  CHECK(csv.find(",inf\n") != std::string::npos);
}
