#include <doctest.h>

#include <cmath>

#include "cosknn/theory.hpp"
#include "support/oracles.hpp"

using namespace cosknn;
using namespace cosknn::theory;

TEST_CASE("binomial coefficients") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 4) == 0);
  CHECK(static_cast<double>(binomial(100, 50)) == doctest::Approx(1.0089134454556418e29));
  // Pascal's rule across the supported range.
  for (unsigned n = 1; n <= 120; n += 7) {
    for (unsigned k = 1; k <= n; k += 5) CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
  }
}

TEST_CASE("alpha closed form equals subset enumeration") {
  for (unsigned d = 4; d <= 12; ++d) {
    for (unsigned n : {1u, 3u, 10u, 30u}) {
      for (unsigned i = 1; i <= n; ++i) {
        CHECK(alpha_example2(n, i, d) == doctest::Approx(oracle::alpha_example2_by_enumeration(n, i, d)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("alpha vanishes exactly once a user has saturated") {
  for (std::size_t d = 4; d <= 10; ++d) {
    const std::size_t n = 30;
    for (std::size_t i = 1; i + d <= n + 4; ++i) CHECK(alpha_example2(n, i, d) == 0.0);
    for (std::size_t i = n - d + 5; i <= n; ++i) CHECK(alpha_example2(n, i, d) > 0.0);
  }
  CHECK(alpha_example2(10, 10, 5) == doctest::Approx(0.8));
  CHECK_THROWS(alpha_example2(10, 0, 5));
  CHECK_THROWS(alpha_example2(10, 11, 5));
  CHECK_THROWS(alpha_example2(10, 1, 3));
}

TEST_CASE("hypergeometric alpha") {
  for (unsigned d = 2; d <= 10; ++d) {
    for (unsigned m = 1; m <= d; ++m) {
      for (unsigned size = 0; size <= d; ++size) {
        CHECK(alpha_hypergeometric(d, size, m) ==
              doctest::Approx(oracle::alpha_by_enumeration(d, size, m)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("alpha sum bound") {
  CHECK(alpha_sum_bound(5) == doctest::Approx(0.8));
  CHECK(alpha_sum_bound(6) == doctest::Approx(2.0 * (1.0 - 24.0 / 360.0)));
  CHECK_THROWS(alpha_sum_bound(4));
  // With every user present the sum runs over all unsaturated ages.
  for (unsigned d = 5; d <= 12; ++d) {
    double total = 0.0;
    const unsigned n = 40;
    for (unsigned i = 1; i <= n; ++i) total += oracle::alpha_example2_by_enumeration(n, i, d);
    CHECK(total <= alpha_sum_bound(d) + 1e-12);
  }
}

TEST_CASE("alpha tables by mask process") {
  ScenarioConfig cfg;
  cfg.d = 6;
  CHECK(alpha_table(cfg, 10, 6).values == std::vector<double>(10, 0.0));
  cfg.mask_process = MaskProcess::example2_incremental;
  const auto t = alpha_table(cfg, 10, 4);
  for (std::size_t i = 1; i <= 10; ++i) CHECK(t.values[i - 1] == doctest::Approx(alpha_example2(10, i, 6)));
  cfg.mask_process = MaskProcess::custom_nested;
  CHECK_THROWS(alpha_table(cfg, 10, 4));
}

TEST_CASE("bound breakdown by hand") {
  AlphaTable a{4, 5, {0.0, 0.0, 0.5, 0.8}};
  const std::vector<std::size_t> reveal{1, 2, 3};
  const auto b = bound_breakdown(a, reveal, 5, 2);
  CHECK(b.term_alpha_sum == doctest::Approx(2.0 / 3.0 * 1.3));
  CHECK(b.term_alpha_prod == 0.0);
  CHECK(b.p_exponent == doctest::Approx(0.25));
  CHECK(b.term_bias == doctest::Approx(std::pow(2.0 / 3.0, 0.25)));
  CHECK(b.term_variance == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(b.total() == doctest::Approx(b.term_alpha_sum + b.term_bias + b.term_variance));
  CHECK(bound_breakdown(a, reveal, 5, 4).p_exponent == 1.0);
  CHECK_THROWS(bound_breakdown(a, reveal, 1, 2));
}

TEST_CASE("k schedules") {
  CHECK(KSchedule({ScheduleKind::ex1_rate, 0}, 5)(100) == 5);
  CHECK(KSchedule({ScheduleKind::ex1_rate, 0}, 5)(6400) == 19);
  CHECK(KSchedule({ScheduleKind::ex2_rate, 0}, 5)(100) == 6);
  CHECK(KSchedule({ScheduleKind::ex2_rate, 0}, 5)(6400) == 33);
  CHECK(KSchedule({ScheduleKind::constant, 7}, 5)(3) == 3);
  CHECK(KSchedule({ScheduleKind::power, 1.0}, 5)(50) == 50);
  CHECK_THROWS_AS(KSchedule({ScheduleKind::constant, 2.5}, 5), ConfigError);
  CHECK_THROWS_AS(KSchedule({ScheduleKind::power, 1.5}, 5), ConfigError);
  const std::vector<std::size_t> ns{100, 400};
  const auto m = KSchedule({ScheduleKind::ex1_rate, 0}, 5).to_map(ns);
  CHECK(m.at(400) == 7);
}

TEST_CASE("eta_true") {
  ScenarioConfig cfg;
  cfg.d = 3;
  CHECK(eta_true(std::vector<double>{1, 2, 6}, cfg) == doctest::Approx(3.0));
  CHECK_THROWS(eta_true(std::vector<double>{0, 0, 0}, cfg));
}
