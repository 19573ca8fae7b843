#include "doctest.h"

#include "mtlab/bounds.hpp"
#include "mtlab/error.hpp"
#include "mtlab/scaling.hpp"

#include <cmath>
#include <random>

using namespace mtlab;

TEST_CASE("universal_lower_bound") {
  CHECK(universal_lower_bound(4 * M_PI, 2) == doctest::Approx(12.56637).epsilon(1e-6));
  CHECK(universal_lower_bound(1.0, 3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(universal_lower_bound(2.0, 4) == doctest::Approx(4.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(universal_lower_bound(20.0, 2), Error);
  const auto r = universal_lower_report(1.0, 3);
  CHECK(to_json(r)["kind"] == "universal-lower");
}

TEST_CASE("attainment_test") {
  const double lb = universal_lower_bound(2.0, 2);
  CHECK(attainment_test(lb, 2.0, 2, 1e-6) == Verdict::no_verdict);
  CHECK(attainment_test(lb * 1.01, 2.0, 2, 1e-6) == Verdict::attained_certified_numerically);
  CHECK(attainment_test(lb + 5e-7, 2.0, 2, 1e-6) == Verdict::no_verdict);
}

TEST_CASE("g_function") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 2 + trial % 3;
    const double alpha = alpha_critical(N) * (0.05 + 0.95 * unit(rng));
    const double a = 0.3 + 3 * unit(rng), b = 0.3 + 10 * unit(rng), B = 0.05 + 0.3 * unit(rng);
    CHECK(g_function(1.0, alpha, a, b, N, B) == 1.0);
    CHECK(g_function(0.0, alpha, a, b, N, B) == 0.0);
  }
}

TEST_CASE("g_function_test endpoint derivative at a = N'") {
  const double B = 0.1709;
  for (int N : {2, 3}) {
    const double np = conjugate_exponent(N);
    for (double alpha : {1.0, 3.0, 0.9 * alpha_critical(N)})
      for (double b : {1.0, 2.0, 5.0, 20.0}) {
        const auto res = g_function_test(alpha, np, b, N, B);
        const double h = 1e-5;
        auto g = [&](double t) { return g_function(t, alpha, np, b, N, B); };
        const double fd = (3 * g(1.0) - 4 * g(1 - h) + g(1 - 2 * h)) / (2 * h);
        CHECK(std::abs(res.g_prime_one - fd) <= 1e-7);
        CHECK((res.g_prime_one < 0) == (b > double(N) * N / (alpha * B)));
        if (res.g_prime_one < 0) {
          CHECK(res.max_g > 1.0);
          CHECK(res.verdict == Verdict::attained_certified_numerically);
        }
        CHECK(res.max_g >= 1.0);
      }
  }
  CHECK_THROWS_AS(g_function_test(1.0, 2.0, 2.0, 2, 0.0), Error);
}

TEST_CASE("g_function_test refinement beats the scan") {
  const auto res = g_function_test(2 * M_PI, 2.0, 8.0, 2, 0.1709);
  const double t = res.argmax_t;
  for (double dt : {-1e-6, 1e-6})
    if (t + dt > 0 && t + dt < 1)
      CHECK(g_function(t + dt, 2 * M_PI, 2.0, 8.0, 2, 0.1709) <= res.max_g);
  CHECK(to_json(res.report)["formula"].get<std::string>().rfind("g-test:", 0) == 0);
}

TEST_CASE("lower-bound chain along the two-parameter family") {
  const auto gn = maximize_gn(2);
  const double B = gn.bgn_estimate;
  for (auto [alpha, a, b] : {std::tuple{2 * M_PI, 2.0, 8.0}, std::tuple{3.0, 2.0, 6.0}, std::tuple{8.0, 1.5, 4.0}}) {
    const auto p = MTParams::make(2, alpha, a, b);
    const auto res = g_function_test(alpha, a, b, 2, B);
    const double t = std::clamp(res.argmax_t, 1e-6, 1 - 1e-6);
    const auto W = gn_two_parameter_family(gn.maximizer_profile, t, p);
    const double lb = universal_lower_bound(alpha, 2);
    CHECK(lb * g_function(t, alpha, a, b, 2, B) <= j_truncated(W, p) * (1 + 1e-9));
    CHECK(j_truncated(W, p) <= mt_integral(W, p) * (1 + 1e-13));
  }
}

TEST_CASE("c_tilde_series") {
  SUBCASE("term ratio tends to 1/2") {
    for (int N : {2, 3, 5}) {
      for (int j = 0; j < 2000; j += 37) {
        // t_{j+1}/t_j = ((m+1)/m)^m (m+1)/m / (2e), m = j + N
        const double m = j + N;
        const long double ml = m;
        const double expected = double(std::pow((ml + 1) / ml, ml) * (ml + 1) / ml / (2 * std::exp(1.0L)));
        CHECK(c_tilde_term_ratio(N, j) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(c_tilde_term_ratio(N, j) - 0.5 > 0);
        CHECK(c_tilde_term_ratio(N, j) - 0.5 <= 1 / (4 * m));
      }
      CHECK(std::abs(c_tilde_term_ratio(N, 250) - 0.5) < 1e-3);
    }
  }
  SUBCASE("prefactor scaling") {
    for (int N : {2, 3, 4})
      CHECK(c_tilde_series(N, 0.4) == doctest::Approx(std::pow(2.0, N) * c_tilde_series(N, 0.2)).epsilon(1e-14));
  }
  SUBCASE("truncation stability") {
    const double s200 = c_tilde_partial(2, 1.0, 200), s400 = c_tilde_partial(2, 1.0, 400);
    CHECK(std::abs(s200 - s400) <= 1e-12 * s400);
    CHECK(c_tilde_series(2, 1.0) == doctest::Approx(s400).epsilon(1e-14));
  }
  SUBCASE("independent summation") {
    // plain long double recurrence t_{j+1} = t_j (m+1)^{m+1} / (m^m m) / (2e)
    long double term = 4.0L, sum = 0.0L; // j = 0, N = 2: 2^2 / 1!
    for (int j = 0; j < 300; ++j) {
      sum += term;
      const long double m = j + 2;
      term *= std::pow((m + 1) / m, m) * (m + 1) / m / (2 * std::exp(1.0L));
    }
    CHECK(c_tilde_series(2, 1.0) == doctest::Approx(double(sum)).epsilon(1e-13));
  }
}

TEST_CASE("c_tilde term ratio within 1e-3 of 1/2 by j = 60" * doctest::may_fail()) {
  // the deviation decays like 1/(4(j+N)), about 4e-3 at j = 60
  CHECK(std::abs(c_tilde_term_ratio(2, 60) - 0.5) < 1e-3);
}

TEST_CASE("alpha0_nonexistence") {
  const double C = 0.2;
  SUBCASE("N=2 formula") {
    const auto r = alpha0_nonexistence(1.5, 3.0, 2, C);
    const double ct = c_tilde_series(2, C);
    CHECK(r.alpha0 == doctest::Approx(std::min({0.5 / ct, 1 / (2 * std::exp(1.0) * C), 4 * M_PI})).epsilon(1e-15));
    CHECK(r.report.verdict == Verdict::nonexistence_regime);
  }
  SUBCASE("a = b uses the full series term") {
    for (int N : {2, 3, 4}) {
      const double np = conjugate_exponent(N);
      const auto r = alpha0_nonexistence(np, np, N, C);
      CHECK(r.series_term == doctest::Approx(1 / (r.c_tilde * std::tgamma(double(N - 1)))).epsilon(1e-15));
    }
  }
  SUBCASE("non-increasing in b") {
    double prev = INFINITY;
    for (double b = 1.0; b < 50; b *= 1.5) {
      const double cur = alpha0_nonexistence(1.0, b, 2, C).alpha0;
      CHECK(cur <= prev);
      prev = cur;
    }
  }
  CHECK_THROWS_AS(alpha0_nonexistence(2.5, 1.0, 2, C), Error);
  CHECK_THROWS_AS(alpha0_nonexistence(1.0, 1.0, 2, -1.0), Error);
  CHECK(default_gn_constant(2, 0.1709) == doctest::Approx(std::sqrt(0.1709) / 2));
}

TEST_CASE("bgn_condition") {
  const double B = 0.17;
  const double threshold = 4.0 / (2.0 * B);
  CHECK_FALSE(bgn_condition(2.0, threshold, 2, B));
  CHECK(bgn_condition(2.0, std::nextafter(threshold, 100.0), 2, B));
  // alpha = 4 pi: any bgn above 1/(2 pi) makes b >= 2 sufficient
  for (double bgn : {1 / (2 * M_PI) + 1e-9, 0.1709, 0.3})
    for (double b : {2.0, 3.0, 10.0})
      CHECK(bgn_condition(4 * M_PI, b, 2, bgn));
  CHECK_THROWS_AS(bgn_condition(1.0, 1.0, 2, 0.0), Error);
}

TEST_CASE("bracket_alpha_star") {
  BracketOptions o;
  o.grid_points = 6;
  o.bisection_steps = 3;
  o.maximizer.restarts = 4;
  SUBCASE("a > N' certifies at the bottom of the grid") {
    const auto r = bracket_alpha_star(3.0, 2.0, 2, o);
    CHECK(r.alpha_high <= alpha_critical(2) / 6);
    CHECK(r.alpha_low < r.alpha_high);
    CHECK(r.samples.size() == 9);
  }
  SUBCASE("large b pulls alpha_high under N^2/(b B)") {
    const double B = maximize_gn(2).bgn_estimate;
    o.bgn = B;
    double prev = INFINITY;
    for (double b : {4.0, 8.0, 16.0}) {
      const auto r = bracket_alpha_star(2.0, b, 2, o);
      CHECK(r.alpha_high <= 4 / (b * B) + alpha_critical(2) / 6);
      CHECK(r.alpha_high <= prev);
      prev = r.alpha_high;
      CHECK(to_json(r)["alpha_high"].get<double>() == r.alpha_high);
    }
  }
  SUBCASE("a <= N': heuristic low edge sits above alpha_0") {
    const double B = maximize_gn(2).bgn_estimate;
    o.bgn = B;
    const auto r = bracket_alpha_star(2.0, 4.0, 2, o);
    const double a0 = alpha0_nonexistence(2.0, 4.0, 2, default_gn_constant(2, B)).alpha0;
    CHECK(r.alpha_low >= a0);
  }
}
