#include "doctest.h"

#include "mtlab/error.hpp"
#include "mtlab/radial.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace mtlab;

namespace {

// Nodes i*r_max/n with weights c/r_i^{N-1}: every node carries the same
// radial measure, so the discrete rearrangement is a pure sort.
GridPtr equal_measure_grid(int N, int n, double r_max) {
  std::vector<double> nodes(n), weights(n);
  double inv = 0.0;
  for (int i = 0; i < n; ++i) {
    nodes[i] = r_max * (i + 1) / n;
    inv += std::pow(nodes[i], 1 - N);
  }
  const double c = r_max / inv;
  for (int i = 0; i < n; ++i)
    weights[i] = c * std::pow(nodes[i], 1 - N);
  // absorb round-off so the weights sum to r_max
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double &w : weights)
    w *= r_max / total;
  return RadialGrid::from_nodes(N, nodes, weights, r_max);
}

double cubic(double r) { return r < 1 ? std::pow(1 - r, 3) : 0.0; }

} // namespace

TEST_CASE("sphere area and critical exponent") {
  CHECK(sphere_area(2) == doctest::Approx(2 * M_PI).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(4 * M_PI).epsilon(1e-15));
  CHECK(alpha_critical(2) == doctest::Approx(4 * M_PI).epsilon(1e-15));
  CHECK(alpha_critical(3) == doctest::Approx(3 * std::sqrt(4 * M_PI)).epsilon(1e-15));
}

TEST_CASE("build_grid invariants") {
  for (auto scheme : {GridScheme::composite_gauss, GridScheme::graded}) {
    for (int degree : {1, 2, 4}) {
      const auto g = build_grid(3, 7.5, 64, scheme, {degree, 50.0});
      REQUIRE(g->size() == 64);
      auto r = g->nodes();
      auto w = g->weights();
      CHECK(r.front() > 0);
      CHECK(r.back() == 7.5);
      for (std::size_t i = 1; i < r.size(); ++i)
        CHECK(r[i] > r[i - 1]);
      for (double x : w)
        CHECK(x > 0);
      CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 7.5) < 1e-12 * 7.5);
    }
  }
}

TEST_CASE("composite-gauss integrates constants and r") {
  const auto g = build_grid(2, 1.0, 64, GridScheme::composite_gauss);
  CHECK(std::abs(g->integrate([](double) { return 1.0; }) - 1.0) < 1e-12);
  CHECK(std::abs(g->integrate([](double r) { return r; }) - 0.5) < 1e-12);
}

TEST_CASE("graded panels widen outward") {
  const auto g = build_grid(2, 10.0, 256, GridScheme::graded);
  const auto &panels = g->panels();
  for (std::size_t k = 1; k < panels.size(); ++k) {
    const double prev = panels[k - 1].right - panels[k - 1].left;
    const double cur = panels[k].right - panels[k].left;
    CHECK(cur / prev >= 1.0 - 1e-12);
  }
  CHECK(panels.front().right - panels.front().left < 0.01);
}

TEST_CASE("build_grid rejects bad parameters") {
  CHECK_THROWS_AS(build_grid(1, 1.0, 64, GridScheme::graded), Error);
  CHECK_THROWS_AS(build_grid(2, 1.0, 8, GridScheme::graded), Error);
  CHECK_THROWS_AS(build_grid(2, -1.0, 64, GridScheme::graded), Error);
  CHECK_THROWS_AS(build_grid(2, 1.0, 66, GridScheme::graded), Error); // not a multiple of 4
  try {
    build_grid(2, 1.0, 8, GridScheme::composite_gauss);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::invalid_parameter);
  }
}

TEST_CASE("lp_norm_pow on the cubic bump") {
  const auto g = build_grid(2, 1.0, 128, GridScheme::composite_gauss);
  const auto u = RadialProfile::from_function(g, cubic);
  CHECK(lp_norm_pow(u, 2) == doctest::Approx(M_PI / 28).epsilon(1e-12));
  CHECK(lp_norm_pow(u, 4) == doctest::Approx(M_PI / 91).epsilon(1e-10));
  CHECK(lp_norm_pow(RadialProfile::zero(g), 3.5) == 0.0);
  CHECK_THROWS_AS(lp_norm_pow(u, 0.5), Error);
}

TEST_CASE("grad_norm_pow closed forms") {
  SUBCASE("N=2 cubic: 2 pi * 9 B(2,5) = 3 pi / 5") {
    const auto g = build_grid(2, 1.0, 64, GridScheme::composite_gauss);
    const auto u = RadialProfile::from_function(g, cubic);
    CHECK(grad_norm_pow(u) == doctest::Approx(3 * M_PI / 5).epsilon(1e-12));
  }
  SUBCASE("N=3 exponential: 4 pi Gamma(3)/3^3") {
    const auto g = build_grid(3, 40.0, 512, GridScheme::graded);
    const auto u = RadialProfile::from_function(g, [](double r) { return std::exp(-r); });
    const double exact = 4 * M_PI * 2.0 / 27.0;
    CHECK(std::abs(grad_norm_pow(u) - exact) < 1e-8 * exact);
  }
  SUBCASE("zero profile") {
    const auto g = build_grid(4, 3.0, 32, GridScheme::graded);
    CHECK(grad_norm_pow(RadialProfile::zero(g)) == 0.0);
  }
}

TEST_CASE("piecewise-linear node grids") {
  // u = 1 - r on [0,1] with nodes at k/8: slope -1, so int r |u'|^2 = 1/2.
  std::vector<double> nodes, weights;
  for (int k = 1; k <= 8; ++k) {
    nodes.push_back(k / 8.0);
    weights.push_back(k == 8 ? 1.0 / 16 : 1.0 / 8);
  }
  weights[0] += 1.0 / 16;
  const auto g = RadialGrid::from_nodes(2, nodes, weights, 1.0);
  std::vector<double> v;
  for (double r : nodes)
    v.push_back(1 - r);
  v[0] = 1 - 1.0 / 8;
  const RadialProfile u(g, v);
  // constant on [0, 1/8], slope -1 afterwards
  const double expected = 2 * M_PI * (1.0 - 1.0 / 64) / 2;
  CHECK(grad_norm_pow(u) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(u(0.05) == doctest::Approx(7.0 / 8));
  CHECK(u(0.3125) == doctest::Approx(1 - 0.3125));
  CHECK_THROWS_AS(RadialGrid::from_nodes(2, {0.5, 0.4}, {0.5, 0.5}, 1.0), Error);
  CHECK_THROWS_AS(RadialGrid::from_nodes(2, {0.5, 1.0}, {0.5, 0.6}, 1.0), Error);
}

TEST_CASE("profile interpolation reproduces polynomials inside panels") {
  const auto g = build_grid(2, 2.0, 32, GridScheme::composite_gauss);
  const auto u = RadialProfile::from_function(g, [](double r) { return 3 + r * r * (1 - r / 4); });
  for (double r : {0.0, 0.013, 0.77, 1.5, 1.999})
    CHECK(u(r) == doctest::Approx(3 + r * r * (1 - r / 4)).epsilon(1e-12));
  CHECK(u(2.5) == 0.0);
}

TEST_CASE("quadrature convergence on exp(-r)") {
  // degree-2 panels: Simpson-type composite rule, nominal order 4
  auto err = [](int n) {
    const auto g = build_grid(2, 20.0, n, GridScheme::composite_gauss, {2, 1.0});
    const auto u = RadialProfile::from_function(g, [](double r) { return std::exp(-r); });
    // 2 pi int_0^20 r e^{-2r} dr
    const double exact = 2 * M_PI * (0.25 - std::exp(-40.0) * (20.0 / 2 + 0.25));
    return std::abs(lp_norm_pow(u, 2) - exact);
  };
  double prev = err(256);
  for (int n : {512, 1024, 2048}) {
    const double e = err(n);
    CHECK(prev / e >= 16.0 * 0.85);
    prev = e;
  }
}

TEST_CASE("Hoelder consistency of computed norms") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto g = build_grid(3, 10.0, 128, GridScheme::graded);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(g->size());
    double level = 2 * unit(rng);
    for (double &x : v) {
      level *= 1 - 0.05 * unit(rng);
      x = level;
    }
    v.back() = 0;
    const RadialProfile u(g, v);
    const double p = 1 + 3 * unit(rng), s = p + 0.5 + 5 * unit(rng);
    const double theta = unit(rng);
    const double q = 1.0 / ((1 - theta) / p + theta / s);
    const double lhs = std::pow(lp_norm_pow(u, q), 1 / q);
    const double rhs = std::pow(std::pow(lp_norm_pow(u, p), 1 / p), 1 - theta) *
                       std::pow(std::pow(lp_norm_pow(u, s), 1 / s), theta);
    CHECK(lhs <= rhs * (1 + 1e-9));
  }
}

TEST_CASE("decreasing_rearrangement") {
  SUBCASE("monotone input is unchanged") {
    const auto g = build_grid(2, 5.0, 64, GridScheme::graded);
    const auto u = RadialProfile::from_function(g, [](double r) { return std::exp(-r * r); });
    const auto v = decreasing_rearrangement(u);
    CHECK(std::equal(u.values().begin(), u.values().end(), v.values().begin()));
  }
  SUBCASE("single bump on an equal-measure grid moves to the origin") {
    const auto g = equal_measure_grid(2, 32, 4.0);
    std::vector<double> vals(32, 0.0);
    vals[1] = 1.0;
    const RadialProfile u(g, vals);
    const auto v = decreasing_rearrangement(u);
    CHECK(v.values()[0] == 1.0);
    for (std::size_t i = 1; i < 32; ++i)
      CHECK(v.values()[i] == 0.0);
    for (double p : {1.0, 2.0, 3.7})
      CHECK(lp_norm_pow(v, p) == doctest::Approx(lp_norm_pow(u, p)).epsilon(1e-15));
  }
  SUBCASE("random profiles against the sort oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int N : {2, 3}) {
      const auto g = equal_measure_grid(N, 200, 6.0);
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> vals(200);
        for (double &x : vals)
          x = unit(rng);
        const RadialProfile u(g, vals);
        const auto v = decreasing_rearrangement(u);
        std::vector<double> oracle(vals);
        std::sort(oracle.begin(), oracle.end(), std::greater<>());
        for (std::size_t i = 0; i < oracle.size(); ++i)
          CHECK(v.values()[i] == doctest::Approx(oracle[i]).epsilon(1e-14));
        CHECK(v.is_non_increasing());
        for (double p : {1.0, 2.0, 5.0})
          CHECK(std::abs(lp_norm_pow(v, p) - lp_norm_pow(u, p)) <= 1e-10 * lp_norm_pow(u, p));
        CHECK(grad_norm_pow(v) <= grad_norm_pow(u) + 1e-10);
      }
    }
  }
  SUBCASE("general grids: monotone output, L1 kept, Lp not increased") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto g = build_grid(2, 8.0, 128, GridScheme::graded);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> vals(g->size());
      for (double &x : vals)
        x = unit(rng) * std::exp(-0.3 * unit(rng));
      const RadialProfile u(g, vals);
      const auto v = decreasing_rearrangement(u);
      CHECK(v.is_non_increasing());
      CHECK(lp_norm_pow(v, 1) == doctest::Approx(lp_norm_pow(u, 1)).epsilon(1e-12));
      CHECK(lp_norm_pow(v, 3) <= lp_norm_pow(u, 3) * (1 + 1e-12));
    }
  }
}

TEST_CASE("grid rescaling keeps exact scaling laws") {
  const auto g = build_grid(3, 10.0, 128, GridScheme::graded);
  const auto u = RadialProfile::from_function(g, [](double r) { return std::exp(-r); });
  const double s = 3.5;
  const auto v = u.with_grid(g->scaled(s));
  CHECK(lp_norm_pow(v, 2.5) == doctest::Approx(std::pow(s, 3) * lp_norm_pow(u, 2.5)).epsilon(1e-14));
  // ||grad||_N^N is dilation invariant
  CHECK(grad_norm_pow(v) == doctest::Approx(grad_norm_pow(u)).epsilon(1e-13));
  CHECK_THROWS_AS(g->scaled(1e250), Error);
}

TEST_CASE("profile CSV") {
  const auto g = build_grid(2, 1.0, 16, GridScheme::composite_gauss);
  const auto u = RadialProfile::from_function(g, cubic);
  std::ostringstream os;
  write_profile_csv(os, u);
  const std::string s = os.str();
  CHECK(s.rfind("r,u\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 17);
}

TEST_CASE("profiles reject negative values") {
  const auto g = build_grid(2, 1.0, 16, GridScheme::composite_gauss);
  std::vector<double> v(16, 0.1);
  v[3] = -1e-3;
  CHECK_THROWS_AS(RadialProfile(g, v), Error);
}
