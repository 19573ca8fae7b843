#include "quadrature.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace mtlab::detail {
namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double &p, double &dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  // endpoints: P_n'(+-1) = (+-1)^{n-1} n(n+1)/2
  if (std::abs(1.0 - x * x) < 1e-300)
    dp = (x > 0 ? 1.0 : (n % 2 ? 1.0 : -1.0)) * n * (n + 1) / 2.0;
  else
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// All roots of f in the open interval (-1, 1): sign scan, then bisection.
std::vector<double> roots(const std::function<double(double)> &f, int expected) {
  std::vector<double> out;
  if (expected <= 0)
    return out;
  const int samples = 400 * (expected + 1);
  double xa = -1.0, fa = f(-1.0 + 1e-15);
  for (int s = 1; s <= samples; ++s) {
    double xb = -1.0 + 2.0 * s / samples;
    if (s == samples)
      xb = 1.0 - 1e-15;
    const double fb = f(xb);
    if (fa == 0.0) {
      if (xa > -1.0)
        out.push_back(xa);
    } else if (fa * fb < 0.0) {
      double lo = xa, hi = xb, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    xa = xb;
    fa = fb;
  }
  if (int(out.size()) != expected)
    throw std::logic_error("quadrature: root isolation failed");
  return out;
}

// Interpolatory weights: integrate each Lagrange basis polynomial exactly.
std::vector<double> interpolatory_weights(const std::vector<double> &xs) {
  const Rule g = gauss_legendre(int(xs.size()) / 2 + 1);
  std::vector<double> w(xs.size(), 0.0);
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (std::size_t k = 0; k < g.x.size(); ++k)
      w[j] += g.w[k] * lagrange(xs, j, g.x[k]);
  return w;
}

} // namespace

Rule gauss_legendre(int m) {
  Rule r;
  r.x = roots([m](double x) { double p, dp; legendre(m, x, p, dp); return p; }, m);
  for (double &x : r.x) {
    // one Newton polish
    double p, dp;
    legendre(m, x, p, dp);
    x -= p / dp;
  }
  for (double x : r.x) {
    double p, dp;
    legendre(m, x, p, dp);
    r.w.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return r;
}

Rule gauss_lobatto(int m) {
  if (m < 2)
    throw std::invalid_argument("gauss_lobatto needs at least 2 points");
  Rule r;
  r.x.push_back(-1.0);
  const auto inner = roots([m](double x) { double p, dp; legendre(m - 1, x, p, dp); return dp; }, m - 2);
  r.x.insert(r.x.end(), inner.begin(), inner.end());
  r.x.push_back(1.0);
  r.w = interpolatory_weights(r.x);
  return r;
}

Rule radau_right(int m) {
  if (m < 1)
    throw std::invalid_argument("radau_right needs at least 1 point");
  Rule r;
  // left-Radau interior nodes are the roots of P_{m-1} + P_m; mirror them.
  const auto inner = roots(
      [m](double x) {
        double a, b, d;
        legendre(m - 1, -x, a, d);
        legendre(m, -x, b, d);
        return a + b;
      },
      m - 1);
  r.x = inner;
  r.x.push_back(1.0);
  r.w = interpolatory_weights(r.x);
  return r;
}

double lagrange(const std::vector<double> &xs, std::size_t j, double x) {
  double v = 1.0;
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (k != j)
      v *= (x - xs[k]) / (xs[j] - xs[k]);
  return v;
}

double lagrange_slope(const std::vector<double> &xs, std::size_t j, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k == j)
      continue;
    double term = 1.0 / (xs[j] - xs[k]);
    for (std::size_t l = 0; l < xs.size(); ++l)
      if (l != j && l != k)
        term *= (x - xs[l]) / (xs[j] - xs[l]);
    s += term;
  }
  return s;
}

} // namespace mtlab::detail
