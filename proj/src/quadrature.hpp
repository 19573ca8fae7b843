#pragma once

#include <vector>

namespace mtlab::detail {

struct Rule {
  std::vector<double> x; // nodes on [-1, 1], increasing
  std::vector<double> w;
};

Rule gauss_legendre(int m);
/// m >= 2 points including both endpoints.
Rule gauss_lobatto(int m);
/// m >= 1 points including +1 but not -1.
Rule radau_right(int m);

/// Value and derivative of the Lagrange basis on nodes xs at x.
double lagrange(const std::vector<double> &xs, std::size_t j, double x);
double lagrange_slope(const std::vector<double> &xs, std::size_t j, double x);

} // namespace mtlab::detail
