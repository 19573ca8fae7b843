#pragma once

#include <functional>
#include <vector>

namespace mtlab::detail {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 2000;
  int stall_window = 25;
  double stall_rel_tol = 1e-9;
  double gradient_tol = 1e-8;
};

struct LbfgsResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  double projected_gradient = 0.0;
};

/// Returns f(x) and writes the gradient. Throwing mtlab::Error marks x as
/// outside the domain, the line search then backs off.
using Objective = std::function<double(const std::vector<double> &x, std::vector<double> &grad)>;

/// Minimizes f over the box [lower, upper] with limited-memory BFGS directions
/// restricted to the free variables and a projected backtracking line search.
LbfgsResult minimize_box(const Objective &f, std::vector<double> x, const std::vector<double> &lower,
                         const std::vector<double> &upper, const LbfgsOptions &opts);

} // namespace mtlab::detail
