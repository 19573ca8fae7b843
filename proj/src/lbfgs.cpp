#include "lbfgs.hpp"

#include "mtlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mtlab::detail {

namespace {

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

} // namespace

LbfgsResult minimize_box(const Objective &f, std::vector<double> x, const std::vector<double> &lower,
                         const std::vector<double> &upper, const LbfgsOptions &opts) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::clamp(x[i], lower[i], upper[i]);

  std::vector<double> g(n), g_new(n), p(n), x_new(n), free_g(n);
  double fx = f(x, g);
  std::deque<Pair> memory;
  std::vector<double> history{fx};

  auto active = [&](std::size_t i, const std::vector<double> &grad) {
    return (x[i] <= lower[i] && grad[i] > 0) || (x[i] >= upper[i] && grad[i] < 0);
  };

  LbfgsResult out;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    double pg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      free_g[i] = active(i, g) ? 0.0 : g[i];
      pg = std::max(pg, std::abs(free_g[i]));
    }
    out.projected_gradient = pg;
    if (pg < opts.gradient_tol)
      break;

    // two-loop recursion on the free gradient
    p = free_g;
    std::vector<double> alphas(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
      alphas[k] = memory[k].rho * dot(memory[k].s, p);
      for (std::size_t i = 0; i < n; ++i)
        p[i] -= alphas[k] * memory[k].y[i];
    }
    double gamma = 1.0;
    if (!memory.empty())
      gamma = dot(memory.back().s, memory.back().y) / dot(memory.back().y, memory.back().y);
    else
      gamma = 1.0 / std::sqrt(dot(free_g, free_g));
    for (double &v : p)
      v *= gamma;
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double beta = memory[k].rho * dot(memory[k].y, p);
      for (std::size_t i = 0; i < n; ++i)
        p[i] += (alphas[k] - beta) * memory[k].s[i];
    }
    for (std::size_t i = 0; i < n; ++i)
      p[i] = active(i, g) ? 0.0 : -p[i];
    if (dot(p, g) >= 0) {
      memory.clear();
      const double scale = 1.0 / std::sqrt(dot(free_g, free_g));
      for (std::size_t i = 0; i < n; ++i)
        p[i] = -free_g[i] * scale;
    }

    double step = 1.0, f_new = 0.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i)
        x_new[i] = std::clamp(x[i] + step * p[i], lower[i], upper[i]);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        decrease += g[i] * (x_new[i] - x[i]);
      if (decrease >= 0)
        continue;
      try {
        f_new = f(x_new, g_new);
      } catch (const Error &) {
        continue;
      }
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (memory.empty())
        break;
      memory.clear();
      continue;
    }

    Pair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = x_new[i] - x[i];
      pair.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-12 * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y))) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (int(memory.size()) > opts.memory)
        memory.pop_front();
    }
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    history.push_back(fx);
    const std::size_t w = opts.stall_window;
    if (history.size() > w && history[history.size() - 1 - w] - fx <= opts.stall_rel_tol * std::abs(fx)) {
      ++it;
      break;
    }
  }
  out.x = std::move(x);
  out.f = fx;
  out.iterations = it;
  return out;
}

} // namespace mtlab::detail
