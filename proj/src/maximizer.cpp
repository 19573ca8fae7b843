#include "mtlab/maximizer.hpp"

#include "lbfgs.hpp"
#include "mtlab/error.hpp"
#include "mtlab/parallel.hpp"
#include "mtlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mtlab {

const char *to_string(Mode mode) {
  switch (mode) {
  case Mode::interior:
    return "interior";
  case Mode::near_vanishing:
    return "near-vanishing";
  case Mode::near_concentration:
    return "near-concentration";
  }
  return "?";
}

namespace {

// Dilation exponent s = log t is kept where the materialized grid stays representable.
constexpr double s_limit = 230.0;

double uniform01(std::mt19937_64 &rng) { return double(rng() >> 11) * 0x1.0p-53; }

std::vector<double> suffix_values(const std::vector<double> &d) {
  std::vector<double> v(d.size());
  double acc = 0.0;
  for (std::size_t k = d.size(); k-- > 0;) {
    acc += d[k];
    v[k] = acc;
  }
  return v;
}

std::vector<double> decrements(std::span<const double> v) {
  std::vector<double> d(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    d[k] = std::max(0.0, v[k] - (k + 1 < v.size() ? v[k + 1] : 0.0));
  return d;
}

// F(v, s) = int Phi_N(alpha |beta_*(t) v_t|^{N'}) with t = e^s, evaluated on the base grid.
class ScaledObjective {
public:
  ScaledObjective(GridPtr grid, const MTParams &p, const SeriesControl &ctl)
      : grid_(std::move(grid)), p_(p), ctl_(ctl), omega_(sphere_area(p.N)), np_(p.conjugate()) {}

  struct Parts {
    double value, beta, grad_pow, mass_pow;
  };

  Parts value(const std::vector<double> &v, double s) const {
    const int N = p_.N;
    const auto mu = grid_->measure();
    const double G = omega_ * grid_->slope_integral(v, N);
    double L = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] > 0)
        L += mu[i] * std::pow(v[i], N);
    L *= omega_;
    const double t = std::exp(s);
    const double beta = solve_beta_star(G, L, t, p_);
    const double c = p_.alpha * std::pow(beta, np_) * std::exp(s / (N - 1));
    double F = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] > 0)
        F += mu[i] * phi(c * std::pow(v[i], np_), N, ctl_);
    return {omega_ * std::exp(-s) * F, beta, G, L};
  }

  // Returns F and its gradient with respect to (v, s).
  double gradient(const std::vector<double> &v, double s, std::vector<double> &gv, double &gs) const {
    const int N = p_.N;
    const double a = p_.a, b = p_.b;
    const auto mu = grid_->measure();
    const auto parts = value(v, s);
    const double beta = parts.beta, G = parts.grad_pow, L = parts.mass_pow;
    const double t = std::exp(s);
    const double scale = omega_ * std::exp(-s);
    const double c = p_.alpha * std::pow(beta, np_) * std::exp(s / (N - 1));

    gv.assign(v.size(), 0.0);
    double sum_dx = 0.0, sum_phi = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0))
        continue;
      const double x = c * std::pow(v[i], np_);
      const double dphi = exp_tail(x, N - 2, ctl_);
      sum_dx += mu[i] * dphi * x;
      sum_phi += mu[i] * phi(x, N, ctl_);
      gv[i] = scale * mu[i] * dphi * np_ * c * std::pow(v[i], np_ - 1);
    }
    const double F_beta = np_ / beta * scale * sum_dx;
    const double tg = std::pow(t * G, a / N);
    const double lb = std::pow(L, b / N);
    const double A_beta = a * std::pow(beta, a - 1) * tg + b * std::pow(beta, b - 1) * lb;
    const double dbeta_dG = G > 0 ? -std::pow(beta, a) * (a / N) * tg / G / A_beta : 0.0;
    const double dbeta_dL = -std::pow(beta, b) * (b / N) * lb / L / A_beta;

    std::vector<double> dG(v.size(), 0.0);
    grid_->slope_integral_gradient(v, N, dG);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double dL = v[i] > 0 ? omega_ * N * mu[i] * std::pow(v[i], N - 1) : 0.0;
      gv[i] += F_beta * (dbeta_dG * omega_ * dG[i] + dbeta_dL * dL);
    }
    const double t_dbeta_dt = -std::pow(beta, a) * (a / N) * tg / A_beta;
    gs = scale * (-sum_phi + sum_dx / (N - 1)) + F_beta * t_dbeta_dt;
    return parts.value;
  }

  const GridPtr &grid() const { return grid_; }

private:
  GridPtr grid_;
  MTParams p_;
  SeriesControl ctl_;
  double omega_, np_;
};

struct Candidate {
  std::string family;
  std::vector<double> v;
  double s;
};

RadialProfile default_gn_shape(const GridPtr &grid) {
  return RadialProfile::from_function(grid, [](double r) { return 1.0 / std::cosh(r); });
}

Candidate make_candidate(int index, std::mt19937_64 &rng, const GridPtr &grid, const MTParams &p,
                         const RadialProfile &gn_shape) {
  const int N = p.N;
  const double r_max = grid->r_max();
  auto sample = [&](auto f) {
    const auto u = RadialProfile::from_function(grid, f);
    return std::vector<double>(u.values().begin(), u.values().end());
  };
  switch (index % 4) {
  case 0: {
    const double sigma = std::exp(std::log(0.3) + uniform01(rng) * std::log(30.0));
    const double q = 1.0 + 2.0 * uniform01(rng);
    return {"bump", sample([=](double r) { return std::exp(-std::pow(r / sigma, q)); }), -6.0 + 12.0 * uniform01(rng)};
  }
  case 1: {
    const double sigma = 0.5 + 2.0 * uniform01(rng);
    const double s = index == 1 ? -s_limit * 0.9 : -10.0 - 190.0 * uniform01(rng);
    return {"vanishing", sample([=](double r) { return std::exp(-r / sigma); }), s};
  }
  case 2: {
    const double R = r_max / 2;
    const double rho = R * std::pow(10.0, -(1.0 + 5.0 * uniform01(rng)));
    return {"concentration",
            sample([=](double r) { return r <= rho ? 1.0 : r >= R ? 0.0 : std::log(R / r) / std::log(R / rho); }),
            -2.0 + 8.0 * uniform01(rng)};
  }
  default: {
    // W_t = c V(lambda x), lambda = t^{-1/b} (1-t)^{1/a}; the amplitude is restored by beta_*
    const double logit = -8.0 + 16.0 * uniform01(rng);
    const double t = 1.0 / (1.0 + std::exp(-logit));
    const double log_lambda = -std::log(t) / p.b + std::log1p(-t) / p.a;
    const auto V = gn_shape.resampled(grid);
    return {"gn-family", std::vector<double>(V.values().begin(), V.values().end()),
            std::clamp(N * log_lambda, -s_limit, s_limit)};
  }
  }
}

struct RestartOutcome {
  RestartRecord record;
  std::vector<double> v;
  double s = 0.0;
};

} // namespace

Mode diagnose_mode(double grad_norm, double mass_norm, const MTParams &p, const ModeThresholds &th) {
  if (std::pow(mass_norm, p.b) > 1 - th.eps_vanishing)
    return Mode::near_vanishing;
  if (std::pow(grad_norm, p.a) > 1 - th.eps_concentration)
    return Mode::near_concentration;
  return Mode::interior;
}

Mode diagnose_mode(const MaximizerReport &r, const ModeThresholds &th) {
  return diagnose_mode(r.grad_norm, r.mass_norm, r.params, th);
}

std::vector<double> functional_gradient(const RadialProfile &u, const MTParams &p, const SeriesControl &ctl) {
  if (u.dimension() != p.N)
    throw Error(ErrorCode::invalid_parameter, "profile dimension does not match parameters");
  const int N = p.N;
  const double np = p.conjugate(), omega = sphere_area(N);
  const auto mu = u.grid().measure();
  const auto v = u.values();
  std::vector<double> g(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0)
      g[i] = omega * mu[i] * exp_tail(p.alpha * std::pow(v[i], np), N - 2, ctl) * p.alpha * np *
             std::pow(v[i], np - 1);
  return g;
}

MaximizerReport maximize_d(const MTParams &p, const MaximizerOptions &opts) {
  if (p.at_critical() && !(p.b < p.N || opts.allow_critical))
    throw Error(ErrorCode::invalid_parameter, "alpha = alpha_N needs b < N (or the critical override)");
  if (opts.restarts < 1)
    throw Error(ErrorCode::invalid_parameter, "restarts must be >= 1");
  opts.series.validate(p.N);
  const auto grid = build_grid(p.N, opts.r_max, opts.n_nodes, opts.scheme, opts.grid);
  const ScaledObjective objective(grid, p, opts.series);
  const RadialProfile gn_shape = opts.gn_profile ? *opts.gn_profile : default_gn_shape(grid);

  detail::LbfgsOptions lopts;
  lopts.max_iterations = opts.max_iterations;
  lopts.stall_window = opts.stall_window;
  lopts.stall_rel_tol = opts.stall_rel_tol;
  lopts.gradient_tol = opts.gradient_tol;

  const std::size_t n = grid->size();
  std::vector<RestartOutcome> outcomes(opts.restarts);
  parallel_for(outcomes.size(), resolve_threads(opts.threads), [&](std::size_t k) {
    auto &out = outcomes[k];
    out.record.index = int(k);
    out.record.seed = derive_seed(opts.seed, k);
    std::mt19937_64 rng(out.record.seed);
    auto cand = make_candidate(int(k), rng, grid, p, gn_shape);
    out.record.family = cand.family;
    try {
      // monotone, then unit L^N mass so the decrements start at a sane scale
      cand.v.back() = 0.0;
      auto v0 = decreasing_rearrangement(RadialProfile(grid, cand.v));
      const double mass = lp_norm_pow(v0, p.N);
      if (!(mass > 0))
        throw Error(ErrorCode::degenerate_profile, "seed vanishes on the grid");
      v0 = v0.scaled_by(std::pow(mass, -1.0 / p.N));
      const auto parts = objective.value(std::vector<double>(v0.values().begin(), v0.values().end()), cand.s);
      if (p.at_critical() &&
          std::pow(std::exp(cand.s) * parts.grad_pow, p.a / p.N) * std::pow(parts.beta, p.a) > opts.concentration_guard)
        throw Error(ErrorCode::degenerate_profile, "seed rejected by the concentration guard");
      out.record.initial_value = parts.value;

      std::vector<double> x = decrements(v0.values());
      x.push_back(cand.s);
      std::vector<double> lower(n + 1, 0.0), upper(n + 1, INFINITY);
      // u(r_max) = 0: a jump at the truncation radius would cost no gradient
      upper[n - 1] = 0.0;
      lower[n] = -s_limit;
      upper[n] = s_limit;
      std::vector<double> gv;
      auto f = [&](const std::vector<double> &xx, std::vector<double> &g) {
        const std::vector<double> d(xx.begin(), xx.end() - 1);
        double gs = 0.0;
        const double F = objective.gradient(suffix_values(d), xx.back(), gv, gs);
        // chain rule through v_i = sum_{k >= i} d_k
        g.assign(xx.size(), 0.0);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += gv[i];
          g[i] = -acc;
        }
        g[n] = -gs;
        return -F;
      };
      auto res = detail::minimize_box(f, std::move(x), lower, upper, lopts);
      out.s = res.x.back();
      res.x.pop_back();
      out.v = suffix_values(res.x);
      out.record.value = -res.f;
      out.record.iterations = res.iterations;
      if (out.record.initial_value > out.record.value) {
        // never report below the seed
        out.v.assign(v0.values().begin(), v0.values().end());
        out.s = cand.s;
        out.record.value = out.record.initial_value;
      }
    } catch (const Error &e) {
      out.record.failed = true;
      out.record.message = std::string(to_string(e.code())) + ": " + e.what();
    }
  });

  int best = -1;
  for (std::size_t k = 0; k < outcomes.size(); ++k)
    if (!outcomes[k].record.failed && (best < 0 || outcomes[k].record.value > outcomes[best].record.value))
      best = int(k);
  if (best < 0) {
    for (const auto &o : outcomes)
      if (o.record.message.rfind("series-overflow", 0) == 0)
        throw Error(ErrorCode::series_overflow, "every restart overflowed: " + o.record.message);
    throw Error(ErrorCode::degenerate_profile, "every restart failed: " + outcomes.front().record.message);
  }

  const auto &win = outcomes[best];
  const double t = std::exp(win.s);
  auto profile = ScalingState::make(RadialProfile(grid, win.v), t, p).profile();
  MaximizerReport r{.params = p, .best_value = mt_integral(profile, p, opts.series), .best_profile = profile};
  r.grad_norm = std::pow(grad_norm_pow(profile), 1.0 / p.N);
  r.mass_norm = std::pow(lp_norm_pow(profile, p.N), 1.0 / p.N);
  r.lower_bound = std::pow(p.alpha, p.N - 1) / std::tgamma(double(p.N));
  r.margin = r.best_value - r.lower_bound;
  r.exceeds_lower_bound = r.margin > opts.certify_margin;
  r.mode = diagnose_mode(r.grad_norm, r.mass_norm, p, opts.thresholds);
  r.iterations = win.record.iterations;
  for (const auto &o : outcomes)
    r.total_iterations += o.record.iterations;
  r.restarts = opts.restarts;
  r.seed = opts.seed;
  r.dilation = t;
  r.best_family = win.record.family;
  r.no_progress = r.best_value < r.lower_bound - 1e-6;
  r.r_max = opts.r_max;
  r.n_nodes = opts.n_nodes;
  for (auto &o : outcomes)
    r.runs.push_back(std::move(o.record));
  return r;
}

// ---------------------------------------------------------------------------

double gn_ratio(const RadialProfile &v) {
  const int N = v.dimension();
  const double np = conjugate_exponent(N);
  const double G = grad_norm_pow(v), L = lp_norm_pow(v, N);
  if (!(G > 0) || !(L > 0))
    throw Error(ErrorCode::degenerate_profile, "ratio needs nonzero norms");
  return lp_norm_pow(v, N * np) / (L * std::pow(G, np - 1));
}

std::vector<double> gn_log_ratio_gradient(const RadialProfile &v) {
  const int N = v.dimension();
  const double np = conjugate_exponent(N), omega = sphere_area(N);
  const auto mu = v.grid().measure();
  const auto u = v.values();
  const double G = grad_norm_pow(v), L = lp_norm_pow(v, N), P = lp_norm_pow(v, N * np);
  if (!(G > 0) || !(L > 0))
    throw Error(ErrorCode::degenerate_profile, "ratio needs nonzero norms");
  std::vector<double> g(u.size(), 0.0), dG(u.size(), 0.0);
  v.grid().slope_integral_gradient(u, N, dG);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double dP = 0.0, dL = 0.0;
    if (u[i] > 0) {
      dP = omega * mu[i] * N * np * std::pow(u[i], N * np - 1);
      dL = omega * mu[i] * N * std::pow(u[i], N - 1);
    }
    g[i] = dP / P - dL / L - (np - 1) * omega * dG[i] / G;
  }
  return g;
}

GNReport maximize_gn(int N, const GNOptions &opts) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "N must be >= 2");
  const auto grid = build_grid(N, opts.r_max, opts.n_nodes, opts.scheme, opts.grid);
  const std::size_t n = grid->size();
  const std::vector<std::function<double(double)>> seeds = {
      [](double r) { return 1.0 / std::cosh(r); },
      [](double r) { return std::exp(-r * r / 2); },
      [](double r) { return std::exp(-r); },
      [](double r) { return std::pow(1 + r * r, -2.0); },
  };
  detail::LbfgsOptions lopts;
  lopts.max_iterations = opts.max_iterations;
  lopts.stall_window = 50;
  lopts.stall_rel_tol = 1e-13;
  lopts.gradient_tol = 0.0;

  struct Outcome {
    std::vector<double> v;
    double value = -INFINITY;
    double residual = INFINITY;
    int iterations = 0;
  };
  std::vector<Outcome> outcomes(seeds.size());
  parallel_for(seeds.size(), resolve_threads(opts.threads), [&](std::size_t k) {
    const auto v0 = decreasing_rearrangement(RadialProfile::from_function(grid, seeds[k]));
    auto f = [&](const std::vector<double> &d, std::vector<double> &g) {
      const RadialProfile v(grid, suffix_values(d));
      const auto gv = gn_log_ratio_gradient(v);
      g.assign(n, 0.0);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += gv[i];
        g[i] = -acc;
      }
      return -std::log(gn_ratio(v));
    };
    std::vector<double> upper(n, INFINITY);
    upper[n - 1] = 0.0;
    auto res = detail::minimize_box(f, decrements(v0.values()), std::vector<double>(n, 0.0), upper, lopts);
    auto &out = outcomes[k];
    out.v = suffix_values(res.x);
    out.value = -res.f;
    out.iterations = res.iterations;
    out.residual = res.projected_gradient * *std::max_element(out.v.begin(), out.v.end());
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < outcomes.size(); ++k)
    if (outcomes[k].value > outcomes[best].value)
      best = k;
  const RadialProfile raw(grid, outcomes[best].v);
  GNReport r{N, gn_ratio(raw), normalize_unit_norms(raw)};
  r.residual = outcomes[best].residual;
  r.low_accuracy = r.residual > opts.residual_tol;
  r.iterations = outcomes[best].iterations;
  return r;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const MTParams &p) { return {{"N", p.N}, {"alpha", p.alpha}, {"a", p.a}, {"b", p.b}}; }

nlohmann::json to_json(const MaximizerReport &r) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto &run : r.runs) {
    nlohmann::json j = {{"index", run.index},          {"family", run.family}, {"seed", run.seed},
                        {"initial_value", run.initial_value}, {"value", run.value},   {"iterations", run.iterations},
                        {"failed", run.failed}};
    if (run.failed)
      j["message"] = run.message;
    runs.push_back(j);
  }
  return {{"params", to_json(r.params)},
          {"best_value", r.best_value},
          {"lower_bound", r.lower_bound},
          {"margin", r.margin},
          {"exceeds_lower_bound", r.exceeds_lower_bound},
          {"norm_split", {{"grad_norm", r.grad_norm}, {"mass_norm", r.mass_norm}}},
          {"mode", to_string(r.mode)},
          {"iterations", r.iterations},
          {"total_iterations", r.total_iterations},
          {"restarts", r.restarts},
          {"seed", r.seed},
          {"dilation", r.dilation},
          {"best_family", r.best_family},
          {"no_progress", r.no_progress},
          {"r_max", r.r_max},
          {"n_nodes", r.n_nodes},
          {"runs", runs}};
}

nlohmann::json to_json(const GNReport &r) {
  return {{"N", r.N},
          {"bgn_estimate", r.bgn_estimate},
          {"residual", r.residual},
          {"low_accuracy", r.low_accuracy},
          {"iterations", r.iterations}};
}

} // namespace mtlab
