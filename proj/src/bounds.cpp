#include "mtlab/bounds.hpp"

#include "mtlab/error.hpp"
#include "mtlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mtlab {

const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::attained_certified_numerically:
    return "attained-certified-numerically";
  case Verdict::no_verdict:
    return "no-verdict";
  case Verdict::nonexistence_regime:
    return "nonexistence-regime";
  }
  return "?";
}

const char *to_string(BoundKind k) {
  switch (k) {
  case BoundKind::universal_lower:
    return "universal-lower";
  case BoundKind::g_test:
    return "g-test";
  case BoundKind::alpha0:
    return "alpha0";
  case BoundKind::bgn_condition:
    return "bgn-condition";
  case BoundKind::alpha_star_bracket:
    return "alpha-star-bracket";
  }
  return "?";
}

nlohmann::json to_json(const BoundReport &r) {
  return {{"kind", to_string(r.kind)}, {"values", r.values}, {"verdict", to_string(r.verdict)}, {"formula", r.formula}};
}

namespace {

void check_alpha(double alpha, int N) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "N must be >= 2");
  if (!(alpha > 0) || alpha > alpha_critical(N) * (1 + 1e-12))
    throw Error(ErrorCode::invalid_parameter, "alpha must lie in (0, alpha_N]");
}

void check_positive(double x, const char *what) {
  if (!(x > 0) || !std::isfinite(x))
    throw Error(ErrorCode::invalid_parameter, std::string(what) + " must be positive");
}

} // namespace

double universal_lower_bound(double alpha, int N) {
  check_alpha(alpha, N);
  return std::pow(alpha, N - 1) / std::tgamma(double(N));
}

BoundReport universal_lower_report(double alpha, int N) {
  return {BoundKind::universal_lower,
          {{"N", N}, {"alpha", alpha}, {"lower_bound", universal_lower_bound(alpha, N)}},
          Verdict::no_verdict,
          "universal-lower:alpha^(N-1)/(N-1)!"};
}

Verdict attainment_test(double best_value, double alpha, int N, double margin) {
  return best_value > universal_lower_bound(alpha, N) + margin ? Verdict::attained_certified_numerically
                                                               : Verdict::no_verdict;
}

double g_function(double t, double alpha, double a, double b, int N, double bgn) {
  if (t <= 0)
    return 0.0;
  const double np = conjugate_exponent(N);
  const double lead = std::pow(t, N / b);
  return lead + alpha / N * bgn * lead * std::pow(std::max(0.0, 1 - t), np / a);
}

GTestResult g_function_test(double alpha, double a, double b, int N, double bgn, double margin) {
  check_alpha(alpha, N);
  check_positive(a, "a");
  check_positive(b, "b");
  if (!(bgn > 0))
    throw Error(ErrorCode::invalid_parameter, "bgn must be positive");
  auto g = [&](double t) { return g_function(t, alpha, a, b, N, bgn); };
  constexpr int samples = 10000;
  int best = samples;
  double best_g = g(1.0);
  for (int k = 0; k < samples; ++k) {
    const double v = g(double(k) / samples);
    if (v > best_g) {
      best_g = v;
      best = k;
    }
  }
  double t_best = double(best) / samples;
  if (best > 0 && best < samples) {
    // golden section on the bracketing cells
    double lo = double(best - 1) / samples, hi = double(best + 1) / samples;
    const double r = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + r * (hi - lo);
        f2 = g(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - r * (hi - lo);
        f1 = g(x1);
      }
    }
    const double t_mid = 0.5 * (lo + hi);
    if (g(t_mid) > best_g) {
      best_g = g(t_mid);
      t_best = t_mid;
    }
  }
  GTestResult out;
  out.max_g = best_g;
  out.argmax_t = t_best;
  const double np = conjugate_exponent(N);
  if (std::abs(a - np) <= 1e-12 * np)
    out.g_prime_one = N / b - alpha * bgn / N;
  else
    out.g_prime_one = a < np ? N / b : -INFINITY;
  out.verdict = best_g > 1 + margin ? Verdict::attained_certified_numerically : Verdict::no_verdict;
  out.report = {BoundKind::g_test,
                {{"N", N},
                 {"alpha", alpha},
                 {"a", a},
                 {"b", b},
                 {"bgn", bgn},
                 {"max_g", best_g},
                 {"argmax_t", t_best},
                 {"g_prime_one", std::isfinite(out.g_prime_one) ? nlohmann::json(out.g_prime_one) : nlohmann::json("-inf")},
                 {"certified_value", universal_lower_bound(alpha, N) * best_g}},
                out.verdict,
                "g-test:gn-family t^(N/b)+(alpha/N)B t^(N/b)(1-t)^(N'/a)"};
  return out;
}

namespace {

double log_c_tilde_term(int N, int j) {
  const double m = j + N;
  return m * std::log(m) - std::lgamma(m) - j * (std::log(2.0) + 1.0);
}

} // namespace

double c_tilde_term_ratio(int N, int j) {
  const double m = j + N;
  return 0.5 * std::exp((m + 1) * std::log1p(1 / m) - 1);
}

double c_tilde_partial(int N, double gn_c, int terms) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "N must be >= 2");
  check_positive(gn_c, "interpolation constant C");
  // accumulate relative to the first term to stay in range
  const double l0 = log_c_tilde_term(N, 0);
  double sum = 0.0;
  for (int j = terms - 1; j >= 0; --j)
    sum += std::exp(log_c_tilde_term(N, j) - l0);
  return std::pow(gn_c, N) * std::exp(l0) * sum;
}

double c_tilde_series(int N, double gn_c, double rel_tol, int max_terms) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "N must be >= 2");
  check_positive(gn_c, "interpolation constant C");
  const double l0 = log_c_tilde_term(N, 0);
  double sum = 0.0;
  int j = 0;
  for (; j < max_terms; ++j) {
    const double term = std::exp(log_c_tilde_term(N, j) - l0);
    sum += term;
    if (term < rel_tol * sum)
      break;
  }
  if (j == max_terms)
    throw Error(ErrorCode::series_overflow, "C~ series did not converge");
  return c_tilde_partial(N, gn_c, j + 1);
}

double default_gn_constant(int N, double bgn) {
  check_positive(bgn, "bgn");
  return std::pow(bgn, 1.0 / N) / N;
}

Alpha0Result alpha0_nonexistence(double a, double b, int N, double gn_c) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "N must be >= 2");
  check_positive(a, "a");
  check_positive(b, "b");
  check_positive(gn_c, "interpolation constant C");
  const double np = conjugate_exponent(N);
  if (a > np * (1 + 1e-12))
    throw Error(ErrorCode::invalid_parameter, "alpha_0 needs a <= N'");
  Alpha0Result r;
  r.c_tilde = c_tilde_series(N, gn_c);
  r.series_term = std::min(a / b, 1.0) / (r.c_tilde * std::tgamma(double(N - 1)));
  r.interpolation_term = 1.0 / (2 * std::exp(1.0) * gn_c);
  r.alpha0 = std::min({r.series_term, r.interpolation_term, alpha_critical(N)});
  r.report = {BoundKind::alpha0,
              {{"N", N},
               {"a", a},
               {"b", b},
               {"gn_c", gn_c},
               {"c_tilde", r.c_tilde},
               {"series_term", r.series_term},
               {"interpolation_term", r.interpolation_term},
               {"alpha0", r.alpha0}},
              Verdict::nonexistence_regime,
              "alpha0:min{min(a/b,1)/(C~(N-2)!),1/(2eC),alpha_N}"};
  return r;
}

bool bgn_condition(double alpha, double b, int N, double bgn) {
  if (!(bgn > 0))
    throw Error(ErrorCode::invalid_parameter, "bgn must be positive");
  return b > double(N) * N / (alpha * bgn);
}

BoundReport bgn_condition_report(double alpha, double b, int N, double bgn) {
  const bool holds = bgn_condition(alpha, b, N, bgn);
  return {BoundKind::bgn_condition,
          {{"N", N}, {"alpha", alpha}, {"b", b}, {"bgn", bgn}, {"threshold", double(N) * N / (alpha * bgn)}, {"holds", holds}},
          Verdict::no_verdict,
          "bgn-condition:b>N^2/(alpha*B)"};
}

AlphaStarBracket bracket_alpha_star(double a, double b, int N, const BracketOptions &opts) {
  if (opts.grid_points < 2)
    throw Error(ErrorCode::invalid_parameter, "alpha grid needs at least 2 points");
  check_positive(a, "a");
  check_positive(b, "b");
  const double top = alpha_critical(N);
  auto inner = opts.maximizer;
  inner.threads = 1;

  auto sample = [&](double alpha) {
    BracketSample s;
    s.alpha = alpha;
    const auto p = MTParams::make(N, alpha, a, b);
    if (p.at_critical() && !(b < N)) {
      // supremum infinite or on the boundary case; no certification attempted
      return s;
    }
    const auto r = maximize_d(p, inner);
    s.margin = r.margin;
    if (r.exceeds_lower_bound) {
      s.certified = true;
      s.certified_by = "maximize-d";
    } else if (opts.bgn && g_function_test(alpha, a, b, N, *opts.bgn).verdict == Verdict::attained_certified_numerically) {
      s.certified = true;
      s.certified_by = "g-test";
    }
    return s;
  };

  std::vector<BracketSample> grid(opts.grid_points);
  parallel_for(grid.size(), resolve_threads(opts.threads),
               [&](std::size_t k) { grid[k] = sample(top * double(k + 1) / opts.grid_points); });

  AlphaStarBracket out;
  auto first = std::find_if(grid.begin(), grid.end(), [](const BracketSample &s) { return s.certified; });
  if (first == grid.end()) {
    std::ostringstream os;
    os << "no alpha in (0, alpha_N] certified on a " << opts.grid_points << "-point grid";
    throw Error(ErrorCode::bracket_not_found, os.str());
  }
  out.alpha_high = first->alpha;
  out.alpha_low = first == grid.begin() ? 0.0 : std::prev(first)->alpha;
  out.samples = grid;
  for (int it = 0; it < opts.bisection_steps; ++it) {
    const auto s = sample(0.5 * (out.alpha_low + out.alpha_high));
    out.samples.push_back(s);
    (s.certified ? out.alpha_high : out.alpha_low) = s.alpha;
  }
  std::sort(out.samples.begin(), out.samples.end(),
            [](const BracketSample &x, const BracketSample &y) { return x.alpha < y.alpha; });
  out.report = {BoundKind::alpha_star_bracket,
                {{"N", N}, {"a", a}, {"b", b}, {"alpha_low", out.alpha_low}, {"alpha_high", out.alpha_high}},
                Verdict::attained_certified_numerically,
                "alpha-star-bracket:maximize-d/g-test"};
  return out;
}

nlohmann::json to_json(const AlphaStarBracket &r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto &s : r.samples)
    samples.push_back({{"alpha", s.alpha}, {"margin", s.margin}, {"certified", s.certified}, {"certified_by", s.certified_by}});
  auto j = to_json(r.report);
  j["alpha_low"] = r.alpha_low;
  j["alpha_high"] = r.alpha_high;
  j["alpha_low_semantics"] = "heuristic";
  j["alpha_high_semantics"] = "certified upper bound for alpha_*";
  j["samples"] = samples;
  return j;
}

} // namespace mtlab
