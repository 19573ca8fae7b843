#pragma once

#include "mtlab/maximizer.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mtlab {

enum class Verdict { attained_certified_numerically, no_verdict, nonexistence_regime };
const char *to_string(Verdict v);

enum class BoundKind { universal_lower, g_test, alpha0, bgn_condition, alpha_star_bracket };
const char *to_string(BoundKind k);

struct BoundReport {
  BoundKind kind = BoundKind::universal_lower;
  nlohmann::json values = nlohmann::json::object();
  Verdict verdict = Verdict::no_verdict;
  std::string formula;
};

nlohmann::json to_json(const BoundReport &r);

/// alpha^{N-1} / (N-1)!
double universal_lower_bound(double alpha, int N);
BoundReport universal_lower_report(double alpha, int N);

/// Certified iff best_value > universal_lower_bound + margin. Numerics never certify equality.
Verdict attainment_test(double best_value, double alpha, int N, double margin);

/// g(t) = t^{N/b} + (alpha/N) B t^{N/b} (1-t)^{N'/a}
double g_function(double t, double alpha, double a, double b, int N, double bgn);

struct GTestResult {
  double max_g = 0.0;
  double argmax_t = 1.0;
  /// g'(1^-): N/b - alpha B/N at a = N', N/b for a < N', -infinity for a > N'
  double g_prime_one = 0.0;
  Verdict verdict = Verdict::no_verdict;
  BoundReport report;
};

/// Scan of g on [0, 1] (10^4 samples, golden-section refinement at the best one).
/// max g > 1 + margin certifies the supremum exceeds the lower bound, provided bgn is
/// the ratio of an actual profile.
GTestResult g_function_test(double alpha, double a, double b, int N, double bgn, double margin = 1e-9);

/// C~ = C^N sum_{j>=0} (j+N)^{j+N} / (j+N-1)! (2e)^{-j}, truncated once a term drops below rel_tol * sum.
double c_tilde_series(int N, double gn_c, double rel_tol = 1e-16, int max_terms = 100000);
/// The same sum cut after exactly `terms` terms.
double c_tilde_partial(int N, double gn_c, int terms);
/// t_{j+1} / t_j for the summand above.
double c_tilde_term_ratio(int N, int j);

/// C with ||v||_{N'j}^{N'j} <= C^j j^j ||v||_N^N ||grad v||_N^{N'j-N} from the j = N case: B^{1/N} / N.
double default_gn_constant(int N, double bgn);

struct Alpha0Result {
  double alpha0 = 0.0;
  double series_term = 0.0;   // min{a/b, 1} / (C~ (N-2)!)
  double interpolation_term = 0.0; // 1 / (2 e C)
  double c_tilde = 0.0;
  BoundReport report;
};

/// alpha_0 = min{ min{a/b,1} / (C~ (N-2)!), 1/(2eC), alpha_N } for a <= N'.
Alpha0Result alpha0_nonexistence(double a, double b, int N, double gn_c);

/// b > N^2 / (alpha bgn), strictly.
bool bgn_condition(double alpha, double b, int N, double bgn);
BoundReport bgn_condition_report(double alpha, double b, int N, double bgn);

struct BracketOptions {
  int grid_points = 12;
  int bisection_steps = 6;
  MaximizerOptions maximizer{};
  /// ratio of an actual profile; enables g-test certification alongside maximize_d
  std::optional<double> bgn;
  int threads = 0;
};

struct BracketSample {
  double alpha = 0.0;
  double margin = 0.0;
  bool certified = false;
  std::string certified_by;
};

struct AlphaStarBracket {
  /// heuristic: largest uncertified alpha below alpha_high (0 if none)
  double alpha_low = 0.0;
  /// certified: smallest alpha with a certified verdict
  double alpha_high = 0.0;
  std::vector<BracketSample> samples;
  BoundReport report;
};

/// One-sided bracket of alpha_* = inf{alpha : D > alpha^{N-1}/(N-1)!} on a uniform alpha grid
/// over (0, alpha_N], refined by bisection. Throws bracket_not_found when nothing certifies.
AlphaStarBracket bracket_alpha_star(double a, double b, int N, const BracketOptions &opts = {});

nlohmann::json to_json(const AlphaStarBracket &r);

} // namespace mtlab
