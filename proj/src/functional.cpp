#include "mtlab/functional.hpp"

#include "mtlab/error.hpp"

#include <cmath>
#include <sstream>

namespace mtlab {

namespace {

constexpr double max_exponent = 709.0;

double factorial(int n) { return std::tgamma(n + 1.0); }

} // namespace

void SeriesControl::validate(int N) const {
  if (!(rel_tol > 0))
    throw Error(ErrorCode::invalid_parameter, "series rel_tol must be positive");
  if (max_terms < N)
    throw Error(ErrorCode::invalid_parameter, "series max_terms must be >= N");
}

MTParams MTParams::make(int N, double alpha, double a, double b) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "N must be >= 2");
  const double critical = alpha_critical(N);
  if (!(alpha > 0) || alpha > critical * (1 + 1e-12)) {
    std::ostringstream os;
    os << "alpha must lie in (0, alpha_N = " << critical << "], got " << alpha;
    throw Error(ErrorCode::invalid_parameter, os.str());
  }
  if (!(a > 0) || !std::isfinite(a))
    throw Error(ErrorCode::invalid_parameter, "a must be positive");
  if (!(b > 0) || !std::isfinite(b))
    throw Error(ErrorCode::invalid_parameter, "b must be positive");
  return MTParams{N, std::min(alpha, critical), a, b};
}

bool MTParams::at_critical() const { return alpha >= alpha_critical(N) * (1 - 1e-12); }

bool MTParams::finite_regime() const { return !at_critical() || b <= N; }

double exp_tail(double t, int first, const SeriesControl &ctl) {
  if (t < 0)
    throw Error(ErrorCode::invalid_parameter, "exponential tail needs t >= 0");
  if (t > max_exponent)
    throw Error(ErrorCode::series_overflow, "exp argument out of range");
  if (first <= 0)
    return std::exp(t);
  if (t == 0)
    return 0.0;
  if (t > 2.0 * first + 30.0) {
    // the head is negligible against e^t here, no cancellation
    double head = 0.0, term = 1.0;
    for (int j = 0; j < first; ++j) {
      head += term;
      term *= t / (j + 1);
    }
    return std::exp(t) - head;
  }
  double term = std::exp(first * std::log(t) - std::lgamma(first + 1.0));
  double sum = 0.0;
  for (int j = first; j < first + ctl.max_terms; ++j) {
    sum += term;
    if (j > t && term <= ctl.rel_tol * sum)
      return sum;
    term *= t / (j + 1);
  }
  throw Error(ErrorCode::series_overflow, "exponential tail did not converge within max_terms");
}

double phi(double t, int N, const SeriesControl &ctl) { return exp_tail(t, N - 1, ctl); }

double psi(double s, int N, const SeriesControl &ctl) { return exp_tail(s, N, ctl); }

double phi_derivative(double t, int N, const SeriesControl &ctl) { return exp_tail(t, N - 2, ctl); }

double mt_integral(const RadialProfile &u, double alpha, const SeriesControl &ctl) {
  const int N = u.dimension();
  ctl.validate(N);
  const double np = conjugate_exponent(N);
  const auto mu = u.grid().measure();
  const auto v = u.values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0)
      s += mu[i] * phi(alpha * std::pow(v[i], np), N, ctl);
  return sphere_area(N) * s;
}

double mt_integral(const RadialProfile &u, const MTParams &p, const SeriesControl &ctl) {
  if (u.dimension() != p.N)
    throw Error(ErrorCode::invalid_parameter, "profile dimension does not match parameters");
  return mt_integral(u, p.alpha, ctl);
}

double mt_integral_series(const RadialProfile &u, double alpha, const SeriesControl &ctl) {
  const int N = u.dimension();
  ctl.validate(N);
  const double np = conjugate_exponent(N);
  const auto mu = u.grid().measure();
  const auto v = u.values();
  const double hump = alpha * std::pow(u.max_value(), np);
  if (hump > max_exponent)
    throw Error(ErrorCode::series_overflow, "alpha * max|u|^{N'} out of floating range");
  std::vector<double> log_base(v.size(), -INFINITY);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0)
      log_base[i] = std::log(alpha) + np * std::log(v[i]);
  double sum = 0.0;
  for (int j = N - 1; j < N - 1 + ctl.max_terms; ++j) {
    // alpha^j / j! ||u||_{N'j}^{N'j} without forming the norm itself
    const double lf = std::lgamma(j + 1.0);
    double term = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] > 0)
        term += mu[i] * std::exp(j * log_base[i] - lf);
    sum += term;
    if (j > hump && term <= ctl.rel_tol * sum)
      return sphere_area(N) * sum;
    if (sum == 0.0 && j > hump)
      return 0.0;
  }
  throw Error(ErrorCode::series_overflow, "norm series did not converge within max_terms");
}

double constraint_value(const RadialProfile &u, const MTParams &p) {
  const double grad = grad_norm_pow(u);
  const double mass = lp_norm_pow(u, p.N);
  return std::pow(grad, p.a / p.N) + std::pow(mass, p.b / p.N);
}

double j_truncated(const RadialProfile &u, const MTParams &p) {
  const int N = p.N;
  return std::pow(p.alpha, N - 1) / factorial(N - 1) * lp_norm_pow(u, N) +
         std::pow(p.alpha, N) / factorial(N) * lp_norm_pow(u, N * p.conjugate());
}

double adachi_tanaka_ratio(const RadialProfile &u, double alpha, int N, const SeriesControl &ctl) {
  if (u.dimension() != N)
    throw Error(ErrorCode::invalid_parameter, "profile dimension does not match N");
  const double grad = std::pow(grad_norm_pow(u), 1.0 / N);
  if (!(grad > 0))
    throw Error(ErrorCode::degenerate_profile, "||grad u||_N = 0");
  const auto v = u.scaled_by(1.0 / grad);
  return mt_integral(v, alpha, ctl) / lp_norm_pow(v, N);
}

} // namespace mtlab
