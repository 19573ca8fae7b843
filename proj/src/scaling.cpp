#include "mtlab/scaling.hpp"

#include "mtlab/error.hpp"

#include <cmath>

namespace mtlab {

RadialProfile dilate(const RadialProfile &v, double t) {
  if (!(t > 0) || !std::isfinite(t))
    throw Error(ErrorCode::invalid_parameter, "dilation parameter must be positive");
  const double s = std::pow(t, 1.0 / v.dimension());
  return RadialProfile(v.grid().scaled(1.0 / s), std::vector<double>(v.values().begin(), v.values().end()))
      .scaled_by(s);
}

RadialProfile amplitude_dilation(const RadialProfile &v, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda))
    throw Error(ErrorCode::invalid_parameter, "scale must be positive");
  return v.with_grid(v.grid().scaled(1.0 / lambda)).scaled_by(lambda);
}

namespace {

struct BetaEquation {
  double A; // t^{a/N} ||grad v||^a
  double B; // ||v||^b
  double a, b;
};

BetaEquation beta_equation(double grad_pow, double mass_pow, double t, const MTParams &p) {
  if (!(t > 0))
    throw Error(ErrorCode::invalid_parameter, "t must be positive");
  if (!(grad_pow > 0) && !(mass_pow > 0))
    throw Error(ErrorCode::degenerate_profile, "both norms vanish");
  return {std::pow(t * grad_pow, p.a / p.N), std::pow(mass_pow, p.b / p.N), p.a, p.b};
}

} // namespace

double solve_beta_star(double grad_pow, double mass_pow, double t, const MTParams &p) {
  const auto eq = beta_equation(grad_pow, mass_pow, t, p);
  // h(s) = A e^{a s} + B e^{b s} - 1 in s = log beta: increasing and convex.
  double hi = INFINITY;
  if (eq.A > 0)
    hi = std::min(hi, -std::log(eq.A) / eq.a);
  if (eq.B > 0)
    hi = std::min(hi, -std::log(eq.B) / eq.b);
  double lo = hi - std::log(2.0) / std::min(eq.a, eq.b);
  auto h = [&](double s) {
    return (eq.A > 0 ? std::exp(std::log(eq.A) + eq.a * s) : 0.0) +
           (eq.B > 0 ? std::exp(std::log(eq.B) + eq.b * s) : 0.0) - 1.0;
  };
  auto dh = [&](double s) {
    return (eq.A > 0 ? eq.a * std::exp(std::log(eq.A) + eq.a * s) : 0.0) +
           (eq.B > 0 ? eq.b * std::exp(std::log(eq.B) + eq.b * s) : 0.0);
  };
  double s = hi;
  for (int it = 0; it < 200; ++it) {
    const double value = h(s);
    if (value == 0.0)
      break;
    if (value > 0)
      hi = s;
    else
      lo = s;
    double next = s - value / dh(s);
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-16 * std::max(1.0, std::abs(s))) {
      s = next;
      break;
    }
    s = next;
  }
  return std::exp(s);
}

double solve_beta_star(const RadialProfile &v, double t, const MTParams &p) {
  return solve_beta_star(grad_norm_pow(v), lp_norm_pow(v, p.N), t, p);
}

double beta_star_derivative(double grad_pow, double mass_pow, double t, const MTParams &p) {
  const double beta = solve_beta_star(grad_pow, mass_pow, t, p);
  const double ga = std::pow(grad_pow, p.a / p.N);
  const double mb = std::pow(mass_pow, p.b / p.N);
  const double num = p.a / p.N * std::pow(t, p.a / p.N - 1) * std::pow(beta, p.a) * ga;
  const double den = p.a * std::pow(beta, p.a - 1) * std::pow(t, p.a / p.N) * ga + p.b * std::pow(beta, p.b - 1) * mb;
  return -num / den;
}

double beta_star_derivative(const RadialProfile &v, double t, const MTParams &p) {
  return beta_star_derivative(grad_norm_pow(v), lp_norm_pow(v, p.N), t, p);
}

ScalingState ScalingState::make(const RadialProfile &v, double t, const MTParams &p) {
  return ScalingState{v, t, solve_beta_star(v, t, p), p};
}

RadialProfile ScalingState::profile() const { return dilate(base, t).scaled_by(beta_star); }

double scaling_curve(const RadialProfile &v, double t, const MTParams &p) {
  const int N = p.N;
  const double np = p.conjugate();
  const double beta = solve_beta_star(v, t, p);
  return std::pow(beta, N) * lp_norm_pow(v, N) +
         p.alpha / N * std::pow(beta, N * np) * std::pow(t, 1.0 / (N - 1)) * lp_norm_pow(v, N * np);
}

RadialProfile normalize_unit_norms(const RadialProfile &v) {
  const int N = v.dimension();
  const double grad = grad_norm_pow(v), mass = lp_norm_pow(v, N);
  if (!(grad > 0) || !(mass > 0))
    throw Error(ErrorCode::degenerate_profile, "cannot normalize a profile with a vanishing norm");
  const double c = std::pow(grad, -1.0 / N);
  const double lambda = std::pow(mass / grad, 1.0 / N);
  // c V(lambda x) on the grid shrunk by lambda
  return v.with_grid(v.grid().scaled(1.0 / lambda)).scaled_by(c);
}

RadialProfile gn_two_parameter_family(const RadialProfile &V, double t, const MTParams &p) {
  if (!(t > 0 && t < 1))
    throw Error(ErrorCode::invalid_parameter, "family parameter t must lie in (0, 1)");
  const int N = p.N;
  if (std::abs(std::pow(grad_norm_pow(V), 1.0 / N) - 1) > 1e-8 ||
      std::abs(std::pow(lp_norm_pow(V, N), 1.0 / N) - 1) > 1e-8)
    throw Error(ErrorCode::invalid_parameter, "family base needs ||grad V||_N = 1 = ||V||_N");
  const double lambda = std::pow(t, -1.0 / p.b) * std::pow(1 - t, 1.0 / p.a);
  // lambda * t^{1/b} = (1-t)^{1/a}
  return V.with_grid(V.grid().scaled(1.0 / lambda)).scaled_by(std::pow(1 - t, 1.0 / p.a));
}

} // namespace mtlab
