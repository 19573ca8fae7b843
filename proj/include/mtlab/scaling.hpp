#pragma once

#include "mtlab/functional.hpp"
#include "mtlab/radial.hpp"

namespace mtlab {

/// v_t(x) = t^{1/N} v(t^{1/N} x), realized on the grid stretched by t^{-1/N}
/// so that ||v_t||_p^p = t^{p/N-1} ||v||_p^p and ||grad v_t||_N^N = t ||grad v||_N^N
/// hold to rounding.
RadialProfile dilate(const RadialProfile &v, double t);

/// lambda * v(lambda x): amplitude and dilation both lambda.
RadialProfile amplitude_dilation(const RadialProfile &v, double lambda);

/// Unique beta > 0 with beta^a t^{a/N} ||grad v||^a + beta^b ||v||^b = 1, given
/// grad_pow = ||grad v||_N^N and mass_pow = ||v||_N^N.
double solve_beta_star(double grad_pow, double mass_pow, double t, const MTParams &p);
double solve_beta_star(const RadialProfile &v, double t, const MTParams &p);

/// d beta_star / dt from the implicit relation above.
double beta_star_derivative(double grad_pow, double mass_pow, double t, const MTParams &p);
double beta_star_derivative(const RadialProfile &v, double t, const MTParams &p);

/// w_t = beta_star(t) v_t together with its inputs.
struct ScalingState {
  RadialProfile base;
  double t;
  double beta_star;
  MTParams params;

  static ScalingState make(const RadialProfile &v, double t, const MTParams &p);
  RadialProfile profile() const;
};

/// Lower-bound curve along the normalized dilation family:
///   f(t) = beta^N ||v||_N^N + (alpha/N) beta^{NN'} t^{1/(N-1)} ||v||_{NN'}^{NN'}.
double scaling_curve(const RadialProfile &v, double t, const MTParams &p);

/// Amplitude and dilation chosen so that ||grad V||_N = 1 = ||V||_N.
RadialProfile normalize_unit_norms(const RadialProfile &v);

/// W_t(x) = lambda w_t(lambda x), w_t = t^{1/b} V, lambda = t^{-1/b} (1-t)^{1/a},
/// for V with ||grad V||_N = 1 = ||V||_N. Lies on the constraint surface.
RadialProfile gn_two_parameter_family(const RadialProfile &V, double t, const MTParams &p);

} // namespace mtlab
