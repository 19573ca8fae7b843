#pragma once

#include "mtlab/radial.hpp"

namespace mtlab {

struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 512;

  void validate(int N) const;
};

/// Problem tuple (N, alpha, a, b) of the constrained supremum
///   sup { int Phi_N(alpha |u|^{N'}) : ||grad u||_N^a + ||u||_N^b = 1 }.
struct MTParams {
  int N = 2;
  double alpha = 1.0;
  double a = 2.0;
  double b = 2.0;

  /// Validates and returns the tuple; alpha may equal alpha_N.
  static MTParams make(int N, double alpha, double a, double b);

  double conjugate() const { return conjugate_exponent(N); }
  double alpha_n() const { return alpha_critical(N); }
  bool at_critical() const;
  /// The supremum is finite for alpha < alpha_N, and at alpha = alpha_N iff b <= N.
  bool finite_regime() const;
};

/// Phi_N(t) = e^t - sum_{j<N-1} t^j / j!
double phi(double t, int N, const SeriesControl &ctl = {});
/// Psi_N(s) = Phi_N(s) - s^{N-1}/(N-1)!
double psi(double s, int N, const SeriesControl &ctl = {});
/// Phi_N'(t) = e^t - sum_{j<N-2} t^j / j!
double phi_derivative(double t, int N, const SeriesControl &ctl = {});
/// sum_{j >= first} t^j / j!, evaluated without cancellation for small t.
double exp_tail(double t, int first, const SeriesControl &ctl = {});

/// int_{R^N} Phi_N(alpha |u|^{N'}) dx by quadrature of the pointwise integrand.
double mt_integral(const RadialProfile &u, const MTParams &p, const SeriesControl &ctl = {});
double mt_integral(const RadialProfile &u, double alpha, const SeriesControl &ctl = {});

/// The same quantity as sum_{j >= N-1} alpha^j / j! ||u||_{N'j}^{N'j}.
double mt_integral_series(const RadialProfile &u, double alpha, const SeriesControl &ctl = {});

/// ||grad u||_N^a + ||u||_N^b
double constraint_value(const RadialProfile &u, const MTParams &p);

/// First two terms of the series: alpha^{N-1}/(N-1)! ||u||_N^N + alpha^N/N! ||u||_{NN'}^{NN'}
double j_truncated(const RadialProfile &u, const MTParams &p);

/// mt_integral(v, alpha) / ||v||_N^N with v = u / ||grad u||_N.
double adachi_tanaka_ratio(const RadialProfile &u, double alpha, int N, const SeriesControl &ctl = {});

} // namespace mtlab
