#pragma once

#include "mtlab/radial.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace mtlab {

/// Reduced fraction with positive denominator, arbitrary precision.
using ExactRational = boost::multiprecision::cpp_rational;

std::string to_string(const ExactRational &q);

/// Gamma(x) Gamma(y) / Gamma(x + y) for positive integers, exactly.
ExactRational beta_exact(int x, int y);

/// Q(u) = [int r^{N-1} u^N] [int r^{N-1} |u'|^N]^{1/(N-1)} / int r^{N-1} u^{NN'}
double gn_ratio_radial(const RadialProfile &u);

/// Q of max{0, (1-r)^3} in dimension 2 from exact beta values: 39/40.
ExactRational n2_cubic_exact();

struct CNValue {
  int N = 3;
  double value = 0.0;         // C_N
  ExactRational power;        // C_N^{N-1} = (N-1)! N^{N^2-2N} (N-1)^{-N^2+N}
  double log_power = 0.0;     // log C_N^{N-1}, 50-digit evaluation rounded
};

/// Q(e^{-r}) in dimension N >= 3.
CNValue c_n_value(int N);

struct ClaimRow {
  int N = 3;
  double d_N = 0.0;
  double e_N = 0.0;
  double log_cn_pow = 0.0;
  bool decomposition = false; // |log C_N^{N-1} - (d_N + e_N)| <= 1e-12
  bool claim1 = false;        // e_N < -1/2
  bool claim2 = false;        // d_{N+1} < d_N
  bool claim3_chain = false;  // d_N <= d_3 < 1/2 and e_N < -1/2, so log C_N^{N-1} < 0
};

struct ClaimLedger {
  std::vector<ClaimRow> rows;
  /// e^5 < 729/4 from an exact rational upper bound for e
  bool e5_exact = false;
  /// (14/5)^5 = 17210368/100000 < 729/4 and e < 14/5
  bool cruder_bound = false;
  /// f(x) = (x+1) log(1+1/x) - 1 > 0 and f'(x) < 0 on sampled x in [1, 1e4]
  bool auxiliary_f = false;
  /// d_3 < 1/2
  bool d3_half = false;

  bool all_hold() const;
};

ClaimLedger claim_ledger(int n_max = 1000, int threads = 0);

void write_ledger_csv(std::ostream &os, const ClaimLedger &ledger);

} // namespace mtlab
