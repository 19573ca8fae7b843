#include "mtlab/appendix.hpp"

#include "mtlab/error.hpp"
#include "mtlab/parallel.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace mtlab {

namespace mp = boost::multiprecision;
using Real = mp::cpp_bin_float_50;
using mp::cpp_int;

std::string to_string(const ExactRational &q) {
  std::ostringstream os;
  os << mp::numerator(q) << "/" << mp::denominator(q);
  return os.str();
}

namespace {

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int k = 2; k <= n; ++k)
    f *= k;
  return f;
}

cpp_int ipow(int base, int exp) { return mp::pow(cpp_int(base), unsigned(exp)); }

} // namespace

ExactRational beta_exact(int x, int y) {
  if (x < 1 || y < 1)
    throw Error(ErrorCode::invalid_parameter, "integer beta needs positive arguments");
  return ExactRational(factorial(x - 1) * factorial(y - 1), factorial(x + y - 1));
}

double gn_ratio_radial(const RadialProfile &u) {
  const int N = u.dimension();
  const double w = sphere_area(N);
  const double mass = lp_norm_pow(u, N) / w;
  const double grad = grad_norm_pow(u) / w;
  const double top = lp_norm_pow(u, N * conjugate_exponent(N)) / w;
  if (!(mass > 0) || !(grad > 0) || !(top > 0))
    throw Error(ErrorCode::degenerate_profile, "ratio needs a nonzero profile");
  return mass * std::pow(grad, 1.0 / (N - 1)) / top;
}

ExactRational n2_cubic_exact() {
  // int r u^2 = B(2,7), int r |u'|^2 = 9 B(2,5), int r u^4 = B(2,13)
  return beta_exact(2, 7) * 9 * beta_exact(2, 5) / beta_exact(2, 13);
}

CNValue c_n_value(int N) {
  if (N < 3)
    throw Error(ErrorCode::invalid_parameter, "C_N is defined for N >= 3");
  CNValue c;
  c.N = N;
  c.power = ExactRational(factorial(N - 1) * ipow(N, N * N - 2 * N), ipow(N - 1, N * N - N));
  Real log_power = mp::log(Real(mp::numerator(c.power))) - mp::log(Real(mp::denominator(c.power)));
  c.log_power = double(log_power);
  c.value = double(mp::exp(log_power / (N - 1)));
  return c;
}

bool ClaimLedger::all_hold() const {
  if (!(e5_exact && cruder_bound && auxiliary_f && d3_half) || rows.empty())
    return false;
  for (const auto &r : rows)
    if (!(r.decomposition && r.claim1 && r.claim2 && r.claim3_chain))
      return false;
  return true;
}

ClaimLedger claim_ledger(int n_max, int threads) {
  if (n_max < 3)
    throw Error(ErrorCode::invalid_parameter, "n_max must be >= 3");
  ClaimLedger out;

  // e < sum_{k<=n} 1/k! + 1/(n! n)
  ExactRational e_upper = 0, inv_fact = 1;
  const int n = 20;
  for (int k = 0; k <= n; ++k) {
    if (k > 0)
      inv_fact /= k;
    e_upper += inv_fact;
  }
  e_upper += inv_fact / n;
  const ExactRational bound(729, 4);
  out.e5_exact = mp::pow(mp::numerator(e_upper), 5) * mp::denominator(bound) <
                 mp::numerator(bound) * mp::pow(mp::denominator(e_upper), 5);
  const ExactRational cruder(14, 5);
  const ExactRational cruder5 = cruder * cruder * cruder * cruder * cruder;
  out.cruder_bound = cruder5 == ExactRational(17210368, 100000) && cruder5 < bound && e_upper < cruder;

  // d_N = sum_{k<N} log k - N (log N - 1), e_N = -N + N(N-1) log(1 + 1/(N-1))
  std::vector<Real> log_fact(n_max + 2, Real(0));
  for (int k = 2; k <= n_max + 1; ++k)
    log_fact[k] = log_fact[k - 1] + mp::log(Real(k));
  auto d = [&](int N) { return log_fact[N - 1] - Real(N) * (mp::log(Real(N)) - 1); };
  auto e = [&](int N) { return Real(-N) + Real(N) * (N - 1) * mp::log1p(Real(1) / (N - 1)); };
  const Real half("0.5");
  const Real d3 = d(3);
  out.d3_half = d3 < half;

  out.rows.resize(n_max - 2);
  parallel_for(out.rows.size(), resolve_threads(threads), [&](std::size_t i) {
    const int N = int(i) + 3;
    const Real dN = d(N), eN = e(N), dN1 = d(N + 1);
    const Real direct = log_fact[N - 1] + Real(N * N - 2 * N) * mp::log(Real(N)) -
                        Real(N * N - N) * mp::log(Real(N - 1));
    ClaimRow &r = out.rows[i];
    r.N = N;
    r.d_N = double(dN);
    r.e_N = double(eN);
    r.log_cn_pow = double(direct);
    r.decomposition = mp::abs(direct - (dN + eN)) <= Real("1e-12");
    r.claim1 = eN < -half;
    r.claim2 = dN1 < dN;
    r.claim3_chain = dN <= d3 && out.d3_half && r.claim1 && direct < 0;
  });

  bool f_ok = true;
  for (int k = 0; k <= 400; ++k) {
    const Real x = mp::pow(Real(10), Real(k) / 100);
    const Real f = (x + 1) * mp::log1p(1 / x) - 1;
    const Real fp = mp::log1p(1 / x) - 1 / x;
    f_ok = f_ok && f > 0 && fp < 0;
  }
  out.auxiliary_f = f_ok;
  return out;
}

void write_ledger_csv(std::ostream &os, const ClaimLedger &ledger) {
  os << "N,d_N,e_N,log_CN_pow,claim1,claim2,claim3_chain\n";
  os << std::setprecision(17);
  for (const auto &r : ledger.rows)
    os << r.N << ',' << r.d_N << ',' << r.e_N << ',' << r.log_cn_pow << ',' << (r.claim1 ? "true" : "false") << ','
       << (r.claim2 ? "true" : "false") << ',' << (r.claim3_chain ? "true" : "false") << '\n';
}

} // namespace mtlab
