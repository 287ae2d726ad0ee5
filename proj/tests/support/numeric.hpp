#pragma once

// High-precision evaluation of field elements, independent of the library's
// own oracle: theta is taken as the positive real m-th root of A.

#include <boost/multiprecision/mpfr.hpp>
#include <vector>

#include "arfinsler/algext.hpp"

namespace arf::test {

using Real100 = boost::multiprecision::mpfr_float_100;

inline Real100 to_real(const mpq_class& q) {
  return Real100(q.get_num().get_str()) / Real100(q.get_den().get_str());
}

inline Real100 eval(const FieldElem& f, const std::vector<mpq_class>& p) {
  const KernelDesc& k = *f.kernel();
  const Real100 A = to_real(k.A.eval(p));
  const Real100 theta = k.m == 1 ? A : Real100(boost::multiprecision::pow(A, Real100(1) / k.m));
  const auto cs = f.eval_coeffs(p);
  Real100 acc = 0, tp = 1;
  for (const auto& c : cs) {
    acc += to_real(c) * tp;
    tp *= theta;
  }
  return acc;
}

/// Central difference in raw variable v with step 1e-40.
inline Real100 central_diff(const FieldElem& f, std::vector<mpq_class> p, int v) {
  mpz_class ten40;
  mpz_ui_pow_ui(ten40.get_mpz_t(), 10, 40);
  const mpq_class h(1, ten40);
  const mpq_class p0 = p[v];
  p[v] = p0 + h;
  const Real100 up = eval(f, p);
  p[v] = p0 - h;
  const Real100 down = eval(f, p);
  return (up - down) / (2 * to_real(h));
}

inline bool close(const Real100& a, const Real100& b, double tol) {
  const Real100 scale = boost::multiprecision::max(Real100(1e-60), boost::multiprecision::max(abs(a), abs(b)));
  return abs(a - b) / scale <= tol;
}

}  // namespace arf::test
