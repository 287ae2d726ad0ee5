#include <random>

#include "arfinsler/algext.hpp"
#include "arfinsler/errors.hpp"
#include "doctest.h"
#include "support/numeric.hpp"

using namespace arf;
using arf::test::close;

namespace {

RatFn y(int n, int i) { return RatFn::y(n, i); }
RatFn x(int n, int i) { return RatFn::x(n, i); }

Kernel cubic3() { return make_kernel(3, 3, y(3, 1) * y(3, 2) * y(3, 3)); }
Kernel alpha2() { return make_kernel(2, 2, y(2, 1) * y(2, 1) + y(2, 2) * y(2, 2)); }

FieldElem random_elem(std::mt19937_64& rng, const Kernel& k) {
  std::uniform_int_distribution<int> c(-3, 3), v(1, k->n);
  std::vector<RatFn> cs;
  for (int d = 0; d < k->m; ++d) {
    RatFn num(k->n, mpq_class(c(rng)));
    num += x(k->n, v(rng)).scaled(c(rng)) + y(k->n, v(rng)).scaled(c(rng));
    RatFn den = y(k->n, v(rng)) + RatFn(k->n, mpq_class(std::abs(c(rng)) + 1));
    cs.push_back(num / den);
  }
  return FieldElem(k, cs);
}

std::vector<mpq_class> point(int n) {
  std::vector<mpq_class> p;
  for (int i = 0; i < n; ++i) p.push_back(mpq_class(i + 1, 7));
  for (int i = 0; i < n; ++i) p.push_back(mpq_class(2 * i + 3, 5));
  return p;
}

}  // namespace

TEST_CASE("reduction by the defining relation") {
  const Kernel a = alpha2();
  const FieldElem t = FieldElem::theta_pow(a, 1);
  const FieldElem tt = t * t;
  CHECK(tt.is_rational());
  CHECK(tt.coeff(0) == a->A);

  const Kernel c = cubic3();
  const FieldElem t2 = FieldElem::theta_pow(c, 2);
  const FieldElem t4 = t2 * t2;
  CHECK(t4.coeff(0).is_zero());
  CHECK(t4.coeff(1) == c->A);
  CHECK(t4.coeff(2).is_zero());

  const FieldElem one = FieldElem::constant(a, 1);
  CHECK((one + t) * (one - t) == FieldElem(a, RatFn(2, mpq_class(1)) - a->A));
}

TEST_CASE("inverse examples") {
  const Kernel c = cubic3();
  const FieldElem t = FieldElem::theta_pow(c, 1);
  CHECK(t.inv() == FieldElem::monomial(c, c->A.inv(), 2));
  CHECK(FieldElem::constant(c, 4).inv() == FieldElem::constant(c, mpq_class(1, 4)));
  CHECK_THROWS_AS(FieldElem(c).inv(), DivisionByZero);

  const Kernel a = alpha2();
  const FieldElem one = FieldElem::constant(a, 1), ta = FieldElem::theta_pow(a, 1);
  const RatFn inv1mA = (RatFn(2, mpq_class(1)) - a->A).inv();
  CHECK((one + ta).inv() == (one - ta).scaled(inv1mA));
}

TEST_CASE("zero divisors of a reducible kernel are reported") {
  // theta^2 = y1^2 is reducible: (theta - y1)(theta + y1) = 0.
  const Kernel k = make_kernel(2, 2, y(2, 1) * y(2, 1));
  const FieldElem d = FieldElem::theta_pow(k, 1) - FieldElem(k, y(2, 1));
  CHECK_THROWS_AS(d.inv(), NotInvertible);
}

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(make_kernel(2, 2, RatFn(2)), ZeroInput);
  CHECK_THROWS_AS(make_kernel(2, 2, y(2, 1)), HomogeneityViolation);
  CHECK(trivial_kernel(2)->m == 1);
}

TEST_CASE("fiber and base derivations of theta") {
  const Kernel c = cubic3();
  const FieldElem t = FieldElem::theta_pow(c, 1);
  CHECK(t.pdiff_fiber(0) == t.scaled(y(3, 1).inv().scaled(mpq_class(1, 3))));

  // Euler identity y^i d/dy^i theta = theta.
  FieldElem e(c);
  for (int i = 0; i < 3; ++i) e += FieldElem(c, y(3, i + 1)) * t.pdiff_fiber(i);
  CHECK(e == t);

  // theta = (f y1 y2 y3)^(1/3) with f = 1 + x1^2: d_1 theta = theta f' / (3 f).
  const RatFn f = RatFn(3, mpq_class(1)) + x(3, 1) * x(3, 1);
  const Kernel fk = make_kernel(3, 3, f * y(3, 1) * y(3, 2) * y(3, 3));
  const FieldElem ft = FieldElem::theta_pow(fk, 1);
  CHECK(ft.pdiff_base(0) == ft.scaled(f.dx(1) / f.scaled(3)));
  CHECK(FieldElem(fk, y(3, 2)).pdiff_base(0).is_zero());

  const RatFn r = y(3, 1) * y(3, 1) / (x(3, 2) + y(3, 3));
  CHECK(FieldElem(c, r).pdiff_fiber(0) == FieldElem(c, r.dy(1)));
}

TEST_CASE("theta support and homogeneity") {
  const Kernel c = cubic3();
  const FieldElem one = FieldElem::constant(c, 1), t = FieldElem::theta_pow(c, 1);
  CHECK(theta_support(one) == std::set<int>{0});
  CHECK(theta_support(FieldElem::theta_pow(c, 2) + one) == std::set<int>{0, 2});
  CHECK(theta_support(FieldElem(c)).empty());
  CHECK(k_homogeneity_degree(t) == 1);
  CHECK(k_homogeneity_degree(t * t) == 2);
  CHECK(k_homogeneity_degree(t + FieldElem(c, y(3, 1))) == 1);
  CHECK_FALSE(k_homogeneity_degree(t + one).has_value());
  CHECK_THROWS_AS(k_homogeneity_degree(FieldElem(c)), ZeroInput);
}

TEST_CASE("field laws and Leibniz rule on random elements") {
  std::mt19937_64 rng(11);
  for (const Kernel& k : {cubic3(), alpha2()}) {
    for (int trial = 0; trial < 6; ++trial) {
      const FieldElem a = random_elem(rng, k), b = random_elem(rng, k), c = random_elem(rng, k);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * b == b * a);
      if (!a.is_zero()) CHECK((a * a.inv()) == FieldElem::constant(k, 1));
      for (int i = 0; i < k->n; ++i) {
        CHECK((a * b).pdiff_fiber(i) == a.pdiff_fiber(i) * b + a * b.pdiff_fiber(i));
        CHECK((a * b).pdiff_base(i) == a.pdiff_base(i) * b + a * b.pdiff_base(i));
        for (int j = 0; j < k->n; ++j) CHECK(a.pdiff_base(i).pdiff_fiber(j) == a.pdiff_fiber(j).pdiff_base(i));
        const auto s = theta_support(a.pdiff_fiber(i));
        const auto sa = theta_support(a);
        CHECK(std::includes(sa.begin(), sa.end(), s.begin(), s.end()));
      }
    }
  }
}

TEST_CASE("arithmetic and derivatives agree with 100-digit evaluation") {
  std::mt19937_64 rng(5);
  for (const Kernel& k : {cubic3(), alpha2()}) {
    const auto p = point(k->n);
    for (int trial = 0; trial < 4; ++trial) {
      const FieldElem a = random_elem(rng, k), b = random_elem(rng, k);
      const auto va = test::eval(a, p), vb = test::eval(b, p);
      CHECK(close(test::eval(a * b, p), va * vb, 1e-25));
      CHECK(close(test::eval(a + b, p), va + vb, 1e-25));
      if (!a.is_zero()) CHECK(close(test::eval(a.inv(), p), 1 / va, 1e-25));
      for (int v = 0; v < 2 * k->n; ++v) {
        const FieldElem d = v < k->n ? a.pdiff_base(v) : a.pdiff_fiber(v - k->n);
        CHECK(close(test::eval(d, p), test::central_diff(a, p, v), 1e-25));
      }
    }
  }
}
