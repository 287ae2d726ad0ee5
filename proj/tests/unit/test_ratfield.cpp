#include <random>

#include "arfinsler/errors.hpp"
#include "arfinsler/ratfn.hpp"
#include "doctest.h"
#include "support/naive_poly.hpp"

using arf::MPoly;
using arf::RatFn;
using arf::test::NaivePoly;

namespace {

NaivePoly to_naive(const MPoly& p) {
  NaivePoly r(p.num_vars());
  for (const auto& t : p.terms()) {
    std::vector<int> e(p.num_vars());
    for (int v = 0; v < p.num_vars(); ++v) e[v] = t.mono.exponent(v);
    r.terms[e] = t.coeff;
  }
  return r;
}

// Small random polynomial in n = 2 (four variables).
MPoly random_poly(std::mt19937_64& rng, int dim = 2, int max_terms = 4, int max_deg = 2) {
  std::uniform_int_distribution<int> nterms(1, max_terms), deg(0, max_deg), coeff(-3, 3);
  MPoly p(dim);
  for (int k = nterms(rng); k > 0; --k) {
    MPoly t(dim, mpq_class(coeff(rng)));
    for (int v = 0; v < 2 * dim; ++v) t = t * MPoly::var(dim, v, deg(rng) / 2);
    p += t;
  }
  return p;
}

}  // namespace

TEST_CASE("ratfn reciprocal and inverse pair") {
  RatFn y1 = RatFn::y(2, 1), y2 = RatFn::y(2, 2);
  RatFn r = y1.inv();
  CHECK(r.num().is_one());
  CHECK(r.den() == MPoly::y(2, 1));
  CHECK((y1 / y2 * (y2 / y1)).is_one());
  CHECK_THROWS_AS(RatFn(2).inv(), arf::DivisionByZero);
}

TEST_CASE("ratfn addition agrees with cleared denominators") {
  const int n = 2;
  RatFn x1 = RatFn::x(n, 1), y1 = RatFn::y(n, 1), y2 = RatFn::y(n, 2);
  RatFn sum = x1 * y1 / y2 + x1;
  // x1*y1/y2 + x1 = x1*(y1+y2)/y2: cross-multiply with the reference polynomials.
  NaivePoly X1 = NaivePoly::var(4, 0), Y1 = NaivePoly::var(4, 2), Y2 = NaivePoly::var(4, 3);
  NaivePoly expected_num = X1 * (Y1 + Y2);
  CHECK(to_naive(sum.num()) * Y2 == expected_num * to_naive(sum.den()));
  CHECK(sum.den() == MPoly::y(n, 2));
}

TEST_CASE("gcd examples") {
  const int n = 2;
  MPoly y1 = MPoly::y(n, 1), y2 = MPoly::y(n, 2);
  CHECK(arf::gcd(y1 * y2, y2) == y2);
  MPoly p = y1.scaled(3) + MPoly(n, mpq_class(2));
  CHECK(arf::gcd(p, MPoly(n)) == p.monic());
  MPoly s = y1 + y2;
  MPoly g = arf::gcd(s * s, s * y1);
  CHECK(g == s);
  CHECK(arf::divide_exact(s * s, g).has_value());
  CHECK(arf::divide_exact(s * y1, g).has_value());
}

TEST_CASE("gcd recovers planted common factors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    MPoly c = random_poly(rng), a = random_poly(rng), b = random_poly(rng);
    if (c.is_zero() || a.is_zero() || b.is_zero()) continue;
    MPoly g = arf::gcd(a * c, b * c);
    REQUIRE(arf::divide_exact(a * c, g).has_value());
    REQUIRE(arf::divide_exact(b * c, g).has_value());
    CHECK(arf::divide_exact(g, c.monic()).has_value());
  }
}

TEST_CASE("pdiff examples") {
  const int n = 2;
  RatFn x1 = RatFn::x(n, 1), y1 = RatFn::y(n, 1), y2 = RatFn::y(n, 2);
  CHECK((y1 * y1).dy(1) == y1.scaled(2));
  CHECK((x1 * y1).dx(1) == y1);
  CHECK((y1 / y2).dy(2) == -(y1 / (y2 * y2)));
}

TEST_CASE("homogeneity degree") {
  const int n = 2;
  RatFn x1 = RatFn::x(n, 1), y1 = RatFn::y(n, 1), y2 = RatFn::y(n, 2);
  CHECK(arf::y_homogeneity_degree(y1 * y1 + y2 * y2) == 2);
  CHECK(arf::y_homogeneity_degree(x1 * y1 / y2) == 0);
  CHECK_FALSE(arf::y_homogeneity_degree(y1 + x1).has_value());
  CHECK(arf::y_homogeneity_degree(x1 / (y1 * y2 + y2 * y2)) == -2);
  CHECK_THROWS_AS(arf::y_homogeneity_degree(RatFn(n)), arf::ZeroInput);
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    MPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(to_naive(a * b) == to_naive(a) * to_naive(b));
    CHECK(to_naive(a + b) == to_naive(a) + to_naive(b));
  }
}

TEST_CASE("canonical form is unique under common factors") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    MPoly f = random_poly(rng), g = random_poly(rng), c = random_poly(rng);
    if (f.is_zero() || g.is_zero() || c.is_zero()) continue;
    RatFn q1(f, g), q2(f * c, g * c), q3(f.scaled(mpq_class(-5, 3)), g.scaled(mpq_class(-5, 3)));
    CHECK(q1 == q2);
    CHECK(q1 == q3);
    CHECK(arf::gcd(q1.num(), q1.den()).is_one());
    CHECK(q1.den().leading_coeff() == 1);
  }
}

TEST_CASE("pdiff is linear, Leibniz and commuting") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    MPoly p1 = random_poly(rng), q1 = random_poly(rng), p2 = random_poly(rng), q2 = random_poly(rng);
    if (q1.is_zero() || q2.is_zero()) continue;
    RatFn f(p1, q1), g(p2, q2);
    for (int v = 0; v < 4; ++v) {
      CHECK((f + g).pdiff(v) == f.pdiff(v) + g.pdiff(v));
      CHECK((f * g).pdiff(v) == f.pdiff(v) * g + f * g.pdiff(v));
      for (int w = 0; w < 4; ++w) CHECK(f.pdiff(v).pdiff(w) == f.pdiff(w).pdiff(v));
    }
  }
}
