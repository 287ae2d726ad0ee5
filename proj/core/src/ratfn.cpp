#include "arfinsler/ratfn.hpp"

#include "arfinsler/errors.hpp"

namespace arf {

namespace {

// Fiber variables occupy raw indices n..2n-1.
std::uint32_t fiber_mask(int dim) { return ((1u << (2 * dim)) - 1u) & ~((1u << dim) - 1u); }
std::uint32_t base_mask(int dim) { return (1u << dim) - 1u; }

MPoly exact_div(const MPoly& a, const MPoly& b) {
  if (b.is_one()) return a;
  auto q = divide_exact(a, b);
  if (!q) throw InternalInconsistency("inexact division while reducing a rational function");
  return *std::move(q);
}

}  // namespace

RatFn::RatFn(MPoly p) : num_(std::move(p)), den_(num_.dim(), mpq_class(1)) {}

RatFn::RatFn(MPoly num, MPoly den) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  *this = normalized(std::move(num), std::move(den));
}

RatFn RatFn::normalized(MPoly num, MPoly den) {
  const int dim = num.is_constant() ? den.dim() : num.dim();
  if (num.is_zero()) return RatFn(dim);
  if (!den.is_constant()) {
    MPoly g = gcd(num, den);
    if (!g.is_constant()) {
      num = exact_div(num, g);
      den = exact_div(den, g);
    }
  }
  mpq_class lc = den.leading_coeff();
  if (lc != 1) {
    mpq_class inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  if (den.is_constant()) den = MPoly(dim, mpq_class(1));
  return RatFn(std::move(num), std::move(den), Reduced{});
}

bool RatFn::is_y_free() const {
  const int n = dim();
  return ((num_.var_mask() | den_.var_mask()) & fiber_mask(n)) == 0;
}

bool RatFn::is_x_free() const {
  const int n = dim();
  return ((num_.var_mask() | den_.var_mask()) & base_mask(n)) == 0;
}

RatFn RatFn::operator-() const { return RatFn(-num_, den_, Reduced{}); }

RatFn operator+(const RatFn& a, const RatFn& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    MPoly num = a.num_ + b.num_;
    if (a.den_.is_constant()) return RatFn(std::move(num), a.den_, RatFn::Reduced{});
    return RatFn::normalized(std::move(num), a.den_);
  }
  if (a.den_.is_constant() && b.den_.is_constant())
    return RatFn(a.num_ + b.num_, a.den_, RatFn::Reduced{});
  if (a.den_.is_constant())
    return RatFn(a.num_ * b.den_ + b.num_, b.den_, RatFn::Reduced{});
  if (b.den_.is_constant())
    return RatFn(a.num_ + b.num_ * a.den_, a.den_, RatFn::Reduced{});
  // Henrici: with g = gcd(b1, b2), only g can share factors with the new numerator.
  MPoly g = gcd(a.den_, b.den_);
  MPoly bd = exact_div(a.den_, g), dd = exact_div(b.den_, g);
  MPoly num = a.num_ * dd + b.num_ * bd;
  MPoly den = bd * b.den_;
  if (num.is_zero()) return RatFn(a.dim());
  if (!g.is_constant()) {
    MPoly h = gcd(num, g);
    if (!h.is_constant()) {
      num = exact_div(num, h);
      den = exact_div(den, h);
    }
  }
  mpq_class lc = den.leading_coeff();
  if (lc != 1) {
    mpq_class inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return RatFn(std::move(num), std::move(den), RatFn::Reduced{});
}

RatFn operator*(const RatFn& a, const RatFn& b) {
  if (a.is_zero() || b.is_zero()) return RatFn(a.is_zero() ? a.dim() : b.dim());
  if (a.is_constant()) return b.scaled(a.constant_value());
  if (b.is_constant()) return a.scaled(b.constant_value());
  MPoly an = a.num_, bn = b.num_, ad = a.den_, bd = b.den_;
  if (!bd.is_constant() && !an.is_constant()) {
    MPoly g = gcd(an, bd);
    if (!g.is_constant()) {
      an = exact_div(an, g);
      bd = exact_div(bd, g);
    }
  }
  if (!ad.is_constant() && !bn.is_constant()) {
    MPoly g = gcd(bn, ad);
    if (!g.is_constant()) {
      bn = exact_div(bn, g);
      ad = exact_div(ad, g);
    }
  }
  MPoly num = an * bn, den = ad * bd;
  mpq_class lc = den.leading_coeff();
  if (lc != 1) {
    mpq_class inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  if (den.is_constant()) den = MPoly(num.dim(), mpq_class(1));
  return RatFn(std::move(num), std::move(den), RatFn::Reduced{});
}

RatFn RatFn::scaled(const mpq_class& c) const {
  if (c == 0) return RatFn(dim());
  return RatFn(num_.scaled(c), den_, Reduced{});
}

RatFn RatFn::inv() const {
  if (is_zero()) throw DivisionByZero("inverse of zero rational function");
  mpq_class lc = num_.leading_coeff();
  mpq_class inv = 1 / lc;
  MPoly den = num_.scaled(inv);
  MPoly num = den_.scaled(inv);
  if (den.is_constant()) den = MPoly(dim(), mpq_class(1));
  return RatFn(std::move(num), std::move(den), Reduced{});
}

RatFn RatFn::pow(int e) const {
  if (e < 0) return inv().pow(-e);
  // Powers of coprime polynomials stay coprime.
  MPoly n = num_.pow(e), d = den_.pow(e);
  return RatFn(std::move(n), std::move(d), Reduced{});
}

RatFn RatFn::pdiff(int v) const {
  MPoly dn = num_.derivative(v);
  if (den_.is_constant()) return RatFn(std::move(dn), den_, Reduced{});
  MPoly dd = den_.derivative(v);
  if (dd.is_zero()) return normalized(std::move(dn), den_);
  // (n' d - n d') / d^2 with g = gcd(d, d'): only g can cancel against the result.
  MPoly g = gcd(den_, dd);
  MPoly dq = exact_div(den_, g), ddq = exact_div(dd, g);
  MPoly num = dn * dq - num_ * ddq;
  MPoly den = den_ * dq;
  if (num.is_zero()) return RatFn(dim());
  if (!g.is_constant()) {
    MPoly h = gcd(num, g);
    if (!h.is_constant()) {
      num = exact_div(num, h);
      den = exact_div(den, h);
    }
  }
  mpq_class lc = den.leading_coeff();
  if (lc != 1) {
    mpq_class inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return RatFn(std::move(num), std::move(den), Reduced{});
}

mpq_class RatFn::eval(std::span<const mpq_class> point) const {
  mpq_class d = den_.eval(point);
  if (d == 0) throw DivisionByZero("denominator vanishes at evaluation point");
  return num_.eval(point) / d;
}

std::optional<RatFn> RatFn::sqrt() const {
  auto n = sqrt_exact(num_);
  if (!n) return std::nullopt;
  auto d = sqrt_exact(den_);
  if (!d) return std::nullopt;
  return RatFn(*n, *d);
}

std::string RatFn::str() const {
  if (den_.is_one()) return num_.str();
  const bool num_simple = num_.size() == 1;
  std::string n = num_simple ? num_.str() : "(" + num_.str() + ")";
  std::string d = den_.size() == 1 && den_.leading_term().mono.degree() <= 1 &&
                          den_.leading_coeff() == 1
                      ? den_.str()
                      : "(" + den_.str() + ")";
  return n + "/" + d;
}

MPoly euler_y(const MPoly& p) {
  std::vector<Term> out;
  out.reserve(p.size());
  const int n = p.dim();
  for (const auto& t : p.terms()) {
    int d = 0;
    for (int i = 0; i < n; ++i) d += t.mono.exponent(n + i);
    if (d) out.push_back({t.mono, t.coeff * d});
  }
  return MPoly::from_terms(n, std::move(out));
}

std::optional<int> y_homogeneity_degree(const RatFn& f) {
  if (f.is_zero()) throw ZeroInput("homogeneity degree of zero");
  const int n = f.dim();
  auto ydeg = [n](Monomial m) {
    int d = 0;
    for (int i = 0; i < n; ++i) d += m.exponent(n + i);
    return d;
  };
  const int d = ydeg(f.num().leading_term().mono) - ydeg(f.den().leading_term().mono);
  // Euler test on the fraction: E(p) q - p E(q) = d p q.
  const MPoly& p = f.num();
  const MPoly& q = f.den();
  MPoly lhs = euler_y(p) * q - p * euler_y(q);
  MPoly rhs = (p * q).scaled(mpq_class(d));
  if (lhs == rhs) return d;
  return std::nullopt;
}

}  // namespace arf
