#pragma once

#include <optional>
#include <span>
#include <string>

#include "arfinsler/mpoly.hpp"

namespace arf {

/// Reduced quotient num/den of polynomials in x1..xn, y1..yn.
///
/// Canonical form: gcd(num, den) = 1 and the grlex-leading coefficient of
/// den is 1. Zero is 0/1. Equality is therefore componentwise.
class RatFn {
 public:
  RatFn() : num_(0), den_(0, mpq_class(1)) {}
  explicit RatFn(int dim) : num_(dim), den_(dim, mpq_class(1)) {}
  RatFn(int dim, const mpq_class& c) : num_(dim, c), den_(dim, mpq_class(1)) {}
  /// p / 1.
  explicit RatFn(MPoly p);
  /// Reduces num/den; throws DivisionByZero when den = 0.
  RatFn(MPoly num, MPoly den);

  static RatFn x(int dim, int i) { return RatFn(MPoly::x(dim, i)); }
  static RatFn y(int dim, int i) { return RatFn(MPoly::y(dim, i)); }

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  int dim() const { return num_.is_constant() ? den_.dim() : num_.dim(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// True when no fiber variable y occurs.
  bool is_y_free() const;
  /// True when no base variable x occurs.
  bool is_x_free() const;
  mpq_class constant_value() const { return num_.constant_value(); }

  RatFn operator-() const;
  friend RatFn operator+(const RatFn& a, const RatFn& b);
  friend RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }
  friend RatFn operator*(const RatFn& a, const RatFn& b);
  friend RatFn operator/(const RatFn& a, const RatFn& b) { return a * b.inv(); }
  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
  RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
  RatFn scaled(const mpq_class& c) const;

  /// Throws DivisionByZero on zero.
  RatFn inv() const;
  RatFn pow(int e) const;
  /// Partial derivative with respect to raw variable v (0..2n-1).
  RatFn pdiff(int v) const;
  /// d/dx_i, 1-based.
  RatFn dx(int i) const { return pdiff(i - 1); }
  /// d/dy_i, 1-based.
  RatFn dy(int i) const { return pdiff(dim() + i - 1); }

  /// Exact value at a rational point of 2n coordinates.
  mpq_class eval(std::span<const mpq_class> point) const;

  /// Square root inside Q(x,y), if one exists.
  std::optional<RatFn> sqrt() const;

  std::string str() const;

  friend bool operator==(const RatFn& a, const RatFn& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

 private:
  struct Reduced {};
  RatFn(MPoly num, MPoly den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}
  static RatFn normalized(MPoly num, MPoly den);

  MPoly num_;
  MPoly den_;
};

inline RatFn operator*(const mpq_class& c, const RatFn& f) { return f.scaled(c); }

/// Degree d with y^i d/dy^i f = d f, or nullopt when f is not y-homogeneous.
/// Throws ZeroInput for f = 0.
std::optional<int> y_homogeneity_degree(const RatFn& f);

/// Euler operator y^i d/dy^i applied to a polynomial.
MPoly euler_y(const MPoly& p);

}  // namespace arf
