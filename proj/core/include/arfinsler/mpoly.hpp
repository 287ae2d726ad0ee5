#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace arf {

/// Exponent vector packed one byte per variable; variable v lives in byte v.
///
/// For dimension n the variables are x1..xn (indices 0..n-1) followed by
/// y1..yn (indices n..2n-1), so at most 8 variables (n <= 4) fit. Exponents
/// are kept below 128, which lets products and quotients work on the packed
/// word without carries.
class Monomial {
 public:
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxExponent = 127;

  constexpr Monomial() = default;
  explicit constexpr Monomial(std::uint64_t bits) : bits_(bits) {}

  static Monomial variable(int v, int e = 1);

  std::uint64_t bits() const { return bits_; }
  int exponent(int v) const { return static_cast<int>((bits_ >> (8 * v)) & 0xFFu); }
  int degree() const;
  bool is_one() const { return bits_ == 0; }

  bool divides(Monomial other) const;
  Monomial operator*(Monomial o) const;
  /// Requires o.divides(*this).
  Monomial operator/(Monomial o) const { return Monomial(bits_ - o.bits_); }
  Monomial min(Monomial o) const;

  friend bool operator==(Monomial a, Monomial b) { return a.bits_ == b.bits_; }
  friend bool operator!=(Monomial a, Monomial b) { return a.bits_ != b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

/// Graded lexicographic order with x1 < ... < xn < y1 < ... < yn.
inline bool grlex_less(Monomial a, Monomial b) {
  int da = a.degree(), db = b.degree();
  return da != db ? da < db : a.bits() < b.bits();
}

struct Term {
  Monomial mono;
  mpq_class coeff;
};

/// Sparse multivariate polynomial over Q in the 2n variables x1..xn, y1..yn.
///
/// Terms are stored strictly decreasing in grlex order and never carry a zero
/// coefficient, so equality is structural.
class MPoly {
 public:
  MPoly() = default;
  explicit MPoly(int dim) : dim_(dim) {}
  MPoly(int dim, const mpq_class& c);

  /// Raw variable index v in 0..2n-1.
  static MPoly var(int dim, int v, int e = 1);
  /// 1-based base coordinate x_i.
  static MPoly x(int dim, int i) { return var(dim, i - 1); }
  /// 1-based fiber coordinate y_i.
  static MPoly y(int dim, int i) { return var(dim, dim + i - 1); }
  static MPoly monomial(int dim, Monomial m, mpq_class c);
  /// Sorts, merges equal monomials and drops zeros.
  static MPoly from_terms(int dim, std::vector<Term> terms);

  int dim() const { return dim_; }
  int num_vars() const { return 2 * dim_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_one() const;
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading_term() const { return terms_.front(); }
  const mpq_class& leading_coeff() const { return terms_.front().coeff; }
  mpq_class constant_value() const;

  int degree_in(int v) const;
  int total_degree() const;
  /// Bit v set iff variable v occurs.
  std::uint32_t var_mask() const;
  /// Bytewise minimum over all monomials.
  Monomial monomial_content() const;

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);

  MPoly scaled(const mpq_class& c) const;
  MPoly mul_term(Monomial m, const mpq_class& c) const;
  /// Divides every monomial by m, which must divide all of them.
  MPoly div_monomial(Monomial m) const;
  MPoly pow(int e) const;
  MPoly derivative(int v) const;
  /// Scaled so the grlex-leading coefficient is 1 (zero stays zero).
  MPoly monic() const;
  /// Scaled to integer coefficients with gcd 1 and positive leading coefficient.
  MPoly primitive() const;

  /// Evaluate at a full point of 2n rationals.
  mpq_class eval(std::span<const mpq_class> point) const;
  /// Substitute a value for one variable.
  MPoly substitute(int v, const mpq_class& value) const;

  std::string str() const;

  friend bool operator==(const MPoly& a, const MPoly& b);
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

 private:
  friend class MPolyBuilder;
  int dim_ = 0;
  std::vector<Term> terms_;
};

/// Name of raw variable v for dimension n: x1.. or y1..
std::string var_name(int dim, int v);

/// Returns a / b when b divides a exactly, nullopt otherwise.
std::optional<MPoly> divide_exact(const MPoly& a, const MPoly& b);

/// Greatest common divisor, monic under grlex; gcd(p, 0) = monic(p).
MPoly gcd(const MPoly& a, const MPoly& b);

/// Coefficients of p as a polynomial in variable v: result[k] multiplies v^k.
std::vector<MPoly> coefficients_in(const MPoly& p, int v);
MPoly from_coefficients(const std::vector<MPoly>& coeffs, int v, int dim);

/// Square root if p = q^2 for a polynomial q with rational coefficients.
std::optional<MPoly> sqrt_exact(const MPoly& p);

}  // namespace arf
