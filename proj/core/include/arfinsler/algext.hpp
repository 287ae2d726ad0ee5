#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arfinsler/ratfn.hpp"

namespace arf {

/// The kernel theta of a session: theta^m = A with A rational and y-homogeneous
/// of degree m, so theta is positively homogeneous of degree 1.
struct KernelDesc {
  int n = 0;
  int m = 1;
  RatFn A;
  /// d_i A / (m A) for the fiber (index i) and base (index n + i) derivations.
  std::vector<RatFn> log_derivative;

  bool same_as(const KernelDesc& o) const { return n == o.n && m == o.m && A == o.A; }
};

using Kernel = std::shared_ptr<const KernelDesc>;

/// Validates A and precomputes the logarithmic derivatives.
/// Throws ZeroInput for A = 0 and HomogeneityViolation unless A is y-homogeneous of degree m.
Kernel make_kernel(int n, int m, RatFn A);
/// Q(x,y) itself; theta = y1 keeps the homogeneity invariant.
Kernel trivial_kernel(int n);

/// Element of K = Q(x,y)[theta]/(theta^m - A), stored as m coefficients.
class FieldElem {
 public:
  FieldElem() = default;
  /// Zero of K.
  explicit FieldElem(Kernel k);
  FieldElem(Kernel k, const RatFn& c);
  FieldElem(Kernel k, std::vector<RatFn> coeffs);

  static FieldElem constant(Kernel k, const mpq_class& c);
  /// theta^e for any integer e, reduced.
  static FieldElem theta_pow(Kernel k, int e);
  /// c * theta^e.
  static FieldElem monomial(Kernel k, const RatFn& c, int e);

  const Kernel& kernel() const { return kernel_; }
  int n() const { return kernel_->n; }
  int m() const { return kernel_->m; }
  const std::vector<RatFn>& coeffs() const { return coeffs_; }
  const RatFn& coeff(int d) const { return coeffs_[d]; }

  bool is_zero() const;
  bool is_rational() const;
  /// Coefficient of theta^0; meaningful when is_rational().
  const RatFn& rational_part() const { return coeffs_[0]; }

  FieldElem operator-() const;
  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inv(); }
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }
  FieldElem scaled(const mpq_class& c) const;
  FieldElem scaled(const RatFn& c) const;

  /// Throws DivisionByZero on zero, NotInvertible when a zero divisor is found.
  FieldElem inv() const;
  FieldElem pow(int e) const;

  /// Fiber derivative d/dy^i, 0-based i.
  FieldElem pdiff_fiber(int i) const;
  /// Base derivative d/dx^i, 0-based i.
  FieldElem pdiff_base(int i) const;

  /// Exact coefficient values at a rational point (2n coordinates).
  std::vector<mpq_class> eval_coeffs(std::span<const mpq_class> point) const;

  std::string str() const;

  friend bool operator==(const FieldElem& a, const FieldElem& b);
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }

 private:
  void check_same(const FieldElem& o) const;

  Kernel kernel_;
  std::vector<RatFn> coeffs_;
};

FieldElem k_add(const FieldElem& a, const FieldElem& b);
FieldElem k_mul(const FieldElem& a, const FieldElem& b);
FieldElem k_neg(const FieldElem& a);
FieldElem k_inv(const FieldElem& a);
FieldElem k_pdiff_fiber(const FieldElem& a, int i);
FieldElem k_pdiff_base(const FieldElem& a, int i);

/// { d : coeffs[d] != 0 }.
std::set<int> theta_support(const FieldElem& a);

/// Common value of deg(coeffs[j]) + j over the support, or nullopt.
/// Throws ZeroInput for a = 0.
std::optional<int> k_homogeneity_degree(const FieldElem& a);

}  // namespace arf
