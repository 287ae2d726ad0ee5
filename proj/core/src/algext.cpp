#include "arfinsler/algext.hpp"

#include "arfinsler/errors.hpp"

namespace arf {

Kernel make_kernel(int n, int m, RatFn A) {
  if (m < 1) throw InvalidArgument("kernel order must be positive");
  if (A.is_zero()) throw ZeroInput("kernel defining element is zero");
  auto deg = y_homogeneity_degree(A);
  if (!deg || *deg != m)
    throw HomogeneityViolation("kernel defining element must be y-homogeneous of degree " + std::to_string(m));
  auto k = std::make_shared<KernelDesc>();
  k->n = n;
  k->m = m;
  k->A = std::move(A);
  const RatFn mA = k->A.scaled(mpq_class(m));
  const RatFn inv_mA = mA.inv();
  k->log_derivative.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    k->log_derivative[i] = k->A.dy(i + 1) * inv_mA;
    k->log_derivative[n + i] = k->A.dx(i + 1) * inv_mA;
  }
  return k;
}

Kernel trivial_kernel(int n) { return make_kernel(n, 1, RatFn::y(n, 1)); }

FieldElem::FieldElem(Kernel k) : kernel_(std::move(k)) {
  coeffs_.assign(kernel_->m, RatFn(kernel_->n));
}

FieldElem::FieldElem(Kernel k, const RatFn& c) : FieldElem(std::move(k)) { coeffs_[0] = c; }

FieldElem::FieldElem(Kernel k, std::vector<RatFn> coeffs) : kernel_(std::move(k)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != kernel_->m) throw DimensionMismatch("coefficient count differs from kernel order");
}

FieldElem FieldElem::constant(Kernel k, const mpq_class& c) {
  const int n = k->n;
  return FieldElem(std::move(k), RatFn(n, c));
}

FieldElem FieldElem::monomial(Kernel k, const RatFn& c, int e) {
  const int m = k->m;
  int q = e >= 0 ? e / m : -((-e + m - 1) / m);
  int r = e - q * m;
  FieldElem out(k);
  out.coeffs_[r] = q == 0 ? c : c * k->A.pow(q);
  return out;
}

FieldElem FieldElem::theta_pow(Kernel k, int e) {
  const int n = k->n;
  return monomial(std::move(k), RatFn(n, mpq_class(1)), e);
}

bool FieldElem::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

bool FieldElem::is_rational() const {
  for (std::size_t d = 1; d < coeffs_.size(); ++d)
    if (!coeffs_[d].is_zero()) return false;
  return true;
}

void FieldElem::check_same(const FieldElem& o) const {
  if (kernel_ == o.kernel_) return;
  if (!kernel_ || !o.kernel_ || !kernel_->same_as(*o.kernel_))
    throw KernelMismatch("field elements belong to different kernels");
}

FieldElem FieldElem::operator-() const {
  FieldElem r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  a.check_same(b);
  FieldElem r = a;
  for (std::size_t d = 0; d < r.coeffs_.size(); ++d) r.coeffs_[d] += b.coeffs_[d];
  return r;
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  a.check_same(b);
  FieldElem r = a;
  for (std::size_t d = 0; d < r.coeffs_.size(); ++d) r.coeffs_[d] -= b.coeffs_[d];
  return r;
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  a.check_same(b);
  const int m = a.m();
  FieldElem r(a.kernel_);
  if (m == 1) {
    r.coeffs_[0] = a.coeffs_[0] * b.coeffs_[0];
    return r;
  }
  // Accumulate the wrapped part separately so A multiplies once per slot.
  std::vector<RatFn> wrap(m, RatFn(a.n()));
  bool any_wrap = false;
  for (int i = 0; i < m; ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (int j = 0; j < m; ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      RatFn p = a.coeffs_[i] * b.coeffs_[j];
      if (i + j < m) {
        r.coeffs_[i + j] += p;
      } else {
        wrap[i + j - m] += p;
        any_wrap = true;
      }
    }
  }
  if (any_wrap)
    for (int d = 0; d < m; ++d)
      if (!wrap[d].is_zero()) r.coeffs_[d] += wrap[d] * a.kernel_->A;
  return r;
}

FieldElem FieldElem::scaled(const mpq_class& c) const {
  FieldElem r = *this;
  for (auto& x : r.coeffs_) x = x.scaled(c);
  return r;
}

FieldElem FieldElem::scaled(const RatFn& c) const {
  FieldElem r = *this;
  for (auto& x : r.coeffs_)
    if (!x.is_zero()) x = x * c;
  return r;
}

namespace {

// Polynomials in t over Q(x,y), index = power of t.
using TPoly = std::vector<RatFn>;

void trim(TPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

TPoly sub(const TPoly& a, const TPoly& b, int dim) {
  TPoly r(std::max(a.size(), b.size()), RatFn(dim));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

TPoly mul(const TPoly& a, const TPoly& b, int dim) {
  if (a.empty() || b.empty()) return {};
  TPoly r(a.size() + b.size() - 1, RatFn(dim));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!a[i].is_zero() && !b[j].is_zero()) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

void divmod(const TPoly& a, const TPoly& b, TPoly& q, TPoly& r, int dim) {
  r = a;
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, RatFn(dim));
  const RatFn lead_inv = b.back().inv();
  while (!r.empty() && r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    RatFn f = r.back() * lead_inv;
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
    r.pop_back();
    trim(r);
  }
  trim(q);
}

}  // namespace

FieldElem FieldElem::inv() const {
  if (is_zero()) throw DivisionByZero("inverse of zero field element");
  const int m = this->m();
  const int dim = n();
  int support = 0, last = -1;
  for (int d = 0; d < m; ++d)
    if (!coeffs_[d].is_zero()) {
      ++support;
      last = d;
    }
  if (support == 1) return monomial(kernel_, coeffs_[last].inv(), -last);
  if (m == 2) {
    // (c0 + c1 t)^-1 = (c0 - c1 t) / (c0^2 - c1^2 A)
    RatFn norm = coeffs_[0] * coeffs_[0] - coeffs_[1] * coeffs_[1] * kernel_->A;
    if (norm.is_zero()) throw NotInvertible("element is a zero divisor: theta^2 - A is reducible");
    RatFn ni = norm.inv();
    return FieldElem(kernel_, std::vector<RatFn>{coeffs_[0] * ni, -(coeffs_[1] * ni)});
  }
  // Extended Euclid on (t^m - A, a(t)), tracking the cofactor of a.
  TPoly r0(m + 1, RatFn(dim));
  r0[0] = -kernel_->A;
  r0[m] = RatFn(dim, mpq_class(1));
  TPoly r1 = coeffs_;
  trim(r1);
  TPoly s0, s1{RatFn(dim, mpq_class(1))};
  while (r1.size() > 1) {
    TPoly q, r;
    divmod(r0, r1, q, r, dim);
    TPoly s = sub(s0, mul(q, s1, dim), dim);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    if (r1.empty()) throw NotInvertible("element is a zero divisor: theta^m - A is reducible");
  }
  const RatFn scale = r1[0].inv();
  FieldElem out(kernel_);
  for (std::size_t d = 0; d < s1.size(); ++d) out.coeffs_[d] = s1[d] * scale;
  return out;
}

FieldElem FieldElem::pow(int e) const {
  if (e < 0) return inv().pow(-e);
  FieldElem result = constant(kernel_, 1), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

FieldElem FieldElem::pdiff_fiber(int i) const {
  FieldElem r(kernel_);
  const RatFn& L = kernel_->log_derivative[i];
  for (int d = 0; d < m(); ++d) {
    if (coeffs_[d].is_zero()) continue;
    RatFn c = coeffs_[d].dy(i + 1);
    if (d) c += coeffs_[d] * L.scaled(mpq_class(d));
    r.coeffs_[d] = std::move(c);
  }
  return r;
}

FieldElem FieldElem::pdiff_base(int i) const {
  FieldElem r(kernel_);
  const RatFn& L = kernel_->log_derivative[n() + i];
  for (int d = 0; d < m(); ++d) {
    if (coeffs_[d].is_zero()) continue;
    RatFn c = coeffs_[d].dx(i + 1);
    if (d && !L.is_zero()) c += coeffs_[d] * L.scaled(mpq_class(d));
    r.coeffs_[d] = std::move(c);
  }
  return r;
}

std::vector<mpq_class> FieldElem::eval_coeffs(std::span<const mpq_class> point) const {
  std::vector<mpq_class> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.is_zero() ? mpq_class(0) : c.eval(point));
  return out;
}

std::string FieldElem::str() const {
  std::string out;
  for (int d = 0; d < m(); ++d) {
    if (coeffs_[d].is_zero()) continue;
    if (!out.empty()) out += " + ";
    std::string c = coeffs_[d].str();
    if (d == 0) {
      out += c;
      continue;
    }
    std::string t = d == 1 ? "theta" : "theta^" + std::to_string(d);
    if (coeffs_[d].is_one())
      out += t;
    else
      out += "(" + c + ")*" + t;
  }
  return out.empty() ? "0" : out;
}

bool operator==(const FieldElem& a, const FieldElem& b) {
  a.check_same(b);
  return a.coeffs_ == b.coeffs_;
}

FieldElem k_add(const FieldElem& a, const FieldElem& b) { return a + b; }
FieldElem k_mul(const FieldElem& a, const FieldElem& b) { return a * b; }
FieldElem k_neg(const FieldElem& a) { return -a; }
FieldElem k_inv(const FieldElem& a) { return a.inv(); }
FieldElem k_pdiff_fiber(const FieldElem& a, int i) { return a.pdiff_fiber(i); }
FieldElem k_pdiff_base(const FieldElem& a, int i) { return a.pdiff_base(i); }

std::set<int> theta_support(const FieldElem& a) {
  std::set<int> s;
  for (int d = 0; d < a.m(); ++d)
    if (!a.coeff(d).is_zero()) s.insert(d);
  return s;
}

std::optional<int> k_homogeneity_degree(const FieldElem& a) {
  if (a.is_zero()) throw ZeroInput("homogeneity degree of zero");
  std::optional<int> deg;
  for (int d = 0; d < a.m(); ++d) {
    if (a.coeff(d).is_zero()) continue;
    auto h = y_homogeneity_degree(a.coeff(d));
    if (!h) return std::nullopt;
    if (deg && *deg != *h + d) return std::nullopt;
    deg = *h + d;
  }
  return deg;
}

}  // namespace arf
