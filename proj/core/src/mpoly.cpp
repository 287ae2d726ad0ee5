#include "arfinsler/mpoly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "arfinsler/errors.hpp"

namespace arf {

namespace {

constexpr std::uint64_t kHighBits = 0x8080808080808080ull;

int join_dim(const MPoly& a, const MPoly& b) {
  if (a.dim() == b.dim()) return a.dim();
  if (a.is_constant()) return b.dim();
  if (b.is_constant()) return a.dim();
  throw DimensionMismatch("polynomials of dimension " + std::to_string(a.dim()) + " and " +
                          std::to_string(b.dim()));
}

bool term_greater(const Term& a, const Term& b) { return grlex_less(b.mono, a.mono); }

}  // namespace

Monomial Monomial::variable(int v, int e) {
  if (v < 0 || v >= kMaxVars) throw InvalidArgument("variable index out of range");
  if (e < 0 || e > kMaxExponent) throw ExponentOverflow("exponent out of range");
  return Monomial(static_cast<std::uint64_t>(e) << (8 * v));
}

int Monomial::degree() const {
  std::uint64_t t = (bits_ & 0x00FF00FF00FF00FFull) + ((bits_ >> 8) & 0x00FF00FF00FF00FFull);
  t = (t & 0x0000FFFF0000FFFFull) + ((t >> 16) & 0x0000FFFF0000FFFFull);
  t = (t & 0xFFFFFFFFull) + (t >> 32);
  return static_cast<int>(t);
}

bool Monomial::divides(Monomial other) const {
  return (((other.bits_ | kHighBits) - bits_) & kHighBits) == kHighBits;
}

Monomial Monomial::operator*(Monomial o) const {
  std::uint64_t r = bits_ + o.bits_;
  if (r & kHighBits) throw ExponentOverflow("monomial exponent exceeds 127");
  return Monomial(r);
}

Monomial Monomial::min(Monomial o) const {
  std::uint64_t r = 0;
  for (int v = 0; v < kMaxVars; ++v) {
    std::uint64_t a = (bits_ >> (8 * v)) & 0xFFu, b = (o.bits_ >> (8 * v)) & 0xFFu;
    r |= std::min(a, b) << (8 * v);
  }
  return Monomial(r);
}

std::string var_name(int dim, int v) {
  return v < dim ? "x" + std::to_string(v + 1) : "y" + std::to_string(v - dim + 1);
}

MPoly::MPoly(int dim, const mpq_class& c) : dim_(dim) {
  if (c != 0) terms_.push_back({Monomial(), c});
}

MPoly MPoly::var(int dim, int v, int e) {
  if (v < 0 || v >= 2 * dim) throw InvalidArgument("variable index out of range");
  MPoly p(dim);
  p.terms_.push_back({Monomial::variable(v, e), mpq_class(1)});
  return p;
}

MPoly MPoly::monomial(int dim, Monomial m, mpq_class c) {
  MPoly p(dim);
  if (c != 0) p.terms_.push_back({m, std::move(c)});
  return p;
}

MPoly MPoly::from_terms(int dim, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  MPoly p(dim);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
      if (p.terms_.back().coeff == 0) p.terms_.pop_back();
    } else if (t.coeff != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool MPoly::is_one() const {
  return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coeff == 1;
}

mpq_class MPoly::constant_value() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
  return 0;
}

int MPoly::degree_in(int v) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
  return d;
}

int MPoly::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

std::uint32_t MPoly::var_mask() const {
  std::uint64_t any = 0;
  for (const auto& t : terms_) any |= t.mono.bits();
  std::uint32_t mask = 0;
  for (int v = 0; v < Monomial::kMaxVars; ++v)
    if ((any >> (8 * v)) & 0xFFu) mask |= 1u << v;
  return mask;
}

Monomial MPoly::monomial_content() const {
  if (terms_.empty()) return Monomial();
  Monomial m = terms_.front().mono;
  for (const auto& t : terms_) {
    m = m.min(t.mono);
    if (m.is_one()) break;
  }
  return m;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  dim_ = join_dim(*this, o);
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) {
    terms_ = o.terms_;
    return *this;
  }
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    const Monomial a = terms_[i].mono, b = o.terms_[j].mono;
    if (a == b) {
      mpq_class c = terms_[i].coeff + o.terms_[j].coeff;
      if (c != 0) out.push_back({a, std::move(c)});
      ++i;
      ++j;
    } else if (grlex_less(b, a)) {
      out.push_back(std::move(terms_[i++]));
    } else {
      out.push_back(o.terms_[j++]);
    }
  }
  for (; i < terms_.size(); ++i) out.push_back(std::move(terms_[i]));
  for (; j < o.terms_.size(); ++j) out.push_back(o.terms_[j]);
  terms_ = std::move(out);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) { return *this += -o; }

MPoly operator*(const MPoly& a, const MPoly& b) {
  const int dim = join_dim(a, b);
  if (a.is_zero() || b.is_zero()) return MPoly(dim);
  if (a.size() == 1) return b.mul_term(a.terms_[0].mono, a.terms_[0].coeff);
  if (b.size() == 1) return a.mul_term(b.terms_[0].mono, b.terms_[0].coeff);
  std::unordered_map<std::uint64_t, std::size_t> slot;
  slot.reserve(a.size() * b.size());
  std::vector<Term> acc;
  acc.reserve(std::min<std::size_t>(a.size() * b.size(), 1u << 16));
  mpq_class prod;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Monomial m = ta.mono * tb.mono;
      prod = ta.coeff * tb.coeff;
      auto [it, inserted] = slot.try_emplace(m.bits(), acc.size());
      if (inserted)
        acc.push_back({m, prod});
      else
        acc[it->second].coeff += prod;
    }
  }
  MPoly r(dim);
  std::sort(acc.begin(), acc.end(), term_greater);
  r.terms_.reserve(acc.size());
  for (auto& t : acc)
    if (t.coeff != 0) r.terms_.push_back(std::move(t));
  return r;
}

MPoly& MPoly::operator*=(const MPoly& o) { return *this = *this * o; }

MPoly MPoly::scaled(const mpq_class& c) const {
  if (c == 0) return MPoly(dim_);
  MPoly r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

MPoly MPoly::mul_term(Monomial m, const mpq_class& c) const {
  if (c == 0) return MPoly(dim_);
  MPoly r(dim_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
  return r;
}

MPoly MPoly::div_monomial(Monomial m) const {
  if (m.is_one()) return *this;
  MPoly r(dim_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!m.divides(t.mono)) throw InvalidArgument("monomial does not divide polynomial");
    r.terms_.push_back({t.mono / m, t.coeff});
  }
  return r;
}

MPoly MPoly::pow(int e) const {
  if (e < 0) throw InvalidArgument("negative polynomial power");
  MPoly result(dim_, mpq_class(1));
  MPoly base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

MPoly MPoly::derivative(int v) const {
  std::vector<Term> out;
  const Monomial unit = Monomial::variable(v);
  for (const auto& t : terms_) {
    int e = t.mono.exponent(v);
    if (e == 0) continue;
    out.push_back({t.mono / unit, t.coeff * e});
  }
  // Dividing by one variable keeps grlex order among the surviving terms.
  MPoly r(dim_);
  r.terms_ = std::move(out);
  return r;
}

MPoly MPoly::monic() const {
  if (terms_.empty() || terms_.front().coeff == 1) return *this;
  mpq_class inv = 1 / terms_.front().coeff;
  return scaled(inv);
}

MPoly MPoly::primitive() const {
  if (terms_.empty()) return *this;
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& t : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  mpq_class factor(den_lcm, num_gcd);
  factor.canonicalize();
  if (terms_.front().coeff < 0) factor = -factor;
  if (factor == 1) return *this;
  return scaled(factor);
}

mpq_class MPoly::eval(std::span<const mpq_class> point) const {
  if (static_cast<int>(point.size()) < num_vars()) throw InvalidArgument("evaluation point too short");
  mpq_class sum = 0, term;
  for (const auto& t : terms_) {
    term = t.coeff;
    for (int v = 0; v < num_vars(); ++v) {
      int e = t.mono.exponent(v);
      for (int k = 0; k < e; ++k) term *= point[v];
    }
    sum += term;
  }
  return sum;
}

MPoly MPoly::substitute(int v, const mpq_class& value) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    int e = t.mono.exponent(v);
    mpq_class c = t.coeff;
    for (int k = 0; k < e; ++k) c *= value;
    out.push_back({Monomial(t.mono.bits() & ~(std::uint64_t{0xFF} << (8 * v))), c});
  }
  return from_terms(dim_, std::move(out));
}

std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    mpq_class c = t.coeff;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    bool wrote = false;
    if (c != 1 || t.mono.is_one()) {
      os << c.get_str();
      wrote = true;
    }
    for (int v = 0; v < num_vars(); ++v) {
      int e = t.mono.exponent(v);
      if (e == 0) continue;
      if (wrote) os << "*";
      os << var_name(dim_, v);
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (!a.terms_.empty() && a.dim_ != b.dim_ && !(a.is_constant() && b.is_constant())) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

std::optional<MPoly> divide_exact(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  const int dim = a.is_zero() ? b.dim() : a.dim();
  if (a.is_zero()) return MPoly(dim);
  if (b.size() == 1) {
    const Term& lt = b.leading_term();
    MPoly q(dim);
    std::vector<Term> out;
    out.reserve(a.size());
    mpq_class inv = 1 / lt.coeff;
    for (const auto& t : a.terms()) {
      if (!lt.mono.divides(t.mono)) return std::nullopt;
      out.push_back({t.mono / lt.mono, t.coeff * inv});
    }
    return MPoly::from_terms(dim, std::move(out));
  }
  // Quick rejections: total degree and per-variable degree.
  if (b.total_degree() > a.total_degree()) return std::nullopt;
  for (int v = 0; v < std::max(a.num_vars(), b.num_vars()); ++v)
    if (b.degree_in(v) > a.degree_in(v)) return std::nullopt;

  auto cmp = [](std::uint64_t x, std::uint64_t y) { return grlex_less(Monomial(y), Monomial(x)); };
  std::map<std::uint64_t, mpq_class, decltype(cmp)> rem(cmp);
  for (const auto& t : a.terms()) rem.emplace(t.mono.bits(), t.coeff);
  const Term& lb = b.leading_term();
  const mpq_class inv = 1 / lb.coeff;
  std::vector<Term> quot;
  const Monomial lowest_b = b.terms().back().mono;
  while (!rem.empty()) {
    auto it = rem.begin();
    Monomial lm(it->first);
    if (!lb.mono.divides(lm)) return std::nullopt;
    Monomial qm = lm / lb.mono;
    mpq_class qc = it->second * inv;
    rem.erase(it);
    for (std::size_t k = 1; k < b.size(); ++k) {
      const Term& tb = b.terms()[k];
      auto [pos, inserted] = rem.try_emplace((qm * tb.mono).bits());
      pos->second -= qc * tb.coeff;
      if (pos->second == 0) rem.erase(pos);
    }
    quot.push_back({qm, std::move(qc)});
    // Every remaining monomial must still be reachable by a quotient term.
    if (!rem.empty()) {
      Monomial low(std::prev(rem.end())->first);
      if (grlex_less(low, lowest_b)) return std::nullopt;
    }
  }
  MPoly q(dim);
  return MPoly::from_terms(dim, std::move(quot));
}

std::vector<MPoly> coefficients_in(const MPoly& p, int v) {
  const int d = p.degree_in(v);
  std::vector<std::vector<Term>> buckets(d + 1);
  const std::uint64_t mask = ~(std::uint64_t{0xFF} << (8 * v));
  for (const auto& t : p.terms()) buckets[t.mono.exponent(v)].push_back({Monomial(t.mono.bits() & mask), t.coeff});
  std::vector<MPoly> out;
  out.reserve(d + 1);
  for (auto& b : buckets) out.push_back(MPoly::from_terms(p.dim(), std::move(b)));
  return out;
}

MPoly from_coefficients(const std::vector<MPoly>& coeffs, int v, int dim) {
  std::vector<Term> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    Monomial vk = Monomial::variable(v, static_cast<int>(k));
    for (const auto& t : coeffs[k].terms()) terms.push_back({t.mono * vk, t.coeff});
  }
  return MPoly::from_terms(dim, std::move(terms));
}

std::optional<MPoly> sqrt_exact(const MPoly& p) {
  if (p.is_zero()) return p;
  const Term& lt = p.leading_term();
  for (int v = 0; v < Monomial::kMaxVars; ++v)
    if (lt.mono.exponent(v) % 2) return std::nullopt;
  if (lt.coeff < 0) return std::nullopt;
  mpz_class rn, rd;
  if (!mpz_perfect_square_p(lt.coeff.get_num_mpz_t()) || !mpz_perfect_square_p(lt.coeff.get_den_mpz_t()))
    return std::nullopt;
  mpz_sqrt(rn.get_mpz_t(), lt.coeff.get_num_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), lt.coeff.get_den_mpz_t());
  Monomial half(lt.mono.bits() >> 1 & 0x7F7F7F7F7F7F7F7Full);
  // Halving each byte: exponents are even so the shifted-in bit is zero.
  const Term lead{half, mpq_class(rn, rd)};
  MPoly root = MPoly::monomial(p.dim(), lead.mono, lead.coeff);
  MPoly rem = p - root * root;
  const mpq_class two_lead = 2 * lead.coeff;
  while (!rem.is_zero()) {
    const Term& r = rem.leading_term();
    if (!lead.mono.divides(r.mono)) return std::nullopt;
    Monomial m = r.mono / lead.mono;
    // Root terms must stay strictly below the leading root monomial.
    if (!grlex_less(m, lead.mono)) return std::nullopt;
    MPoly t = MPoly::monomial(p.dim(), m, r.coeff / two_lead);
    rem -= t * (root + root + t);
    root += t;
  }
  return root;
}

}  // namespace arf
