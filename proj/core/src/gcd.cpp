// Multivariate GCD over Q.
//
// Strategy: strip monomial content, bound the degree of the gcd in every
// variable from a modular univariate image, drop variables whose bound is
// zero (the gcd then divides every coefficient in that variable), try the
// cofactor-free candidates, and otherwise run the modular algorithm.

#include <algorithm>
#include <cstdint>

#include "arfinsler/errors.hpp"
#include "arfinsler/mpoly.hpp"
#include "modgcd.hpp"

namespace arf {

namespace {

constexpr std::uint64_t kPrime = 2305843009213693951ull;  // 2^61 - 1

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kPrime) r -= kPrime;
  return r;
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r >= kPrime ? r - kPrime : r;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul_mod(r, a);
    a = mul_mod(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

bool to_mod(const mpq_class& q, std::uint64_t& out) {
  std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
  std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (den == 0) return false;
  out = mul_mod(num, inv_mod(den));
  return true;
}

// Deterministic generator; results never depend on the values drawn, only
// the amount of work does.
std::uint64_t next_random() {
  thread_local std::uint64_t state = 0x9E3779B97F4A7C15ull;
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return (z ^ (z >> 31)) % (kPrime - 2) + 2;
}

using ModPoly = std::vector<std::uint64_t>;

void trim(ModPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Univariate image in variable v with the other variables set to `point`.
bool image(const MPoly& p, int v, const std::vector<std::uint64_t>& point, ModPoly& out) {
  out.assign(p.degree_in(v) + 1, 0);
  for (const auto& t : p.terms()) {
    std::uint64_t c;
    if (!to_mod(t.coeff, c)) return false;
    for (int w = 0; w < p.num_vars(); ++w) {
      if (w == v) continue;
      int e = t.mono.exponent(w);
      if (e) c = mul_mod(c, pow_mod(point[w], e));
    }
    auto& slot = out[t.mono.exponent(v)];
    slot = add_mod(slot, c);
  }
  trim(out);
  return true;
}

int mod_gcd_degree(ModPoly a, ModPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a <- a mod b
    std::uint64_t inv = inv_mod(b.back());
    while (a.size() >= b.size()) {
      std::uint64_t f = mul_mod(a.back(), inv);
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = sub_mod(a[shift + i], mul_mod(f, b[i]));
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : static_cast<int>(a.size()) - 1;
}

// Upper bound on deg_v gcd(a, b); exact for almost every evaluation point.
int degree_bound(const MPoly& a, const MPoly& b, int v) {
  const int da = a.degree_in(v), db = b.degree_in(v);
  std::vector<std::uint64_t> point(a.num_vars());
  ModPoly ia, ib;
  for (int attempt = 0; attempt < 3; ++attempt) {
    for (auto& r : point) r = next_random();
    if (!image(a, v, point, ia) || !image(b, v, point, ib)) continue;
    if (static_cast<int>(ia.size()) - 1 != da || static_cast<int>(ib.size()) - 1 != db) continue;
    return mod_gcd_degree(ia, ib);
  }
  return std::min(da, db);
}

MPoly gcd_many(std::vector<MPoly> polys, int dim) {
  std::erase_if(polys, [](const MPoly& p) { return p.is_zero(); });
  if (polys.empty()) return MPoly(dim);
  std::sort(polys.begin(), polys.end(), [](const MPoly& a, const MPoly& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.total_degree() < b.total_degree();
  });
  MPoly g = polys.front().monic();
  for (std::size_t i = 1; i < polys.size(); ++i) {
    if (g.is_constant()) break;
    g = gcd(g, polys[i]);
  }
  return g.is_constant() ? MPoly(dim, mpq_class(1)) : g;
}

// a, b nonzero, integer-primitive, free of monomial content.
MPoly gcd_core(const MPoly& a, const MPoly& b) {
  const int dim = a.dim() == b.dim() ? a.dim() : std::max(a.dim(), b.dim());
  const MPoly one(dim, mpq_class(1));
  if (a.is_constant() || b.is_constant()) return one;
  if (a == b) return a;
  const std::uint32_t ma = a.var_mask(), mb = b.var_mask();
  const std::uint32_t all = ma | mb;
  int bound[Monomial::kMaxVars] = {};
  bool any_positive = false;
  for (int v = 0; v < Monomial::kMaxVars; ++v) {
    if (!(all >> v & 1u)) continue;
    if (!(ma >> v & 1u) || !(mb >> v & 1u)) {
      bound[v] = 0;
    } else {
      bound[v] = degree_bound(a, b, v);
    }
    any_positive |= bound[v] > 0;
  }
  if (!any_positive) return one;

  for (int v = 0; v < Monomial::kMaxVars; ++v) {
    if (!(all >> v & 1u) || bound[v] != 0) continue;
    std::vector<MPoly> pieces = coefficients_in(a, v);
    auto more = coefficients_in(b, v);
    pieces.insert(pieces.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    return gcd_many(std::move(pieces), dim).primitive();
  }

  bool b_candidate = true, a_candidate = true;
  for (int v = 0; v < Monomial::kMaxVars; ++v) {
    if (!(all >> v & 1u)) continue;
    b_candidate &= bound[v] == b.degree_in(v);
    a_candidate &= bound[v] == a.degree_in(v);
  }
  if (b_candidate && divide_exact(a, b)) return b;
  if (a_candidate && divide_exact(b, a)) return a;

  return detail::modular_gcd(a, b);
}

}  // namespace

MPoly gcd(const MPoly& a, const MPoly& b) {
  const int dim = a.is_zero() ? b.dim() : (b.is_zero() ? a.dim() : (a.is_constant() ? b.dim() : a.dim()));
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return MPoly(dim, mpq_class(1));
  if (a.dim() != b.dim()) throw DimensionMismatch("gcd of polynomials with different dimensions");
  const Monomial ca = a.monomial_content(), cb = b.monomial_content();
  const Monomial common = ca.min(cb);
  MPoly pa = a.div_monomial(ca).primitive();
  MPoly pb = b.div_monomial(cb).primitive();
  MPoly g = gcd_core(pa, pb);
  return g.mul_term(common, mpq_class(1)).monic();
}

}  // namespace arf
