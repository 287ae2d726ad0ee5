// Brown's dense modular GCD.
//
// Active variables are repacked so that packed comparison is lex with the
// base (univariate) variable in the top byte. Modulo a prime, the lowest
// byte is evaluated at random points, the images are gcd'ed recursively,
// scaled by the gcd of the leading coefficients, and Newton-interpolated
// until a division test succeeds. Images over several primes are combined
// by CRT until the integer result stabilizes and divides both inputs.

#include "modgcd.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>

#include "arfinsler/errors.hpp"

namespace arf::detail {

namespace {

using u64 = std::uint64_t;

struct Fp {
  u64 p;
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }
  u64 add(u64 a, u64 b) const {
    u64 r = a + b;
    return r >= p ? r - p : r;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
};

// ---- univariate polynomials mod p, index = exponent ----

using UPoly = std::vector<u64>;

void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int udeg(const UPoly& a) { return static_cast<int>(a.size()) - 1; }

u64 ueval(const UPoly& a, u64 t, const Fp& F) {
  u64 r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = F.add(F.mul(r, t), *it);
  return r;
}

UPoly umonic(UPoly a, const Fp& F) {
  if (a.empty()) return a;
  u64 inv = F.inv(a.back());
  for (auto& c : a) c = F.mul(c, inv);
  return a;
}

UPoly urem(UPoly a, const UPoly& b, const Fp& F) {
  u64 inv = F.inv(b.back());
  while (a.size() >= b.size()) {
    u64 f = F.mul(a.back(), inv);
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = F.sub(a[shift + i], F.mul(f, b[i]));
    trim(a);
  }
  return a;
}

UPoly ugcd(UPoly a, UPoly b, const Fp& F) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = urem(std::move(a), b, F);
    a = std::move(b);
    b = std::move(r);
  }
  return umonic(std::move(a), F);
}

UPoly umul(const UPoly& a, const UPoly& b, const Fp& F) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  return r;
}

// ---- multivariate polynomials mod p on packed monomials ----

struct PTerm {
  u64 m;
  u64 c;
};
using PPoly = std::vector<PTerm>;  // strictly decreasing m, nonzero c

int byte_of(u64 m, int v) { return static_cast<int>((m >> (8 * v)) & 0xFFu); }
u64 clear_byte(u64 m, int v) { return m & ~(u64{0xFF} << (8 * v)); }

bool mono_divides(u64 d, u64 m) {
  for (int v = 0; v < 8; ++v)
    if (byte_of(d, v) > byte_of(m, v)) return false;
  return true;
}

void normalize(PPoly& a, const Fp& F) {
  std::sort(a.begin(), a.end(), [](const PTerm& x, const PTerm& y) { return x.m > y.m; });
  std::size_t w = 0;
  for (std::size_t r = 0; r < a.size();) {
    u64 m = a[r].m, c = 0;
    for (; r < a.size() && a[r].m == m; ++r) c = F.add(c, a[r].c);
    if (c) a[w++] = {m, c};
  }
  a.resize(w);
}

PPoly pmul(const PPoly& a, const PPoly& b, const Fp& F) {
  PPoly r;
  r.reserve(a.size() * b.size());
  for (const auto& s : a)
    for (const auto& t : b) r.push_back({s.m + t.m, F.mul(s.c, t.c)});
  normalize(r, F);
  return r;
}

PPoly pscale(PPoly a, u64 c, const Fp& F) {
  for (auto& t : a) t.c = F.mul(t.c, c);
  return a;
}

PPoly pmonic(PPoly a, const Fp& F) { return a.empty() ? a : pscale(std::move(a), F.inv(a.front().c), F); }

// Exact division; false if b does not divide a.
bool pdivexact(const PPoly& a, const PPoly& b, const Fp& F, PPoly* q) {
  std::map<u64, u64, std::greater<>> r;
  for (const auto& t : a) r.emplace(t.m, t.c);
  const PTerm lead = b.front();
  const u64 inv = F.inv(lead.c);
  PPoly out;
  while (!r.empty()) {
    auto [m, c] = *r.begin();
    if (!mono_divides(lead.m, m)) return false;
    const u64 qm = m - lead.m, qc = F.mul(c, inv);
    for (const auto& t : b) {
      auto [it, fresh] = r.emplace(t.m + qm, 0);
      it->second = F.sub(it->second, F.mul(qc, t.c));
      if (it->second == 0) r.erase(it);
    }
    out.push_back({qm, qc});
  }
  if (q) *q = std::move(out);
  return true;
}

PPoly peval(const PPoly& a, int v, u64 t, const Fp& F) {
  int maxe = 0;
  for (const auto& s : a) maxe = std::max(maxe, byte_of(s.m, v));
  std::vector<u64> pw(maxe + 1, 1);
  for (int e = 1; e <= maxe; ++e) pw[e] = F.mul(pw[e - 1], t);
  PPoly r;
  r.reserve(a.size());
  for (const auto& s : a) r.push_back({clear_byte(s.m, v), F.mul(s.c, pw[byte_of(s.m, v)])});
  normalize(r, F);
  return r;
}

// Coefficients in variable v, keyed by the remaining monomial (lex-decreasing).
std::map<u64, UPoly, std::greater<>> groups(const PPoly& a, int v) {
  std::map<u64, UPoly, std::greater<>> g;
  for (const auto& s : a) {
    auto& u = g[clear_byte(s.m, v)];
    int e = byte_of(s.m, v);
    if (static_cast<int>(u.size()) <= e) u.resize(e + 1, 0);
    u[e] = s.c;
  }
  return g;
}

PPoly from_groups(const std::map<u64, UPoly, std::greater<>>& g, int v, const Fp& F) {
  PPoly r;
  for (const auto& [rest, u] : g)
    for (std::size_t e = 0; e < u.size(); ++e)
      if (u[e]) r.push_back({rest | (u64{e} << (8 * v)), u[e]});
  normalize(r, F);
  return r;
}

PPoly from_upoly(const UPoly& u, int v) {
  PPoly r;
  for (std::size_t e = u.size(); e-- > 0;)
    if (u[e]) r.push_back({u64{e} << (8 * v), u[e]});
  return r;
}

u64 random_point(u64 p) {
  thread_local u64 state = 0x2545F4914F6CDD1Dull;
  state += 0x9E3779B97F4A7C15ull;
  u64 z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return (z ^ (z >> 31)) % (p - 1) + 1;
}

// Monic gcd of nonzero a, b whose variables all lie in bytes lo..hi.
PPoly gcd_p(PPoly a, PPoly b, int lo, int hi, const Fp& F) {
  if (lo == hi) {
    UPoly ua, ub;
    for (const auto& [rest, u] : groups(a, hi)) ua = u;
    for (const auto& [rest, u] : groups(b, hi)) ub = u;
    return from_upoly(ugcd(ua, ub, F), hi);
  }
  const int v = lo;
  auto ga = groups(a, v), gb = groups(b, v);
  UPoly ca, cb;
  for (const auto& [rest, u] : ga) ca = ugcd(ca, u, F);
  for (const auto& [rest, u] : gb) cb = ugcd(cb, u, F);
  const UPoly content = ugcd(ca, cb, F);
  if (udeg(ca) > 0) {
    pdivexact(a, from_upoly(ca, v), F, &a);
    ga = groups(a, v);
  }
  if (udeg(cb) > 0) {
    pdivexact(b, from_upoly(cb, v), F, &b);
    gb = groups(b, v);
  }
  const UPoly& lca = ga.begin()->second;
  const UPoly& lcb = gb.begin()->second;
  const UPoly gamma = ugcd(lca, lcb, F);
  int da = 0, db = 0;
  for (const auto& s : a) da = std::max(da, byte_of(s.m, v));
  for (const auto& s : b) db = std::max(db, byte_of(s.m, v));
  const int bound = std::min(da, db) + udeg(gamma);

  for (int restart = 0; restart < 8; ++restart) {
    std::map<u64, UPoly, std::greater<>> interp;
    UPoly M{1};
    int points = 0;
    u64 lead = 0;
    for (int tries = 0; tries < 4 * bound + 64; ++tries) {
      const u64 t = random_point(F.p);
      if (ueval(lca, t, F) == 0 || ueval(lcb, t, F) == 0) continue;
      PPoly img = gcd_p(peval(a, v, t, F), peval(b, v, t, F), lo + 1, hi, F);
      if (img.size() == 1 && img.front().m == 0) return pmonic(from_upoly(content, v), F);
      if (points > 0 && img.front().m > lead) continue;
      if (points > 0 && img.front().m < lead) {
        interp.clear();
        M = {1};
        points = 0;
      }
      lead = img.front().m;
      img = pscale(std::move(img), ueval(gamma, t, F), F);

      bool changed = false;
      if (points == 0) {
        for (const auto& s : img) interp[s.m] = UPoly{s.c};
        changed = true;
      } else {
        const u64 scale = F.inv(ueval(M, t, F));
        std::map<u64, u64, std::greater<>> target;
        for (const auto& s : img) target[s.m] = s.c;
        for (auto& [rest, u] : interp) target.emplace(rest, 0);
        for (const auto& [rest, val] : target) {
          UPoly& u = interp[rest];
          const u64 diff = F.sub(val, ueval(u, t, F));
          if (!diff) continue;
          changed = true;
          UPoly corr = M;
          const u64 f = F.mul(diff, scale);
          for (auto& c : corr) c = F.mul(c, f);
          if (u.size() < corr.size()) u.resize(corr.size(), 0);
          for (std::size_t i = 0; i < corr.size(); ++i) u[i] = F.add(u[i], corr[i]);
          trim(u);
        }
        std::erase_if(interp, [](const auto& kv) { return kv.second.empty(); });
      }
      M = umul(M, UPoly{F.sub(0, t), 1}, F);
      ++points;

      if ((!changed && points > 1) || points > bound) {
        UPoly c;
        for (const auto& [rest, u] : interp) c = ugcd(c, u, F);
        PPoly h = from_groups(interp, v, F);
        if (udeg(c) > 0) pdivexact(h, from_upoly(c, v), F, &h);
        if (pdivexact(a, h, F, nullptr) && pdivexact(b, h, F, nullptr))
          return pmonic(pmul(from_upoly(content, v), h, F), F);
        if (points > bound) break;
      }
    }
  }
  throw InternalInconsistency("modular gcd failed to converge");
}

const std::vector<u64>& primes() {
  static const std::vector<u64> list = [] {
    std::vector<u64> out;
    mpz_class q = (mpz_class(1) << 62) - 1;
    while (out.size() < 256) {
      if (mpz_probab_prime_p(q.get_mpz_t(), 30)) out.push_back(q.get_ui());
      q -= 2;
    }
    return out;
  }();
  return list;
}

struct ZTerm {
  u64 m;
  mpz_class c;
};

}  // namespace

MPoly modular_gcd(const MPoly& a, const MPoly& b) {
  const int dim = a.dim();
  const std::uint32_t mask = a.var_mask() | b.var_mask();
  std::vector<int> vars;
  for (int v = 0; v < Monomial::kMaxVars; ++v)
    if (mask >> v & 1u) vars.push_back(v);
  // Highest-degree variable becomes the univariate base in the top byte.
  std::stable_sort(vars.begin(), vars.end(), [&](int x, int y) {
    return std::max(a.degree_in(x), b.degree_in(x)) < std::max(a.degree_in(y), b.degree_in(y));
  });
  const int K = static_cast<int>(vars.size());

  auto pack = [&](Monomial mono) {
    u64 m = 0;
    for (int j = 0; j < K; ++j) m |= u64(mono.exponent(vars[j])) << (8 * j);
    return m;
  };
  auto unpack = [&](u64 m) {
    u64 bits = 0;
    for (int j = 0; j < K; ++j) bits |= u64(byte_of(m, j)) << (8 * vars[j]);
    return Monomial(bits);
  };
  auto to_z = [&](const MPoly& p) {
    std::vector<ZTerm> out;
    for (const auto& t : p.terms()) out.push_back({pack(t.mono), t.coeff.get_num()});
    std::sort(out.begin(), out.end(), [](const ZTerm& x, const ZTerm& y) { return x.m > y.m; });
    return out;
  };
  const auto za = to_z(a), zb = to_z(b);
  mpz_class gamma;
  mpz_gcd(gamma.get_mpz_t(), za.front().c.get_mpz_t(), zb.front().c.get_mpz_t());

  std::map<u64, mpz_class, std::greater<>> acc;
  mpz_class modulus = 0;
  u64 lead = 0;
  for (u64 p : primes()) {
    if (mpz_fdiv_ui(za.front().c.get_mpz_t(), p) == 0 || mpz_fdiv_ui(zb.front().c.get_mpz_t(), p) == 0) continue;
    const Fp F{p};
    auto reduce = [&](const std::vector<ZTerm>& z) {
      PPoly r;
      for (const auto& t : z) {
        u64 c = mpz_fdiv_ui(t.c.get_mpz_t(), p);
        if (c) r.push_back({t.m, c});
      }
      return r;
    };
    PPoly g = gcd_p(reduce(za), reduce(zb), 0, K - 1, F);
    if (g.size() == 1 && g.front().m == 0) return MPoly(dim, mpq_class(1));
    if (modulus != 0 && g.front().m > lead) continue;
    if (modulus == 0 || g.front().m < lead) {
      acc.clear();
      modulus = 0;
    }
    lead = g.front().m;
    g = pscale(std::move(g), mpz_fdiv_ui(gamma.get_mpz_t(), p), F);

    bool changed = false;
    if (modulus == 0) {
      for (const auto& t : g) acc[t.m] = t.c;
      modulus = p;
      changed = true;
    } else {
      std::map<u64, u64> img;
      for (const auto& t : g) img[t.m] = t.c;
      for (const auto& [m, c] : acc) img.emplace(m, 0);
      const u64 minv = F.inv(mpz_fdiv_ui(modulus.get_mpz_t(), p));
      for (const auto& [m, c] : img) {
        mpz_class& r = acc[m];
        // r is symmetric modulo `modulus`; lift to the product modulus.
        const u64 rm = mpz_fdiv_ui(r.get_mpz_t(), p);
        const u64 k = F.mul(F.sub(c, rm), minv);
        if (k == 0) continue;
        changed = true;
        r += modulus * mpz_class(static_cast<unsigned long>(k));
      }
      modulus *= p;
    }
    const mpz_class half = modulus / 2;
    for (auto& [m, r] : acc) {
      r %= modulus;
      if (r < 0) r += modulus;
      if (r > half) r -= modulus;
    }
    std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
    if (!changed) {
      std::vector<Term> terms;
      for (const auto& [m, c] : acc) terms.push_back({unpack(m), mpq_class(c)});
      MPoly h = MPoly::from_terms(dim, std::move(terms)).primitive();
      if (divide_exact(a, h) && divide_exact(b, h)) return h;
    }
  }
  throw InternalInconsistency("modular gcd ran out of primes");
}

}  // namespace arf::detail
