#include "arfinsler/oracle.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>

#include "arfinsler/errors.hpp"

namespace arf {
namespace {

namespace bmp = boost::multiprecision;
using Real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

Real to_real(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

// Monomials x^a y^b with |a| <= dx and |b| <= dy, one byte per variable.
struct Shape {
  int n = 0, dx = 0, dy = 0;
  std::vector<std::uint64_t> key;
  std::vector<int> degx, degy;
  // Products grouped by the left factor: for i, pairs (j, k) with mono_i * mono_j = mono_k.
  std::vector<std::vector<std::pair<int, int>>> prod;
  // up[v][i] = index of mono_i * var_v, or -1 outside the box.
  std::vector<std::vector<int>> up;

  Shape(int n_, int dx_, int dy_) : n(n_), dx(dx_), dy(dy_) {
    std::vector<int> e(2 * n, 0);
    std::function<void(int, int, int)> rec = [&](int v, int bx, int by) {
      if (v == 2 * n) {
        std::uint64_t k = 0;
        int sx = 0, sy = 0;
        for (int w = 0; w < 2 * n; ++w) {
          k |= static_cast<std::uint64_t>(e[w]) << (8 * w);
          (w < n ? sx : sy) += e[w];
        }
        key.push_back(k);
        degx.push_back(sx);
        degy.push_back(sy);
        return;
      }
      const int budget = v < n ? bx : by;
      for (int d = 0; d <= budget; ++d) {
        e[v] = d;
        rec(v + 1, v < n ? bx - d : bx, v < n ? by : by - d);
      }
      e[v] = 0;
    };
    rec(0, dx, dy);
    std::unordered_map<std::uint64_t, int> index;
    for (std::size_t i = 0; i < key.size(); ++i) index[key[i]] = static_cast<int>(i);
    const int sz = static_cast<int>(key.size());
    prod.resize(sz);
    for (int i = 0; i < sz; ++i)
      for (int j = 0; j < sz; ++j)
        if (degx[i] + degx[j] <= dx && degy[i] + degy[j] <= dy) prod[i].emplace_back(j, index.at(key[i] + key[j]));
    up.assign(2 * n, std::vector<int>(sz, -1));
    for (int v = 0; v < 2 * n; ++v)
      for (int i = 0; i < sz; ++i) {
        auto it = index.find(key[i] + (std::uint64_t{1} << (8 * v)));
        if (it != index.end()) up[v][i] = it->second;
      }
  }

  int size() const { return static_cast<int>(key.size()); }
  int exponent(int i, int v) const { return static_cast<int>((key[i] >> (8 * v)) & 0xFF); }
};

// Truncated Taylor expansion around the sample point. vx, vy bound the
// degrees whose coefficients are still exact after differentiation.
struct Jet {
  const Shape* sh = nullptr;
  std::vector<Real> c;
  int vx = 0, vy = 0;

  Jet() = default;
  explicit Jet(const Shape* s) : sh(s), c(s->size()), vx(s->dx), vy(s->dy) {}

  const Real& value() const { return c[0]; }
};

Jet constant(const Shape* s, const Real& v) {
  Jet j(s);
  j.c[0] = v;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.sh);
  r.vx = std::min(a.vx, b.vx);
  r.vy = std::min(a.vy, b.vy);
  for (int i = 0; i < a.sh->size(); ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r(a.sh);
  r.vx = std::min(a.vx, b.vx);
  r.vy = std::min(a.vy, b.vy);
  for (int i = 0; i < a.sh->size(); ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

Jet scale(const Jet& a, const Real& s) {
  Jet r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  const Shape& sh = *a.sh;
  Jet r(a.sh);
  r.vx = std::min(a.vx, b.vx);
  r.vy = std::min(a.vy, b.vy);
  Real t;
  mpfr_ptr tp = t.backend().data();
  for (int i = 0; i < sh.size(); ++i) {
    mpfr_srcptr ai = a.c[i].backend().data();
    if (mpfr_zero_p(ai)) continue;
    for (const auto& [j, k] : sh.prod[i]) {
      if (sh.degx[k] > r.vx || sh.degy[k] > r.vy) continue;
      mpfr_srcptr bj = b.c[j].backend().data();
      if (mpfr_zero_p(bj)) continue;
      mpfr_mul(tp, ai, bj, MPFR_RNDN);
      mpfr_add(r.c[k].backend().data(), r.c[k].backend().data(), tp, MPFR_RNDN);
    }
  }
  return r;
}

// a * (point_v + d_v).
Jet mul_var(const Jet& a, int v, const Real& point_v) {
  Jet r = scale(a, point_v);
  const auto& up = a.sh->up[v];
  for (int i = 0; i < a.sh->size(); ++i)
    if (up[i] >= 0) r.c[up[i]] += a.c[i];
  return r;
}

Jet deriv(const Jet& a, int v) {
  const Shape& sh = *a.sh;
  Jet r(a.sh);
  r.vx = a.vx;
  r.vy = a.vy;
  (v < sh.n ? r.vx : r.vy) -= 1;
  const auto& up = sh.up[v];
  for (int i = 0; i < sh.size(); ++i)
    if (up[i] >= 0) r.c[i] = a.c[up[i]] * (sh.exponent(i, v) + 1);
  return r;
}

// a^r through the binomial series of (1 + u)^r, u = a / a0 - 1.
Jet pow(const Jet& a, mpq_class e) {
  e.canonicalize();
  const Real a0 = a.value();
  const bool integral = e.get_den() == 1;
  if (a0 == 0 || (!integral && a0 < 0)) throw DivisionByZero("oracle series expansion at a singular point");
  Jet u = scale(a, Real(1) / a0);
  u.c[0] = 0;
  Real lead;
  if (integral)
    mpfr_pow_si(lead.backend().data(), a0.backend().data(), e.get_num().get_si(), MPFR_RNDN);
  else
    lead = bmp::pow(a0, to_real(e));
  Jet result = constant(a.sh, Real(1));
  result.vx = a.vx;
  result.vy = a.vy;
  Jet upow = result;
  mpq_class binom(1);
  const int order = a.sh->dx + a.sh->dy;
  for (int k = 1; k <= order; ++k) {
    binom = binom * (e - (k - 1)) / k;
    if (binom == 0) break;
    upow = upow * u;
    result = result + scale(upow, to_real(binom));
  }
  return scale(result, lead);
}

Jet inv(const Jet& a) { return pow(a, mpq_class(-1)); }

struct Expander {
  const Shape* sh;
  std::vector<Real> point;

  Jet poly(const MPoly& p) const {
    Jet acc(sh);
    for (const auto& t : p.terms()) {
      Jet term = constant(sh, to_real(t.coeff));
      for (int v = 0; v < 2 * sh->n; ++v)
        for (int e = t.mono.exponent(v); e > 0; --e) term = mul_var(term, v, point[v]);
      acc = acc + term;
    }
    return acc;
  }

  Jet ratfn(const RatFn& f) const {
    Jet num = poly(f.num());
    if (f.den().is_constant()) return scale(num, Real(1) / to_real(f.den().constant_value()));
    return num * inv(poly(f.den()));
  }

  Jet alpha_sq(const RiemannData& a) const {
    const int n = sh->n;
    Jet acc(sh);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (a.alpha[i][j].is_zero()) continue;
        acc = acc + mul_var(mul_var(ratfn(a.alpha[i][j]), n + i, point[n + i]), n + j, point[n + j]);
      }
    return acc;
  }

  Jet beta(const OneFormData& b) const {
    const int n = sh->n;
    Jet acc(sh);
    for (int i = 0; i < n; ++i)
      if (!b.b[i].is_zero()) acc = acc + mul_var(ratfn(b.b[i]), n + i, point[n + i]);
    return acc;
  }

  Jet theta(const KernelDesc& k) const {
    Jet A = ratfn(k.A);
    return k.m == 1 ? A : pow(A, mpq_class(1, k.m));
  }

  Jet field(const FieldElem& f) const {
    const Jet th = theta(*f.kernel());
    Jet acc(sh), thp = constant(sh, Real(1));
    for (int d = 0; d < f.m(); ++d) {
      if (!f.coeff(d).is_zero()) acc = acc + ratfn(f.coeff(d)) * thp;
      if (d + 1 < f.m()) thp = thp * th;
    }
    return acc;
  }

  // F^2 from the family parameters; falls back to the field element.
  Jet f2(const MetricInstance& inst, std::string* source) const {
    *source = "recipe";
    if (inst.family == "riemannian") return alpha_sq(*inst.alpha);
    if (inst.phi && inst.alpha && inst.beta) {
      const Jet a2 = alpha_sq(*inst.alpha);
      const Jet b = beta(*inst.beta);
      Jet F(sh);
      for (const auto& [p, coef] : *inst.phi) {
        if (coef == 0) continue;
        Jet term = pow(a2, mpq_class(1 - p, 2));
        if (p != 0) term = term * pow(b, mpq_class(p));
        F = F + scale(term, to_real(coef));
      }
      return F * F;
    }
    if ((inst.family == "mth_root" || inst.family == "extended_mth_root") && inst.root)
      return pow(ratfn(*inst.root), mpq_class(2, inst.root_m));
    if (inst.family == "kropina_change" && inst.root && inst.beta) {
      const int k = inst.kropina_k;
      return pow(ratfn(*inst.root), mpq_class(2 * k + 2, inst.root_m)) * pow(beta(*inst.beta), mpq_class(-2 * k));
    }
    *source = "field";
    return field(inst.F2);
  }
};

using Values = std::map<std::string, std::vector<Real>>;

// Every pipeline object at the expansion point, computed on Taylor series.
Values oracle_tensors(const Expander& ex, const Jet& F2, const RatFn& sigma, Real* geo_residual,
                      const std::vector<Real>& sym_spray) {
  const int n = ex.sh->n;
  auto X = [](int i) { return i; };
  auto Y = [n](int i) { return n + i; };
  const Real third(Real(1) / (n + 1));
  Values out;
  out["F2"] = {F2.value()};

  std::vector<Jet> dF(n);
  for (int i = 0; i < n; ++i) dF[i] = deriv(F2, Y(i));
  std::vector<std::vector<Jet>> g(n, std::vector<Jet>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i][j] = scale(deriv(dF[i], Y(j)), Real(0.5));

  // Gauss-Jordan with partial pivoting on the constant terms.
  std::vector<std::vector<Jet>> a = g, ginv(n, std::vector<Jet>(n, Jet(ex.sh)));
  for (int i = 0; i < n; ++i) ginv[i][i] = constant(ex.sh, Real(1));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (bmp::abs(a[r][col].value()) > bmp::abs(a[piv][col].value())) piv = r;
    std::swap(a[piv], a[col]);
    std::swap(ginv[piv], ginv[col]);
    const Jet pinv = inv(a[col][col]);
    for (int j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * pinv;
      ginv[col][j] = ginv[col][j] * pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a[r][col];
      for (int j = 0; j < n; ++j) {
        a[r][j] = a[r][j] - f * a[col][j];
        ginv[r][j] = ginv[r][j] - f * ginv[col][j];
      }
    }
  }

  auto& vg = out["g"];
  auto& vgi = out["ginv"];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      vg.push_back(g[i][j].value());
      vgi.push_back(ginv[i][j].value());
    }

  std::vector<Real> C(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) C[(i * n + j) * n + k] = deriv(g[i][j], Y(k)).value() / 2;
  out["C"] = C;
  std::vector<Real> I(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) I[k] += ginv[i][j].value() * C[(i * n + j) * n + k];
  out["I"] = I;

  // Spray and its fiber derivatives.
  std::vector<Jet> rhs(n), G(n, Jet(ex.sh));
  for (int r = 0; r < n; ++r) {
    Jet acc = scale(deriv(F2, X(r)), Real(-1));
    for (int k = 0; k < n; ++k) acc = acc + mul_var(deriv(dF[r], X(k)), Y(k), ex.point[Y(k)]);
    rhs[r] = acc;
  }
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < n; ++r) G[i] = G[i] + ginv[i][r] * rhs[r];
    G[i] = scale(G[i], Real(0.25));
  }
  std::vector<std::vector<Jet>> N(n, std::vector<Jet>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) N[i][j] = deriv(G[i], Y(j));
  auto& vG = out["G"];
  auto& vN = out["N"];
  auto& vGjk = out["Gjk"];
  auto& vGjkl = out["Gjkl"];
  std::vector<std::vector<std::vector<Jet>>> Gjk(n, std::vector<std::vector<Jet>>(n, std::vector<Jet>(n)));
  for (int i = 0; i < n; ++i) {
    vG.push_back(G[i].value());
    for (int j = 0; j < n; ++j) {
      vN.push_back(N[i][j].value());
      for (int k = 0; k < n; ++k) {
        Gjk[i][j][k] = deriv(N[i][j], Y(k));
        vGjk.push_back(Gjk[i][j][k].value());
        for (int l = 0; l < n; ++l) vGjkl.push_back(deriv(Gjk[i][j][k], Y(l)).value());
      }
    }
  }

  Jet trN(ex.sh);
  for (int s = 0; s < n; ++s) trN = trN + N[s][s];
  auto& vD = out["D"];
  for (int i = 0; i < n; ++i) {
    const Jet yT = mul_var(trN, Y(i), ex.point[Y(i)]);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Real sub = deriv(deriv(deriv(yT, Y(j)), Y(k)), Y(l)).value();
          vD.push_back(vGjkl[((i * n + j) * n + k) * n + l] - sub * third);
        }
  }

  std::vector<Real> ylow(n);
  for (int s = 0; s < n; ++s)
    for (int m = 0; m < n; ++m) ylow[s] += vg[m * n + s] * ex.point[Y(m)];
  std::vector<Real> L(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Real acc;
        for (int s = 0; s < n; ++s) acc += ylow[s] * vGjkl[((s * n + i) * n + j) * n + k];
        L[(i * n + j) * n + k] = acc / 2;
      }
  out["L"] = L;
  std::vector<Real> J(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J[k] += vgi[i * n + j] * L[(i * n + j) * n + k];
  out["J"] = J;

  std::vector<std::vector<Jet>> R(n, std::vector<Jet>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Jet acc = scale(deriv(G[i], X(k)), Real(2));
      for (int j = 0; j < n; ++j) {
        acc = acc - mul_var(deriv(N[i][k], X(j)), Y(j), ex.point[Y(j)]);
        acc = acc + scale(G[j] * Gjk[i][j][k], Real(2));
        acc = acc - N[i][j] * N[j][k];
      }
      R[i][k] = acc;
    }
  Jet ric(ex.sh);
  for (int m = 0; m < n; ++m) ric = ric + R[m][m];
  auto& vR = out["R"];
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) vR.push_back(R[i][k].value());
  out["Ric"] = {ric.value()};

  std::vector<std::vector<Jet>> Q = R;
  for (int i = 0; i < n; ++i) Q[i][i] = Q[i][i] - scale(ric, third);
  auto& vW = out["W"];
  auto& vWs = out["W_standard"];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Real divp, divs;
      for (int s = 0; s < n; ++s) {
        divp += deriv(Q[i][s], Y(s)).value();
        divs += deriv(Q[s][j], Y(s)).value();
      }
      vW.push_back(Q[i][j].value() - ex.point[Y(i)] * divp * third);
      vWs.push_back(Q[i][j].value() - ex.point[Y(i)] * divs * third);
    }
  auto& vchi = out["chi"];
  for (int l = 0; l < n; ++l) {
    Real acc = deriv(ric, Y(l)).value();
    for (int i = 0; i < n; ++i) acc += 2 * deriv(R[i][l], Y(i)).value();
    vchi.push_back(-acc / 6);
  }

  Jet S = trN;
  const Jet sig = ex.ratfn(sigma);
  const Jet sinv = inv(sig);
  for (int m = 0; m < n; ++m) S = S - mul_var(deriv(sig, X(m)) * sinv, Y(m), ex.point[Y(m)]);
  out["S"] = {S.value()};
  auto& vE = out["E"];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) vE.push_back(deriv(deriv(S, Y(i)), Y(j)).value() / 2);

  // Euler-Lagrange residual for L = F^2 / 2 with the symbolic spray.
  Real worst = 0;
  for (int i = 0; i < n; ++i) {
    Real lhs = 0, scale_i = 0;
    for (int j = 0; j < n; ++j) {
      const Real t = vg[i * n + j] * (-2 * sym_spray[j]);
      lhs += t;
      scale_i = std::max(scale_i, Real(bmp::abs(t)));
    }
    for (int k = 0; k < n; ++k) {
      const Real t = ex.point[Y(k)] * deriv(dF[i], X(k)).value() / 2;
      lhs += t;
      scale_i = std::max(scale_i, Real(bmp::abs(t)));
    }
    const Real t = deriv(F2, X(i)).value() / 2;
    lhs -= t;
    scale_i = std::max(scale_i, Real(bmp::abs(t)));
    if (scale_i > 0) worst = std::max(worst, Real(bmp::abs(lhs) / scale_i));
  }
  *geo_residual = worst;
  return out;
}

struct PrecisionGuard {
  unsigned saved;
  explicit PrecisionGuard(unsigned digits) : saved(Real::default_precision()) { Real::default_precision(digits); }
  ~PrecisionGuard() { Real::default_precision(saved); }
};

Real theta_value(const KernelDesc& k, const std::vector<mpq_class>& point) {
  const Real A = to_real(k.A.eval(point));
  if (k.m == 1) return A;
  if (A <= 0) throw DivisionByZero("kernel is not positive at the sample point");
  return bmp::pow(A, Real(1) / k.m);
}

Real eval_real(const FieldElem& f, const std::vector<mpq_class>& point, const Real& theta) {
  const auto cs = f.eval_coeffs(point);
  Real acc = 0, tp = 1;
  for (std::size_t d = 0; d < cs.size(); ++d) {
    if (cs[d] != 0) acc += to_real(cs[d]) * tp;
    tp *= theta;
  }
  return acc;
}

double to_double(const Real& r) { return static_cast<double>(r); }

}  // namespace

double OracleReport::max_rel_error() const {
  double m = 0;
  for (const auto& o : objects) m = std::max(m, o.max_rel_error);
  return m;
}

bool OracleReport::ok() const {
  if (points_used == 0 || !geodesic_ok) return false;
  for (const auto& o : objects)
    if (!o.ok) return false;
  return true;
}

std::string eval_decimal(const FieldElem& f, const std::vector<mpq_class>& point, unsigned digits) {
  PrecisionGuard guard(digits + 10);
  const Real v = eval_real(f, point, theta_value(*f.kernel(), point));
  return v.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

OracleReport run_oracle(const MetricInstance& inst, FinslerSession& s, const OracleOptions& opt) {
  if (opt.points <= 0) throw InvalidArgument("oracle needs at least one sample point");
  if (opt.digits < 20) throw InvalidArgument("oracle precision must be at least 20 digits");
  PrecisionGuard guard(opt.digits);
  const int n = inst.n;
  const Shape shape(n, 2, 6);
  const auto& names = FinslerSession::object_names();
  std::map<std::string, Tensor> sym;
  for (const auto& name : names) sym.emplace(name, s.object(name));

  OracleReport rep;
  rep.digits = opt.digits;
  std::map<std::string, double> worst;
  for (const auto& name : names) worst[name] = 0;
  double geo = 0;

  // Draw extra candidates: points where g or a denominator degenerates are skipped.
  const auto candidates = sample_points(inst, 4 * opt.points, opt.seed);
  for (const auto& p : candidates) {
    if (rep.points_used == opt.points) break;
    std::map<std::string, std::vector<Real>> symv;
    Values orc;
    Real residual;
    try {
      const Real th = theta_value(*inst.kernel, p);
      for (const auto& [name, t] : sym) {
        auto& v = symv[name];
        for (std::size_t f = 0; f < t.size(); ++f) v.push_back(eval_real(t[f], p, th));
      }
      Expander ex{&shape, {}};
      for (const auto& q : p) ex.point.push_back(to_real(q));
      const Jet F2 = ex.f2(inst, &rep.f2_source);
      orc = oracle_tensors(ex, F2, s.volume().sigma, &residual, symv.at("G"));
    } catch (const DivisionByZero&) {
      continue;
    }
    ++rep.points_used;
    geo = std::max(geo, to_double(residual));
    for (const auto& name : names) {
      const auto& a = symv.at(name);
      const auto& b = orc.at(name);
      if (a.size() != b.size()) throw InternalInconsistency("oracle shape mismatch for " + name);
      Real diff = 0, norm = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, Real(bmp::abs(a[i] - b[i])));
        norm = std::max({norm, Real(bmp::abs(a[i])), Real(bmp::abs(b[i]))});
      }
      const Real rel = norm > Real(1e-30) ? Real(diff / norm) : diff;
      worst[name] = std::max(worst[name], to_double(rel));
    }
  }
  for (const auto& name : names)
    rep.objects.push_back({name, worst[name], rep.points_used > 0 && worst[name] <= opt.tolerance});
  rep.geodesic_residual = geo;
  rep.geodesic_ok = rep.points_used > 0 && geo <= opt.tolerance;
  return rep;
}

}  // namespace arf
