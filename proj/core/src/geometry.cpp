#include "arfinsler/geometry.hpp"

#include <algorithm>

#include "arfinsler/errors.hpp"

namespace arf {

namespace {

// Copies the entry with sorted trailing indices (positions >= from) to every
// permutation of them. Entries with sorted indices must already be filled.
void fill_symmetric(Tensor& t, int from) {
  for (std::size_t f = 0; f < t.size(); ++f) {
    auto idx = t.multi_index(f);
    auto sorted = idx;
    std::sort(sorted.begin() + from, sorted.end());
    if (sorted != idx) t[f] = t[t.flat_index(sorted)];
  }
  for (int a = from; a < t.rank(); ++a)
    for (int b = a + 1; b < t.rank(); ++b) t.declare_symmetric(a, b);
}

bool is_sorted_from(const std::vector<int>& idx, int from) {
  return std::is_sorted(idx.begin() + from, idx.end());
}

}  // namespace

FieldElem fiber_var(const Kernel& k, int i) { return FieldElem(k, RatFn::y(k->n, i + 1)); }

FieldElem euler(const FieldElem& f) {
  FieldElem out(f.kernel());
  for (int i = 0; i < f.n(); ++i) out += fiber_var(f.kernel(), i) * f.pdiff_fiber(i);
  return out;
}

FieldElem determinant(const std::vector<std::vector<FieldElem>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  FieldElem det(m[0][0].kernel());
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<FieldElem>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<FieldElem> row;
      for (std::size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      minor.push_back(std::move(row));
    }
    FieldElem term = m[0][c] * determinant(minor);
    det = c % 2 ? det - term : det + term;
  }
  return det;
}

Tensor inverse_matrix(const Tensor& t, FieldElem* det_out) {
  const int n = t.dim();
  std::vector<std::vector<FieldElem>> m(n, std::vector<FieldElem>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = t(i, j);
  FieldElem det = determinant(m);
  if (det.is_zero()) throw Degenerate("matrix is singular");
  if (det_out) *det_out = det;
  std::string var = {t.variance()[0] == 'l' ? 'u' : 'l', t.variance()[1] == 'l' ? 'u' : 'l'};
  Tensor inv(t.kernel(), var);
  const FieldElem det_inv = det.inv();
  const bool symmetric = t.symmetric_in(0, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (symmetric && j < i) {
        inv(i, j) = inv(j, i);
        continue;
      }
      if (n == 1) {
        inv(i, j) = det_inv;
        continue;
      }
      // inv_ij = (-1)^(i+j) minor_ji / det
      std::vector<std::vector<FieldElem>> minor;
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<FieldElem> row;
        for (int c = 0; c < n; ++c)
          if (c != i) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      FieldElem cof = determinant(minor) * det_inv;
      inv(i, j) = (i + j) % 2 ? -cof : cof;
    }
  if (symmetric) inv.declare_symmetric(0, 1);
  return inv;
}

MetricData fundamental_tensor(const FieldElem& F2) {
  if (F2.is_zero()) throw Degenerate("F^2 is zero");
  auto deg = k_homogeneity_degree(F2);
  if (!deg || *deg != 2) throw HomogeneityViolation("F^2 must be positively homogeneous of degree 2 in y");
  const int n = F2.n();
  MetricData md{F2, Tensor(F2.kernel(), "ll"), Tensor(), FieldElem(F2.kernel())};
  std::vector<FieldElem> first(n);
  for (int i = 0; i < n; ++i) first[i] = F2.pdiff_fiber(i);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) md.g(i, j) = first[i].pdiff_fiber(j).scaled(mpq_class(1, 2));
  fill_symmetric(md.g, 0);
  md.ginv = inverse_matrix(md.g, &md.det_g);
  return md;
}

Tensor cartan(const MetricData& md) {
  Tensor C(md.g.kernel(), "lll");
  for (std::size_t f = 0; f < C.size(); ++f) {
    auto idx = C.multi_index(f);
    if (!is_sorted_from(idx, 0)) continue;
    C[f] = md.g(idx[0], idx[1]).pdiff_fiber(idx[2]).scaled(mpq_class(1, 2));
  }
  fill_symmetric(C, 0);
  return C;
}

Tensor mean_cartan(const MetricData& md, const Tensor& C) {
  const int n = C.dim();
  Tensor I(C.kernel(), "l");
  for (int k = 0; k < n; ++k) {
    FieldElem s(C.kernel());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!C(i, j, k).is_zero() && !md.ginv(i, j).is_zero()) s += md.ginv(i, j) * C(i, j, k);
    I(k) = s;
  }
  return I;
}

Tensor mean_cartan(const MetricData& md) { return mean_cartan(md, cartan(md)); }

Tensor spray(const MetricData& md) {
  const Kernel& k = md.F2.kernel();
  const int n = md.F2.n();
  std::vector<FieldElem> V(n);
  for (int r = 0; r < n; ++r) {
    FieldElem dr = md.F2.pdiff_fiber(r);
    FieldElem acc = -md.F2.pdiff_base(r);
    for (int kk = 0; kk < n; ++kk) {
      FieldElem t = dr.pdiff_base(kk);
      if (!t.is_zero()) acc += fiber_var(k, kk) * t;
    }
    V[r] = acc;
  }
  Tensor G(k, "u");
  for (int i = 0; i < n; ++i) {
    FieldElem s(k);
    for (int r = 0; r < n; ++r)
      if (!V[r].is_zero()) s += md.ginv(i, r) * V[r];
    G(i) = s.scaled(mpq_class(1, 4));
  }
  return G;
}

Tensor barthel(const Tensor& G) {
  const int n = G.dim();
  Tensor N(G.kernel(), "ul");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) N(i, j) = G(i).pdiff_fiber(j);
  return N;
}

Tensor berwald_connection(const Tensor& N) {
  Tensor T(N.kernel(), "ull");
  for (std::size_t f = 0; f < T.size(); ++f) {
    auto idx = T.multi_index(f);
    if (!is_sorted_from(idx, 1)) continue;
    T[f] = N(idx[0], idx[1]).pdiff_fiber(idx[2]);
  }
  fill_symmetric(T, 1);
  return T;
}

Tensor berwald_curvature(const Tensor& Gjk) {
  Tensor T(Gjk.kernel(), "ulll");
  for (std::size_t f = 0; f < T.size(); ++f) {
    auto idx = T.multi_index(f);
    if (!is_sorted_from(idx, 1)) continue;
    T[f] = Gjk(idx[0], idx[1], idx[2]).pdiff_fiber(idx[3]);
  }
  fill_symmetric(T, 1);
  return T;
}

Tensor douglas(const Tensor& N, const Tensor& Gjkl) {
  const Kernel& k = N.kernel();
  const int n = N.dim();
  // T = N^s_s; second and third fiber derivatives of T.
  FieldElem T(k);
  for (int s = 0; s < n; ++s) T += N(s, s);
  std::vector<FieldElem> T1(n);
  for (int a = 0; a < n; ++a) T1[a] = T.pdiff_fiber(a);
  std::vector<std::vector<FieldElem>> T2(n, std::vector<FieldElem>(n));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) T2[a][b] = T2[b][a] = T1[a].pdiff_fiber(b);
  Tensor D(k, "ulll");
  const mpq_class c(1, n + 1);
  for (std::size_t f = 0; f < D.size(); ++f) {
    auto idx = D.multi_index(f);
    if (!is_sorted_from(idx, 1)) continue;
    const int i = idx[0], j = idx[1], kk = idx[2], l = idx[3];
    FieldElem sub = fiber_var(k, i) * T2[kk][l].pdiff_fiber(j);
    if (i == j) sub += T2[kk][l];
    if (i == kk) sub += T2[j][l];
    if (i == l) sub += T2[j][kk];
    D[f] = Gjkl[f] - sub.scaled(c);
  }
  fill_symmetric(D, 1);
  return D;
}

Tensor landsberg(const MetricData& md, const Tensor& Gjkl) {
  const Kernel& k = md.g.kernel();
  const int n = md.g.dim();
  std::vector<FieldElem> ylow(n);
  for (int s = 0; s < n; ++s) {
    FieldElem acc(k);
    for (int m = 0; m < n; ++m) acc += fiber_var(k, m) * md.g(m, s);
    ylow[s] = acc;
  }
  Tensor L(k, "lll");
  for (std::size_t f = 0; f < L.size(); ++f) {
    auto idx = L.multi_index(f);
    if (!is_sorted_from(idx, 0)) continue;
    FieldElem acc(k);
    for (int s = 0; s < n; ++s) {
      const FieldElem& b = Gjkl(s, idx[0], idx[1], idx[2]);
      if (!b.is_zero()) acc += ylow[s] * b;
    }
    L[f] = acc.scaled(mpq_class(1, 2));
  }
  fill_symmetric(L, 0);
  return L;
}

Tensor mean_landsberg(const MetricData& md, const Tensor& L) {
  const int n = L.dim();
  Tensor J(L.kernel(), "l");
  for (int kk = 0; kk < n; ++kk) {
    FieldElem acc(L.kernel());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!L(i, j, kk).is_zero() && !md.ginv(i, j).is_zero()) acc += md.ginv(i, j) * L(i, j, kk);
    J(kk) = acc;
  }
  return J;
}

Tensor mean_landsberg_covariant(const Tensor& I, const Tensor& G, const Tensor& N) {
  const Kernel& k = I.kernel();
  const int n = I.dim();
  Tensor J(k, "l");
  for (int kk = 0; kk < n; ++kk) {
    FieldElem acc(k);
    for (int s = 0; s < n; ++s) {
      FieldElem a = I(kk).pdiff_base(s);
      if (!a.is_zero()) acc += fiber_var(k, s) * a;
      FieldElem b = I(kk).pdiff_fiber(s);
      if (!b.is_zero() && !G(s).is_zero()) acc -= (G(s) * b).scaled(mpq_class(2));
      if (!N(s, kk).is_zero() && !I(s).is_zero()) acc -= N(s, kk) * I(s);
    }
    J(kk) = acc;
  }
  return J;
}

Tensor riemann(const Tensor& G, const Tensor& N, const Tensor& Gjk) {
  const Kernel& k = G.kernel();
  const int n = G.dim();
  Tensor R(k, "ul");
  for (int i = 0; i < n; ++i)
    for (int kk = 0; kk < n; ++kk) {
      FieldElem acc = G(i).pdiff_base(kk).scaled(mpq_class(2));
      for (int j = 0; j < n; ++j) {
        FieldElem a = N(i, kk).pdiff_base(j);
        if (!a.is_zero()) acc -= fiber_var(k, j) * a;
        if (!G(j).is_zero() && !Gjk(i, j, kk).is_zero()) acc += (G(j) * Gjk(i, j, kk)).scaled(mpq_class(2));
        if (!N(i, j).is_zero() && !N(j, kk).is_zero()) acc -= N(i, j) * N(j, kk);
      }
      R(i, kk) = acc;
    }
  return R;
}

FieldElem ricci(const Tensor& R) {
  FieldElem s(R.kernel());
  for (int m = 0; m < R.dim(); ++m) s += R(m, m);
  return s;
}

Tensor weyl(const Tensor& R, WeylVariant variant) {
  const Kernel& k = R.kernel();
  const int n = R.dim();
  const FieldElem ric = ricci(R);
  const mpq_class c(1, n + 1);
  Tensor Q = R;
  for (int i = 0; i < n; ++i) Q(i, i) -= ric.scaled(c);
  Tensor W(k, "ul");
  if (variant == WeylVariant::Printed) {
    for (int i = 0; i < n; ++i) {
      FieldElem div(k);
      for (int s = 0; s < n; ++s) div += Q(i, s).pdiff_fiber(s);
      FieldElem corr = (fiber_var(k, i) * div).scaled(c);
      for (int j = 0; j < n; ++j) W(i, j) = Q(i, j) - corr;
    }
  } else {
    std::vector<FieldElem> div(n, FieldElem(k));
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < n; ++s) div[j] += Q(s, j).pdiff_fiber(s);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) W(i, j) = Q(i, j) - (fiber_var(k, i) * div[j]).scaled(c);
  }
  return W;
}

Tensor chi(const Tensor& R) {
  const Kernel& k = R.kernel();
  const int n = R.dim();
  const FieldElem ric = ricci(R);
  Tensor X(k, "l");
  for (int l = 0; l < n; ++l) {
    FieldElem acc = ric.pdiff_fiber(l);
    for (int i = 0; i < n; ++i) acc += R(i, l).pdiff_fiber(i).scaled(mpq_class(2));
    X(l) = acc.scaled(mpq_class(-1, 6));
  }
  return X;
}

FieldElem s_curvature(const Tensor& N, const VolumeForm& vol) {
  const Kernel& k = N.kernel();
  const int n = N.dim();
  if (vol.sigma.is_zero()) throw ZeroInput("volume density is zero");
  if (!vol.sigma.is_y_free()) throw HomogeneityViolation("volume density must depend on x only");
  FieldElem S(k);
  for (int m = 0; m < n; ++m) S += N(m, m);
  const RatFn inv = vol.sigma.inv();
  RatFn lin(n);
  for (int m = 0; m < n; ++m) {
    RatFn d = vol.sigma.dx(m + 1);
    if (!d.is_zero()) lin += RatFn::y(n, m + 1) * d * inv;
  }
  return S - FieldElem(k, lin);
}

Tensor e_curvature(const FieldElem& S) {
  const int n = S.n();
  Tensor E(S.kernel(), "ll");
  std::vector<FieldElem> first(n);
  for (int i = 0; i < n; ++i) first[i] = S.pdiff_fiber(i);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) E(i, j) = first[i].pdiff_fiber(j).scaled(mpq_class(1, 2));
  fill_symmetric(E, 0);
  return E;
}

Tensor berwald_hcov(const Tensor& T, const Tensor& N, const Tensor& Gjk) {
  const Kernel& k = T.kernel();
  const int n = T.dim();
  if (T.rank() != 2) throw ArityError("horizontal derivative expects a rank-2 tensor");
  Tensor out(k, "lll");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const FieldElem& t = T(i, j);
      std::vector<FieldElem> vert(n);
      for (int r = 0; r < n; ++r) vert[r] = t.pdiff_fiber(r);
      for (int kk = 0; kk < n; ++kk) {
        FieldElem acc = t.pdiff_base(kk);
        for (int r = 0; r < n; ++r)
          if (!vert[r].is_zero() && !N(r, kk).is_zero()) acc -= N(r, kk) * vert[r];
        for (int s = 0; s < n; ++s) {
          if (!T(s, j).is_zero() && !Gjk(s, i, kk).is_zero()) acc -= T(s, j) * Gjk(s, i, kk);
          if (!T(i, s).is_zero() && !Gjk(s, j, kk).is_zero()) acc -= T(i, s) * Gjk(s, j, kk);
        }
        out(i, j, kk) = acc;
      }
    }
  return out;
}

FinslerSession::FinslerSession(FieldElem F2, std::optional<RatFn> sigma)
    : F2_(std::move(F2)), vol_{sigma ? *sigma : RatFn(F2_.n(), mpq_class(1))} {
  if (vol_.sigma.is_zero()) throw ZeroInput("volume density is zero");
  if (!vol_.sigma.is_y_free()) throw HomogeneityViolation("volume density must depend on x only");
}

const MetricData& FinslerSession::metric() {
  if (!md_) md_ = fundamental_tensor(F2_);
  return *md_;
}

const Tensor& FinslerSession::cartan() {
  if (!C_) C_ = arf::cartan(metric());
  return *C_;
}

const Tensor& FinslerSession::mean_cartan() {
  if (!I_) I_ = arf::mean_cartan(metric(), cartan());
  return *I_;
}

const Tensor& FinslerSession::spray() {
  if (!G_) G_ = arf::spray(metric());
  return *G_;
}

const Tensor& FinslerSession::barthel() {
  if (!N_) N_ = arf::barthel(spray());
  return *N_;
}

const Tensor& FinslerSession::berwald_connection() {
  if (!Gjk_) Gjk_ = arf::berwald_connection(barthel());
  return *Gjk_;
}

const Tensor& FinslerSession::berwald_curvature() {
  if (!Gjkl_) Gjkl_ = arf::berwald_curvature(berwald_connection());
  return *Gjkl_;
}

const Tensor& FinslerSession::douglas() {
  if (!D_) D_ = arf::douglas(barthel(), berwald_curvature());
  return *D_;
}

const Tensor& FinslerSession::landsberg() {
  if (!L_) L_ = arf::landsberg(metric(), berwald_curvature());
  return *L_;
}

const Tensor& FinslerSession::mean_landsberg() {
  if (!J_) J_ = arf::mean_landsberg(metric(), landsberg());
  return *J_;
}

const Tensor& FinslerSession::mean_landsberg_covariant() {
  if (!Jcov_) Jcov_ = arf::mean_landsberg_covariant(mean_cartan(), spray(), barthel());
  return *Jcov_;
}

const Tensor& FinslerSession::riemann() {
  if (!R_) R_ = arf::riemann(spray(), barthel(), berwald_connection());
  return *R_;
}

const FieldElem& FinslerSession::ricci() {
  if (!Ric_) Ric_ = arf::ricci(riemann());
  return *Ric_;
}

const Tensor& FinslerSession::weyl(WeylVariant variant) {
  auto& slot = variant == WeylVariant::Printed ? Wp_ : Ws_;
  if (!slot) slot = arf::weyl(riemann(), variant);
  return *slot;
}

const Tensor& FinslerSession::chi() {
  if (!chi_) chi_ = arf::chi(riemann());
  return *chi_;
}

const FieldElem& FinslerSession::s_curvature() {
  if (!S_) S_ = arf::s_curvature(barthel(), vol_);
  return *S_;
}

const Tensor& FinslerSession::e_curvature() {
  if (!E_) E_ = arf::e_curvature(s_curvature());
  return *E_;
}

const std::vector<std::string>& FinslerSession::object_names() {
  static const std::vector<std::string> names = {"F2", "g",   "ginv", "C", "I",   "G", "N",          "Gjk",
                                                 "Gjkl", "D", "L",    "J", "R", "Ric", "W", "W_standard",
                                                 "chi",  "S", "E"};
  return names;
}

Tensor FinslerSession::object(const std::string& name) {
  if (name == "F2") return scalar_tensor(F2_);
  if (name == "g") return metric().g;
  if (name == "ginv") return metric().ginv;
  if (name == "C") return cartan();
  if (name == "I") return mean_cartan();
  if (name == "G") return spray();
  if (name == "N") return barthel();
  if (name == "Gjk") return berwald_connection();
  if (name == "Gjkl") return berwald_curvature();
  if (name == "D") return douglas();
  if (name == "L") return landsberg();
  if (name == "J") return mean_landsberg();
  if (name == "R") return riemann();
  if (name == "Ric") return scalar_tensor(ricci());
  if (name == "W") return weyl(WeylVariant::Printed);
  if (name == "W_standard") return weyl(WeylVariant::Standard);
  if (name == "chi") return chi();
  if (name == "S") return scalar_tensor(s_curvature());
  if (name == "E") return e_curvature();
  throw InvalidArgument("unknown object '" + name + "'");
}

}  // namespace arf
