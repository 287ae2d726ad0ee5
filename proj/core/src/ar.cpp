#include "arfinsler/ar.hpp"


#include "arfinsler/errors.hpp"

namespace arf {

namespace {

std::string support_str(const std::set<int>& s) {
  std::string out = "{";
  bool first = true;
  for (int d : s) {
    if (!first) out += ",";
    out += std::to_string(d);
    first = false;
  }
  return out + "}";
}

std::string index_str(const std::vector<int>& idx) {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) out += (i ? "," : "") + std::to_string(idx[i] + 1);
  return out + ")";
}

std::string clip(const std::string& s, std::size_t n = 160) { return s.size() <= n ? s : s.substr(0, n) + "..."; }

Tensor sub(const Tensor& a, const Tensor& b) {
  Tensor r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Tensor scaled(const Tensor& a, const FieldElem& f) {
  Tensor r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!r[i].is_zero()) r[i] = r[i] * f;
  return r;
}

// Rational data of an AR decomposition with all first derivatives.
struct ARData {
  int n;
  Kernel K;
  std::vector<RatFn> y;                        // y^i
  std::vector<std::vector<RatFn>> a, ai;       // a_ij, a^ij
  std::vector<std::vector<std::vector<RatFn>>> dxa, dya, dyai;  // [l][i][j]
  std::vector<RatFn> lf, lb;                   // d/dy^i log eta, d_i log eta

  explicit ARData(const ARDecomposition& dec) : n(dec.a.dim()), K(dec.kernel) {
    const int k = dec.theta_deg;
    y.resize(n);
    for (int i = 0; i < n; ++i) y[i] = RatFn::y(n, i + 1);
    a.assign(n, std::vector<RatFn>(n, RatFn(n)));
    ai = a;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a[i][j] = dec.a(i, j).rational_part();
        ai[i][j] = dec.ainv(i, j).rational_part();
      }
    dxa.assign(n, a);
    dya.assign(n, a);
    dyai.assign(n, a);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          dxa[l][i][j] = a[i][j].dx(l + 1);
          dya[l][i][j] = a[i][j].dy(l + 1);
          dyai[l][i][j] = ai[i][j].dy(l + 1);
        }
    lf.resize(n, RatFn(n));
    lb.resize(n, RatFn(n));
    for (int i = 0; i < n; ++i) {
      lf[i] = K->log_derivative[i].scaled(mpq_class(k));
      lb[i] = K->log_derivative[n + i].scaled(mpq_class(k));
    }
  }

  FieldElem f(const RatFn& r) const { return FieldElem(K, r); }

  // a_rs y^r y^s
  RatFn quad() const {
    RatFn s(n);
    for (int r = 0; r < n; ++r)
      for (int t = 0; t < n; ++t) s += a[r][t] * y[r] * y[t];
    return s;
  }
};

TermFamily fam(std::string name, mpq_class printed, mpq_class reference, Tensor s) {
  printed.canonicalize();
  reference.canonicalize();
  return TermFamily{std::move(name), std::move(printed), std::move(reference), std::move(s)};
}

bool is_rational_constant(const FieldElem& f, mpq_class& out) {
  if (!f.is_rational()) return false;
  const RatFn& r = f.rational_part();
  if (!r.is_constant()) return false;
  out = r.constant_value();
  return true;
}

// c with t = c * s for a rational constant c, if any.
std::optional<mpq_class> constant_multiple(const Tensor& t, const Tensor& s) {
  std::size_t idx = s.size();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!s[i].is_zero()) {
      idx = i;
      break;
    }
  if (idx == s.size()) return std::nullopt;
  mpq_class c;
  if (!is_rational_constant(t[idx] / s[idx], c)) return std::nullopt;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (t[i] != s[i].scaled(c)) return std::nullopt;
  return c;
}

ClaimRecord claim(std::string id, ClaimStatus st, std::string detail, std::string witness = {},
                  ClaimKind kind = ClaimKind::Reference) {
  return ClaimRecord{std::move(id), kind, st, std::move(detail), std::move(witness)};
}

ClaimRecord from_comparison(std::string id, const Comparison& c) {
  return claim(std::move(id), c.status, c.detail, c.witness);
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

}  // namespace

std::optional<ARDecomposition> detect_ar(const MetricData& md) {
  const Kernel& K = md.g.kernel();
  const int n = md.g.dim();
  std::optional<int> deg;
  for (std::size_t f = 0; f < md.g.size(); ++f) {
    if (md.g[f].is_zero()) continue;
    auto s = theta_support(md.g[f]);
    if (s.size() != 1) return std::nullopt;
    if (deg && *deg != *s.begin()) return std::nullopt;
    deg = *s.begin();
  }
  if (!deg) return std::nullopt;
  ARDecomposition dec;
  dec.kernel = K;
  dec.theta_deg = *deg;
  dec.a = Tensor(K, "ll");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dec.a(i, j) = FieldElem(K, md.g(i, j).coeff(*deg));
  dec.ainv = inverse_matrix(dec.a);
  dec.eta_is_rational = *deg == 0;
  return dec;
}

Tensor dlog_eta_fiber(const ARDecomposition& dec) {
  ARData d(dec);
  Tensor t(dec.kernel, "l");
  for (int i = 0; i < d.n; ++i) t(i) = d.f(d.lf[i]);
  return t;
}

Tensor dlog_eta_fiber_from_a(const ARDecomposition& dec) {
  ARData d(dec);
  const int n = d.n;
  if (n < 2) throw InvalidArgument("the fiber formula needs n >= 2");
  Tensor t(dec.kernel, "l");
  for (int k = 0; k < n; ++k) {
    RatFn s(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += d.ai[j][i] * (d.dya[i][j][k] - d.dya[k][i][j]);
    t(k) = d.f(s.scaled(mpq_class(1, n - 1)));
  }
  return t;
}

Tensor dlog_eta_base(const ARDecomposition& dec) {
  ARData d(dec);
  Tensor t(dec.kernel, "l");
  for (int i = 0; i < d.n; ++i) t(i) = d.f(d.lb[i]);
  return t;
}

Tensor mean_cartan_scalar_formula(const ARDecomposition& dec) {
  ARData d(dec);
  const int n = d.n;
  Tensor t(dec.kernel, "l");
  for (int i = 0; i < n; ++i) {
    RatFn s = d.lf[i].scaled(mpq_class(n));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += d.ai[j][k] * d.dya[i][j][k];
    t(i) = d.f(s.scaled(mpq_class(1, 2)));
  }
  return t;
}

Tensor mean_cartan_closed_form(const ARDecomposition& dec) {
  ARData d(dec);
  const int n = d.n;
  if (n < 2) throw InvalidArgument("the closed form needs n >= 2");
  Tensor t(dec.kernel, "l");
  for (int i = 0; i < n; ++i) {
    RatFn s(n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += d.ai[j][k] * (d.dya[k][j][i].scaled(mpq_class(n)) - d.dya[i][j][k]);
    t(i) = d.f(s.scaled(mpq_class(1, 2 * (n - 1))));
  }
  return t;
}

std::vector<TermFamily> mean_cartan_scalar_families(const ARDecomposition& dec) {
  ARData d(dec);
  const int n = d.n;
  Tensor t1(dec.kernel, "l"), t2(dec.kernel, "l");
  for (int i = 0; i < n; ++i) {
    RatFn s(n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += d.ai[j][k] * d.dya[i][j][k];
    t1(i) = d.f(s);
    t2(i) = d.f(d.lf[i]);
  }
  return {fam("a^jk dy_i(a_jk)", 1, mpq_class(1, 2), t1), fam("dy_i(log eta)", n, mpq_class(n, 2), t2)};
}

std::vector<TermFamily> mean_cartan_closed_form_families(const ARDecomposition& dec) {
  Tensor t = mean_cartan_closed_form(dec);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = t[i].scaled(mpq_class(2));
  return {fam("a^rs (n dy_r(a_sk) - dy_k(a_rs)) / (n-1)", 1, mpq_class(1, 2), t)};
}

CriterionVerdicts riemannian_verdicts(const ARDecomposition& dec, const Tensor& C) {
  ARData d(dec);
  const int n = d.n;
  CriterionVerdicts v;
  v.by_eta = v.by_a = true;
  for (int i = 0; i < n; ++i) {
    RatFn tr(n), cor(n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        tr += d.ai[j][k] * d.dya[i][j][k];
        cor += d.ai[j][k] * (d.dya[k][j][i].scaled(mpq_class(n)) - d.dya[i][j][k]);
      }
    if (d.lf[i] != -tr.scaled(mpq_class(1, n))) v.by_eta = false;
    if (!cor.is_zero()) v.by_a = false;
  }
  v.cartan_zero = C.is_zero();
  return v;
}

bool riemannian_criterion(const ARDecomposition& dec, const Tensor& C, bool regular) {
  auto v = riemannian_verdicts(dec, C);
  if (regular && !v.agree())
    throw InternalInconsistency("Riemannian verdicts diverge on a regular metric");
  return v.cartan_zero;
}

DeltaLogEta delta_log_eta(const ARDecomposition& dec, const MetricData& md, const Tensor& N, const Tensor& Gjk,
                          const Tensor& J) {
  const int n = dec.a.dim();
  const Kernel& K = dec.kernel;
  Tensor lf = dlog_eta_fiber(dec), lb = dlog_eta_base(dec);
  Tensor ah = berwald_hcov(dec.a, N, Gjk);
  Tensor gh = berwald_hcov(md.g, N, Gjk);
  DeltaLogEta out{Tensor(K, "l"), Tensor(K, "l"), std::nullopt};
  const mpq_class inv_n(1, n);
  for (int k = 0; k < n; ++k) {
    FieldElem acc = lb(k);
    for (int r = 0; r < n; ++r)
      if (!N(r, k).is_zero() && !lf(r).is_zero()) acc -= N(r, k) * lf(r);
    FieldElem tra(K), trg(K);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (!ah(i, j, k).is_zero()) tra += dec.ainv(i, j) * ah(i, j, k);
        if (!gh(i, j, k).is_zero()) trg += md.ginv(i, j) * gh(i, j, k);
      }
    out.lhs(k) = acc + tra.scaled(inv_n);
    out.trace(k) = trg.scaled(inv_n);
  }
  if (out.lhs.is_zero())
    out.j_multiple = mpq_class(0);
  else
    out.j_multiple = constant_multiple(out.lhs, J);
  return out;
}

std::vector<TermFamily> ar_spray_families(const ARDecomposition& dec) {
  ARData d(dec);
  const int n = d.n;
  const RatFn Q = d.quad();
  RatFn ylb(n);
  for (int l = 0; l < n; ++l) ylb += d.y[l] * d.lb[l];
  Tensor t1(d.K, "u"), t2(d.K, "u"), t3(d.K, "u"), t4(d.K, "u");
  for (int i = 0; i < n; ++i) {
    RatFn s2(n), s3(n), s4(n);
    for (int l = 0; l < n; ++l) {
      s2 += d.ai[i][l] * d.lb[l];
      for (int k = 0; k < n; ++k)
        for (int s = 0; s < n; ++s) {
          RatFn yy = d.y[k] * d.y[s] * d.ai[l][i];
          s3 += yy * d.dxa[k][l][s];
          s4 += yy * d.dxa[l][k][s];
        }
    }
    t1(i) = d.f(d.y[i] * ylb);
    t2(i) = d.f(Q * s2);
    t3(i) = d.f(s3);
    t4(i) = d.f(s4);
  }
  return {fam("y^i y^l d_l(log eta)", mpq_class(1, 2), mpq_class(1, 2), t1),
          fam("a_rs y^r y^s a^il d_l(log eta)", mpq_class(-1, 4), mpq_class(-1, 4), t2),
          fam("y^k y^s a^li d_k(a_ls)", mpq_class(1, 2), mpq_class(1, 2), t3),
          fam("y^k y^s a^li d_l(a_ks)", mpq_class(-1, 4), mpq_class(-1, 4), t4)};
}

std::vector<TermFamily> ar_barthel_families(const ARDecomposition& dec) {
  ARData d(dec);
  const int n = d.n;
  const RatFn Q = d.quad();
  RatFn ylb(n);
  for (int l = 0; l < n; ++l) ylb += d.y[l] * d.lb[l];
  // d/dy^i d_l log eta
  std::vector<std::vector<RatFn>> dlb(n, std::vector<RatFn>(n, RatFn(n)));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) dlb[i][l] = d.lb[l].dy(i + 1);
  // P^j = y^k y^s a^lj d_k a_ls and its companion with d_l a_ks.
  std::vector<RatFn> P(n, RatFn(n)), Pt(n, RatFn(n));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int s = 0; s < n; ++s) {
          RatFn yy = d.y[k] * d.y[s] * d.ai[l][j];
          P[j] += yy * d.dxa[k][l][s];
          Pt[j] += yy * d.dxa[l][k][s];
        }
  std::vector<Tensor> T(9, Tensor(d.K, "ul"));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      RatFn b3(n), b4(n), b5(n), b7(n);
      for (int l = 0; l < n; ++l) {
        RatFn yair(n);
        for (int r = 0; r < n; ++r) yair += d.y[r] * d.a[i][r];
        b3 += yair * d.ai[j][l] * d.lb[l];
        RatFn yyda(n);
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) yyda += d.y[r] * d.y[s] * d.dya[i][r][s];
        b4 += yyda * d.ai[j][l] * d.lb[l];
        b5 += Q * d.dyai[i][j][l] * d.lb[l];
        b7 += Q * d.ai[j][l] * dlb[i][l];
      }
      RatFn b6(n);
      for (int l = 0; l < n; ++l) b6 += d.y[j] * d.y[l] * dlb[i][l];
      T[0](j, i) = d.f(d.y[j] * d.lb[i]);
      if (i == j) T[1](j, i) = d.f(ylb);
      T[2](j, i) = d.f(b3);
      T[3](j, i) = d.f(b4);
      T[4](j, i) = d.f(b5);
      T[5](j, i) = d.f(b6);
      T[6](j, i) = d.f(b7);
      T[7](j, i) = d.f(P[j].dy(i + 1));
      T[8](j, i) = d.f(Pt[j].dy(i + 1));
    }
  return {fam("y^j d_i(log eta)", mpq_class(1, 2), mpq_class(1, 2), T[0]),
          fam("delta^j_i y^k d_k(log eta)", mpq_class(1, 2), mpq_class(1, 2), T[1]),
          fam("y^r a_ir a^jl d_l(log eta)", mpq_class(-1, 2), mpq_class(-1, 2), T[2]),
          fam("y^r y^s a^jl dy_i(a_rs) d_l(log eta)", mpq_class(-1, 4), mpq_class(-1, 4), T[3]),
          fam("a_rs y^r y^s dy_i(a^jl) d_l(log eta)", mpq_class(-1, 4), mpq_class(-1, 4), T[4]),
          fam("y^j y^l dy_i d_l(log eta)", mpq_class(1, 2), mpq_class(1, 2), T[5]),
          fam("a_rs y^r y^s a^jl dy_i d_l(log eta)", mpq_class(-1, 4), mpq_class(-1, 4), T[6]),
          fam("dy_i(y^k y^s a^lj d_k(a_ls))", mpq_class(1, 2), mpq_class(1, 2), T[7]),
          fam("dy_i(y^k y^s a^lj d_l(a_ks))", mpq_class(-1, 4), mpq_class(-1, 4), T[8])};
}

std::vector<TermFamily> ar_s_curvature_families(const ARDecomposition& dec, const VolumeForm& vol) {
  ARData d(dec);
  const int n = d.n;
  const RatFn Q = d.quad();
  RatFn s1a(n), s1b(n), s1c(n), s2a(n), s2b(n), s3a(n), s3b(n), s3c(n), s4a(n), s4b(n), s4c(n), s4d(n), s5(n);
  for (int l = 0; l < n; ++l) s1a += d.y[l] * d.lb[l];
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) {
      RatFn yyda(n);
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) yyda += d.y[r] * d.y[s] * d.dya[m][r][s];
      s1b += yyda * d.ai[m][l] * d.lb[l];
      s1c += Q * d.dyai[m][m][l] * d.lb[l];
      const RatFn ddl = d.lb[l].dy(m + 1);
      s2a += d.y[m] * d.y[l] * ddl;
      s2b += Q * d.ai[m][l] * ddl;
      for (int k = 0; k < n; ++k) {
        s3a += d.y[k] * d.ai[m][l] * d.dxa[m][l][k];
        s3b += d.y[k] * d.ai[m][l] * d.dxa[k][l][m];
        s3c += d.y[k] * d.ai[m][l] * d.dxa[l][m][k];
        for (int s = 0; s < n; ++s) {
          const RatFn yy = d.y[k] * d.y[s];
          s4a += yy * d.dyai[m][m][l] * d.dxa[k][l][s];
          s4b += yy * d.dyai[m][m][l] * d.dxa[l][k][s];
          s4c += yy * d.ai[m][l] * d.dxa[k][l][s].dy(m + 1);
          s4d += yy * d.ai[m][l] * d.dxa[l][k][s].dy(m + 1);
        }
      }
    }
  if (vol.sigma.is_zero()) throw ZeroInput("volume density is zero");
  const RatFn inv = vol.sigma.inv();
  for (int m = 0; m < n; ++m) s5 += d.y[m] * vol.sigma.dx(m + 1) * inv;
  auto S = [&](const RatFn& r) { return scalar_tensor(d.f(r)); };
  const mpq_class half(1, 2), quarter(-1, 4);
  return {fam("y^l d_l(log eta)", mpq_class(n, 2), mpq_class(n, 2), S(s1a)),
          fam("y^r y^s a^ml dy_m(a_rs) d_l(log eta)", quarter, quarter, S(s1b)),
          fam("a_rs y^r y^s dy_m(a^ml) d_l(log eta)", quarter, quarter, S(s1c)),
          fam("y^m y^l dy_m d_l(log eta)", half, half, S(s2a)),
          fam("a_rs y^r y^s a^ml dy_m d_l(log eta)", quarter, quarter, S(s2b)),
          fam("y^k a^ml d_m(a_lk)", half, half, S(s3a)),
          fam("y^k a^ml d_k(a_lm)", half, half, S(s3b)),
          fam("y^k a^ml d_l(a_mk)", mpq_class(-1, 8), mpq_class(-1, 2), S(s3c)),
          fam("y^k y^s dy_m(a^ml) d_k(a_ls)", half, half, S(s4a)),
          fam("y^k y^s dy_m(a^ml) d_l(a_ks)", quarter, quarter, S(s4b)),
          fam("y^k y^s a^ml dy_m d_k(a_ls)", half, half, S(s4c)),
          fam("y^k y^s a^ml dy_m d_l(a_ks)", quarter, quarter, S(s4d)),
          fam("y^m d_m(log sigma)", mpq_class(-1), mpq_class(-1), S(s5))};
}

Comparison compare_families(const Tensor& target, const std::vector<TermFamily>& families) {
  const Tensor printed = assemble(families, false);
  if (printed == target) return {ClaimStatus::Holds, "printed formula matches", {}};

  bool have_ref = true;
  for (const auto& f : families) have_ref &= f.reference.has_value();
  if (have_ref && assemble(families, true) == target) {
    std::string detail = "printed coefficients differ from derived ones:", names;
    for (const auto& f : families) {
      if (*f.reference == f.printed) continue;
      detail += " [" + f.name + "] printed " + q_str(f.printed) + ", derived " + q_str(*f.reference) + ";";
      names += (names.empty() ? "" : "; ") + f.name;
    }
    detail.pop_back();
    return {ClaimStatus::Finding, detail, names};
  }

  const Tensor diff = sub(target, printed);
  for (const auto& f : families) {
    auto c = constant_multiple(diff, f.structure);
    if (!c) continue;
    const mpq_class fitted = f.printed + *c;
    return {ClaimStatus::Finding,
            "single-family discrepancy: [" + f.name + "] printed " + q_str(f.printed) + ", exact " + q_str(fitted),
            f.name};
  }

  for (std::size_t i = 0; i < target.size(); ++i)
    if (printed[i] != target[i])
      return {ClaimStatus::Fails, "printed formula differs from the computed object",
              "entry " + index_str(target.multi_index(i)) + ": printed " + clip(printed[i].str()) + " vs exact " +
                  clip(target[i].str())};
  return {ClaimStatus::Fails, "printed formula differs", {}};
}

bool f_is_rational(const FieldElem& F2) {
  if (F2.is_zero()) return true;
  if (!F2.is_rational()) return false;
  return F2.rational_part().sqrt().has_value();
}

VerificationReport rationality_report(FinslerSession& s, const std::optional<ARDecomposition>& dec) {
  VerificationReport rep;
  struct Row {
    const char* id;
    const char* object;
  };
  static const Row rows[] = {
      {"rational.I", "I"},         {"rational.G", "G"},
      {"rational.N", "N"},         {"rational.berwald_connection", "Gjk"},
      {"rational.berwald_curvature", "Gjkl"}, {"rational.douglas", "D"},
      {"rational.landsberg", "L"}, {"rational.mean_landsberg", "J"},
      {"rational.riemann", "R"},   {"rational.ricci", "Ric"},
      {"rational.weyl_printed", "W"}, {"rational.weyl_standard", "W_standard"},
      {"rational.chi", "chi"},     {"rational.S", "S"},
      {"rational.E", "E"},
  };
  for (const auto& r : rows) {
    const Tensor t = s.object(r.object);
    const std::string sup = "theta-support " + support_str(t.support());
    if (!dec) {
      rep.add(claim(r.id, ClaimStatus::NotApplicable, "metric is not AR; " + sup));
      continue;
    }
    if (t.is_rational())
      rep.add(claim(r.id, ClaimStatus::Holds, std::string(r.object) + " is rational in y; " + sup));
    else
      rep.add(claim(r.id, ClaimStatus::Fails, std::string(r.object) + " is not rational in y", sup));
  }
  if (!dec) {
    rep.add(claim("rational.dlog_eta_base", ClaimStatus::NotApplicable, "metric is not AR"));
  } else {
    const Tensor lb = dlog_eta_base(*dec);
    rep.add(claim("rational.dlog_eta_base", lb.is_rational() ? ClaimStatus::Holds : ClaimStatus::Fails,
                  "d_i log eta has theta-support " + support_str(lb.is_zero() ? std::set<int>{0} : lb.support())));
  }
  return rep;
}

namespace {

// q is a function of x alone: theta-support {0} and y-free.
bool x_only(const FieldElem& q) { return q.is_rational() && q.rational_part().is_y_free(); }

}  // namespace

VerificationReport consequence_report(FinslerSession& s, const std::optional<ARDecomposition>& dec) {
  VerificationReport rep;
  const int n = s.dim();
  const FieldElem& F2 = s.F2();
  const bool F_rational = f_is_rational(F2);

  // Isotropic S: S = (n+1) c(x) F  <=>  S^2 / F^2 = (n+1)^2 c^2 with c in Q(x).
  if (!dec) {
    rep.add(claim("thm.isotropic_s", ClaimStatus::NotApplicable, "metric is not AR"));
  } else if (F_rational) {
    rep.add(claim("thm.isotropic_s", ClaimStatus::NotApplicable, "F is rational in y"));
  } else {
    const FieldElem& S = s.s_curvature();
    if (S.is_zero()) {
      rep.add(claim("thm.isotropic_s", ClaimStatus::Holds, "S vanishes identically"));
    } else {
      const FieldElem q = S * S / F2;
      bool iso = x_only(q) && q.rational_part().scaled(mpq_class(1, (n + 1) * (n + 1))).sqrt().has_value();
      if (iso)
        rep.add(claim("thm.isotropic_s", ClaimStatus::Fails, "S is isotropic but nonzero",
                      "S^2/F^2 = " + clip(q.str())));
      else
        rep.add(claim("thm.isotropic_s", ClaimStatus::Holds,
                      "S is not isotropic: S^2/F^2 is not the square of a function of x; theta-support " +
                          support_str(theta_support(q))));
    }
  }

  // Isotropic J: J_k = c(x) F I_k.
  if (!dec) {
    rep.add(claim("thm.isotropic_j", ClaimStatus::NotApplicable, "metric is not AR"));
  } else if (F_rational) {
    rep.add(claim("thm.isotropic_j", ClaimStatus::NotApplicable, "F is rational in y"));
  } else {
    const Tensor& J = s.mean_landsberg();
    const Tensor& I = s.mean_cartan();
    if (J.is_zero()) {
      rep.add(claim("thm.isotropic_j", ClaimStatus::Holds, "J vanishes identically"));
    } else {
      std::optional<FieldElem> common;
      bool iso = true;
      for (int k = 0; k < n && iso; ++k) {
        if (I(k).is_zero()) {
          iso = J(k).is_zero();
          continue;
        }
        FieldElem q = J(k) * J(k) / (F2 * I(k) * I(k));
        if (common && *common != q) iso = false;
        common = q;
      }
      iso = iso && common && x_only(*common) && common->rational_part().sqrt().has_value();
      if (iso)
        rep.add(claim("thm.isotropic_j", ClaimStatus::Fails, "J is isotropic but nonzero",
                      "J_k^2/(F^2 I_k^2) = " + clip(common->str())));
      else
        rep.add(claim("thm.isotropic_j", ClaimStatus::Holds,
                      "J is not isotropic: no c(x) with J = c F I"));
    }
  }

  // Einstein: Ric = (n-1) K(x) F^2.
  if (!dec) {
    rep.add(claim("thm.einstein_ricci_flat", ClaimStatus::NotApplicable, "metric is not AR"));
  } else if (dec->eta_is_rational) {
    rep.add(claim("thm.einstein_ricci_flat", ClaimStatus::NotApplicable, "eta is rational in y"));
  } else {
    const FieldElem& Ric = s.ricci();
    if (Ric.is_zero()) {
      rep.add(claim("thm.einstein_ricci_flat", ClaimStatus::Holds, "Ric vanishes identically"));
    } else {
      const FieldElem q = Ric / F2;
      if (x_only(q))
        rep.add(claim("thm.einstein_ricci_flat", ClaimStatus::Fails, "Einstein with nonzero Ricci scalar",
                      "Ric/F^2 = " + clip(q.str())));
      else
        rep.add(claim("thm.einstein_ricci_flat", ClaimStatus::Holds,
                      "not Einstein: Ric/F^2 has theta-support " + support_str(theta_support(q)) +
                          (q.is_rational() ? " and depends on y" : "")));
    }
  }
  return rep;
}

namespace {

bool expected_ar(const MetricInstance& inst) {
  if (inst.family == "randers") {
    for (const auto& b : inst.beta->b)
      if (!b.is_zero()) return false;
    return true;
  }
  return inst.family != "raw";
}

ClaimRecord contractions_claim(FinslerSession& s) {
  const int n = s.dim();
  const Kernel& K = s.kernel();
  const auto& md = s.metric();
  const Tensor& C = s.cartan();
  const Tensor& G = s.spray();
  const Tensor& N = s.barthel();
  const Tensor& Gjk = s.berwald_connection();
  auto fail = [](std::string w) {
    return claim("pipeline.contractions", ClaimStatus::Fails, "contraction identity violated", std::move(w),
                 ClaimKind::Pipeline);
  };
  FieldElem quad(K);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) quad += fiber_var(K, i) * fiber_var(K, j) * md.g(i, j);
  if (quad != md.F2) return fail("y^i y^j g_ij != F^2");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FieldElem gg(K), yc(K), yn(K), yg(K);
      for (int k = 0; k < n; ++k) {
        gg += md.g(i, k) * md.ginv(k, j);
        yc += fiber_var(K, k) * C(k, i, j);
        yg += fiber_var(K, k) * Gjk(i, j, k);
      }
      if (gg != FieldElem::constant(K, mpq_class(i == j ? 1 : 0))) return fail("g g^-1 != identity");
      if (!yc.is_zero()) return fail("y^i C_ijk != 0");
      if (yg != N(i, j)) return fail("y^k G^i_jk != N^i_j");
    }
  for (int i = 0; i < n; ++i) {
    FieldElem yn(K);
    for (int j = 0; j < n; ++j) yn += fiber_var(K, j) * N(i, j);
    if (yn != G(i).scaled(mpq_class(2))) return fail("y^j N^i_j != 2 G^i");
  }
  return claim("pipeline.contractions", ClaimStatus::Holds,
               "y.g.y = F^2, g g^-1 = 1, y^i C_ijk = 0, y^j N^i_j = 2G^i, y^k G^i_jk = N^i_j", {},
               ClaimKind::Pipeline);
}

ClaimRecord homogeneity_claim(FinslerSession& s) {
  struct Row {
    const char* name;
    int degree;
  };
  static const Row ladder[] = {{"F2", 2},  {"g", 0},    {"C", -1},  {"I", -1},  {"G", 2},   {"N", 1},
                               {"Gjk", 0}, {"Gjkl", -1}, {"D", -1}, {"L", 0},   {"J", 0},   {"R", 2},
                               {"Ric", 2}, {"W", 2},    {"W_standard", 2}, {"chi", 1}, {"S", 1}, {"E", -1}};
  for (const auto& r : ladder) {
    const Tensor t = s.object(r.name);
    for (std::size_t f = 0; f < t.size(); ++f) {
      if (t[f].is_zero()) continue;
      auto d = k_homogeneity_degree(t[f]);
      if (!d || *d != r.degree)
        return claim("pipeline.homogeneity", ClaimStatus::Fails, "homogeneity degree mismatch",
                     std::string(r.name) + index_str(t.multi_index(f)) + " expected degree " +
                         std::to_string(r.degree),
                     ClaimKind::Pipeline);
    }
  }
  return claim("pipeline.homogeneity", ClaimStatus::Holds,
               "every entry has its expected degree of positive homogeneity in y", {}, ClaimKind::Pipeline);
}

}  // namespace

VerificationReport verify_instance(const MetricInstance& inst, FinslerSession& s, bool regular) {
  VerificationReport rep;
  const int n = s.dim();
  const Kernel& K = s.kernel();
  const auto& md = s.metric();
  const auto dec = detect_ar(md);
  const auto NA = ClaimStatus::NotApplicable;

  // Detection and Randers.
  {
    const bool want = expected_ar(inst);
    std::string d = dec ? "g = theta^" + std::to_string(dec->theta_deg) + " a with a rational; eta " +
                              (dec->eta_is_rational ? "rational" : "irrational") + " in y"
                        : "g has no common theta power";
    if (inst.family == "raw")
      rep.add(claim("ar.detect", ClaimStatus::Holds, d));
    else
      rep.add(claim("ar.detect", bool(dec) == want ? ClaimStatus::Holds : ClaimStatus::Fails, d));
    if (inst.family == "randers" && !want)
      rep.add(claim("thm.no_randers", dec ? ClaimStatus::Fails : ClaimStatus::Holds,
                    dec ? "Randers metric with nonzero beta decomposed as AR" : "Randers metric is not AR; " + d));
    else
      rep.add(claim("thm.no_randers", NA, "not a Randers metric with nonzero beta"));
  }

  if (dec) {
    const FieldElem eta = dec->eta();
    const FieldElem eta_inv = FieldElem::theta_pow(K, -dec->theta_deg);
    FieldElem quad(K);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) quad += fiber_var(K, i) * fiber_var(K, j) * dec->a(i, j);
    const FieldElem f2e = md.F2 * eta_inv;
    rep.add(claim("lemma.f2_over_eta_rational",
                  f2e == quad && f2e.is_rational() ? ClaimStatus::Holds : ClaimStatus::Fails,
                  "F^2/eta = a_ij y^i y^j"));
    bool inv_ok = true;
    for (std::size_t f = 0; f < md.ginv.size(); ++f) inv_ok &= md.ginv[f] == dec->ainv[f] * eta_inv;
    rep.add(claim("lemma.inverse_metric", inv_ok ? ClaimStatus::Holds : ClaimStatus::Fails, "g^ij = a^ij / eta"));

    if (n >= 2) {
      rep.add(claim("prop.dlog_eta_fiber",
                    dlog_eta_fiber_from_a(*dec) == dlog_eta_fiber(*dec) ? ClaimStatus::Holds : ClaimStatus::Fails,
                    "fiber derivative of log eta recovered from a alone"));
      rep.add(from_comparison("cor.mean_cartan_closed_form",
                              compare_families(s.mean_cartan(), mean_cartan_closed_form_families(*dec))));
    } else {
      rep.add(claim("prop.dlog_eta_fiber", NA, "needs n >= 2"));
      rep.add(claim("cor.mean_cartan_closed_form", NA, "needs n >= 2"));
    }
    rep.add(from_comparison("prop.mean_cartan_formula",
                            compare_families(s.mean_cartan(), mean_cartan_scalar_families(*dec))));

    // delta log eta and the parallel-metric step behind it.
    const DeltaLogEta dl = delta_log_eta(*dec, md, s.barthel(), s.berwald_connection(), s.mean_landsberg());
    if (dl.lhs != dl.trace) {
      rep.add(claim("prop.delta_log_eta", ClaimStatus::Fails,
                    "residual differs from (1/n) g^ij g_ij|k", {}, ClaimKind::Pipeline));
    } else if (dl.lhs.is_zero()) {
      rep.add(claim("prop.delta_log_eta", ClaimStatus::Holds, "delta_k log eta = -(1/n) a^ij a_ij|k"));
    } else if (dl.j_multiple) {
      rep.add(claim("prop.delta_log_eta", ClaimStatus::Finding,
                    "identity holds only up to (1/n) g^ij g_ij|k = " + q_str(*dl.j_multiple) +
                        " J_k; it needs g_ij|k = 0, which fails for the Berwald connection unless J = 0",
                    "residual = " + q_str(*dl.j_multiple) + " J_k"));
    } else {
      rep.add(claim("prop.delta_log_eta", ClaimStatus::Fails, "residual is not a constant multiple of J"));
    }

    const CriterionVerdicts v = riemannian_verdicts(*dec, s.cartan());
    const std::string vd = std::string("verdicts: eta ") + (v.by_eta ? "yes" : "no") + ", a " +
                           (v.by_a ? "yes" : "no") + ", C = 0 " + (v.cartan_zero ? "yes" : "no");
    if (v.agree())
      rep.add(claim("thm.riemannian_criterion", ClaimStatus::Holds,
                    std::string(v.cartan_zero ? "Riemannian" : "not Riemannian") + "; " + vd));
    else if (!regular)
      rep.add(claim("thm.riemannian_criterion", NA,
                    "metric is not positive definite; I = 0 does not force C = 0 here; " + vd));
    else
      rep.add(claim("thm.riemannian_criterion", ClaimStatus::Fails, "verdicts diverge on a regular metric", vd));

    rep.add(from_comparison("prop.spray_ar_form", compare_families(s.spray(), ar_spray_families(*dec))));
    rep.add(from_comparison("prop.barthel_ar_form", compare_families(s.barthel(), ar_barthel_families(*dec))));
    rep.add(from_comparison("prop.s_curvature_ar_form",
                            compare_families(scalar_tensor(s.s_curvature()),
                                             ar_s_curvature_families(*dec, s.volume()))));
  } else {
    for (const char* id : {"lemma.f2_over_eta_rational", "lemma.inverse_metric", "prop.dlog_eta_fiber",
                           "prop.mean_cartan_formula", "cor.mean_cartan_closed_form", "prop.delta_log_eta",
                           "thm.riemannian_criterion", "prop.spray_ar_form", "prop.barthel_ar_form",
                           "prop.s_curvature_ar_form"})
      rep.add(claim(id, NA, "metric is not AR"));
  }

  // g_ij|k = 0 for the Berwald connection.
  {
    const Tensor gh = berwald_hcov(md.g, s.barthel(), s.berwald_connection());
    if (gh.is_zero()) {
      rep.add(claim("proof.g_hcov_zero", ClaimStatus::Holds, "g_ij|k = 0"));
    } else if (auto c = constant_multiple(gh, s.landsberg())) {
      rep.add(claim("proof.g_hcov_zero", ClaimStatus::Finding,
                    "g_ij|k = " + q_str(*c) + " L_ijk for the Berwald connection; it vanishes only for Landsberg metrics",
                    "g_ij|k = " + q_str(*c) + " L_ijk"));
    } else {
      rep.add(claim("proof.g_hcov_zero", ClaimStatus::Fails, "g_ij|k is nonzero and not a multiple of L"));
    }
  }

  // Second printed form of the spray.
  {
    Tensor t1(K, "u"), t2(K, "u");
    for (int i = 0; i < n; ++i) {
      FieldElem a1(K), a2(K);
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const FieldElem yy = fiber_var(K, k) * fiber_var(K, l);
            const FieldElem d1 = md.g(r, l).pdiff_base(k);
            const FieldElem d2 = md.g(k, l).pdiff_base(r);
            if (!d1.is_zero()) a1 += md.ginv(i, r) * yy * d1;
            if (!d2.is_zero()) a2 += md.ginv(i, r) * yy * d2;
          }
      t1(i) = a1;
      t2(i) = a2;
    }
    std::vector<TermFamily> fams = {fam("g^ir y^k y^s d_k(g_rs)", mpq_class(1, 2), mpq_class(1, 2), t1),
                                    fam("g^ir y^l y^s d_r(g_ls)", mpq_class(-1), mpq_class(-1, 4), t2)};
    rep.add(from_comparison("eq.spray_definition", compare_families(s.spray(), fams)));
  }

  rep.merge(rationality_report(s, dec));
  rep.merge(consequence_report(s, dec));

  // Printed closed forms attached to the family.
  const PrintedForms& pf = inst.printed;
  std::optional<RatFn> rescale;  // printed eta / theta^k
  if (dec && pf.eta) {
    const FieldElem r = *pf.eta * FieldElem::theta_pow(K, -dec->theta_deg);
    if (r.is_rational() && !r.is_zero()) rescale = r.rational_part();
  }
  if (!pf.a.empty()) {
    if (!dec)
      rep.add(claim("printed.eta_a", NA, "metric is not AR"));
    else if (!rescale)
      rep.add(claim("printed.eta_a", ClaimStatus::Fails, "printed eta is not theta^k times a rational function"));
    else
      rep.add(from_comparison("printed.eta_a", compare_families(scaled(dec->a, FieldElem(K, rescale->inv())), pf.a)));
  } else {
    rep.add(claim("printed.eta_a", NA, "no printed decomposition for this family"));
  }
  if (!pf.g.empty())
    rep.add(from_comparison("printed.metric_tensor", compare_families(md.g, pf.g)));
  else
    rep.add(claim("printed.metric_tensor", NA, "no printed metric tensor for this family"));
  auto dlog_claim = [&](const char* id, const std::vector<TermFamily>& fams, bool fiber) {
    if (fams.empty()) return rep.add(claim(id, NA, "no printed formula for this family"));
    if (!dec || !rescale) return rep.add(claim(id, NA, "printed eta unavailable"));
    Tensor target = fiber ? dlog_eta_fiber(*dec) : dlog_eta_base(*dec);
    for (int i = 0; i < n; ++i) {
      RatFn d = fiber ? rescale->dy(i + 1) : rescale->dx(i + 1);
      if (!d.is_zero()) target(i) += FieldElem(K, d / *rescale);
    }
    rep.add(from_comparison(id, compare_families(target, fams)));
  };
  dlog_claim("printed.dlog_eta_fiber", pf.dlog_fiber, true);
  dlog_claim("printed.dlog_eta_base", pf.dlog_base, false);
  if (!pf.gen_metric.empty())
    rep.add(from_comparison("eq.gen_metric", compare_families(md.g, pf.gen_metric)));
  else
    rep.add(claim("eq.gen_metric", NA, "not an (alpha, beta) metric"));

  // Two routes to the mean Landsberg curvature.
  {
    const Tensor& J = s.mean_landsberg();
    const Tensor& Jc = s.mean_landsberg_covariant();
    Tensor negJc = Jc;
    for (std::size_t i = 0; i < negJc.size(); ++i) negJc[i] = -negJc[i];
    if (J == Jc && J == negJc)
      rep.add(claim("pipeline.mean_landsberg_dual", ClaimStatus::Holds, "J = 0 by both routes", {},
                    ClaimKind::Pipeline));
    else if (J == Jc)
      rep.add(claim("pipeline.mean_landsberg_dual", ClaimStatus::Holds, "g^ij L_ijk = y^s I_k|s", {},
                    ClaimKind::Pipeline));
    else if (J == negJc)
      rep.add(claim("pipeline.mean_landsberg_dual", ClaimStatus::Finding,
                    "g^ij L_ijk = -(y^s I_k|s): the printed L = +1/2 y_s G^s_ijk has the opposite sign to the "
                    "usual convention",
                    "sign convention", ClaimKind::Pipeline));
    else
      rep.add(claim("pipeline.mean_landsberg_dual", ClaimStatus::Fails, "trace and covariant routes disagree", {},
                    ClaimKind::Pipeline));
  }
  rep.add(contractions_claim(s));
  rep.add(homogeneity_claim(s));

  // Report in registry order.
  VerificationReport ordered;
  for (const auto& id : claim_registry()) ordered.add(rep.at(id));
  return ordered;
}

}  // namespace arf
