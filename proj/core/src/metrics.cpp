#include "arfinsler/metrics.hpp"

#include <cmath>
#include <random>

#include "arfinsler/errors.hpp"

namespace arf {

namespace {

// ---------------------------------------------------------------------------
// Laurent polynomials in s

Laurent lmul(const Laurent& a, const Laurent& b) {
  Laurent r;
  for (const auto& [p, c] : a)
    for (const auto& [q, d] : b) r[p + q] += c * d;
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

Laurent ladd(Laurent a, const Laurent& b, const mpq_class& scale = 1) {
  for (const auto& [p, c] : b) a[p] += scale * c;
  std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
  return a;
}

Laurent lderiv(const Laurent& a) {
  Laurent r;
  for (const auto& [p, c] : a)
    if (p != 0) r[p - 1] += c * p;
  return r;
}

Laurent lshift(const Laurent& a, int k) {
  Laurent r;
  for (const auto& [p, c] : a) r[p + k] = c;
  return r;
}

struct AlphaBetaCoeffs {
  Laurent rho, rho0, rho1;
};

// g = rho alpha_ij + rho0 b_i b_j + rho1 / alpha (b_i y_j + b_j y_i - s/alpha y_i y_j)
AlphaBetaCoeffs alpha_beta_coeffs(const Laurent& phi) {
  Laurent d1 = lderiv(phi), d2 = lderiv(d1);
  Laurent s{{1, mpq_class(1)}};
  AlphaBetaCoeffs c;
  c.rho = ladd(lmul(phi, phi), lmul(s, lmul(phi, d1)), -1);
  c.rho0 = ladd(lmul(phi, d2), lmul(d1, d1));
  c.rho1 = ladd(lmul(phi, d1), lmul(s, c.rho0), -1);
  return c;
}

// ---------------------------------------------------------------------------
// alpha and beta inside K

class AlphaBeta {
 public:
  AlphaBeta(Kernel k, const RiemannData& a, const OneFormData& b) : k_(std::move(k)), n_(k_->n) {
    alpha2_ = alpha_squared(a, n_);
    beta_ = beta_form(b, n_);
    alpha_ = a.alpha;
    b_ = b.b;
    as_theta_ = k_->m == 2 && k_->A == alpha2_;
  }

  // alpha^e.
  FieldElem alpha_pow(int e) const {
    if (as_theta_) return FieldElem::theta_pow(k_, e);
    if (e % 2) throw Unrepresentable("odd power of alpha is outside the kernel field");
    return FieldElem(k_, alpha2_.pow(e / 2));
  }
  // s^p = beta^p alpha^-p.
  FieldElem s_pow(int p) const { return alpha_pow(-p).scaled(beta_.pow(p)); }
  // s^p alpha^e, representable whenever e - p is even.
  FieldElem s_pow(int p, int e) const { return alpha_pow(e - p).scaled(beta_.pow(p)); }

  FieldElem rat(const RatFn& r) const { return FieldElem(k_, r); }
  const RatFn& beta() const { return beta_; }
  const RatFn& alpha2() const { return alpha2_; }

  RatFn y_low(int i) const {
    RatFn s(n_);
    for (int j = 0; j < n_; ++j) s += alpha_[i][j] * RatFn::y(n_, j + 1);
    return s;
  }

  Tensor alpha_tensor() const {
    Tensor t(k_, "ll");
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(i, j) = rat(alpha_[i][j]);
    return t;
  }
  Tensor bb_tensor() const {
    Tensor t(k_, "ll");
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(i, j) = rat(b_[i] * b_[j]);
    return t;
  }
  // b_i y_j + b_j y_i - s/alpha y_i y_j; the mixed family carries a further 1/alpha.
  Tensor mixed_tensor() const {
    Tensor t(k_, "ll");
    const RatFn s_over_alpha = beta_ / alpha2_;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        RatFn yi = y_low(i), yj = y_low(j);
        t(i, j) = rat(b_[i] * yj + b_[j] * yi - s_over_alpha * yi * yj);
      }
    return t;
  }

  const Kernel& kernel() const { return k_; }

 private:
  Kernel k_;
  int n_;
  RatFn alpha2_, beta_;
  std::vector<std::vector<RatFn>> alpha_;
  std::vector<RatFn> b_;
  bool as_theta_ = false;
};

Tensor scaled_tensor(const Tensor& t, const FieldElem& f) {
  Tensor r = t;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!r[i].is_zero()) r[i] = r[i] * f;
  return r;
}

// Families "name*s^p" from a printed and a reference Laurent coefficient map.
void add_s_families(std::vector<TermFamily>& out, const std::string& name, const AlphaBeta& ab,
                    const Tensor& base, const Laurent& printed, const std::optional<Laurent>& reference,
                    int alpha_exp = 0) {
  std::set<int> powers;
  for (const auto& kv : printed) powers.insert(kv.first);
  if (reference)
    for (const auto& kv : *reference) powers.insert(kv.first);
  for (int p : powers) {
    TermFamily f;
    f.name = name + "*s^" + std::to_string(p);
    auto it = printed.find(p);
    f.printed = it == printed.end() ? mpq_class(0) : it->second;
    f.printed.canonicalize();
    if (reference) {
      auto jt = reference->find(p);
      f.reference = jt == reference->end() ? mpq_class(0) : jt->second;
    }
    f.structure = scaled_tensor(base, ab.s_pow(p, alpha_exp));
    out.push_back(std::move(f));
  }
}

std::vector<TermFamily> gen_metric_families(const AlphaBeta& ab, const Laurent& phi) {
  auto c = alpha_beta_coeffs(phi);
  std::vector<TermFamily> out;
  add_s_families(out, "alpha_ij", ab, ab.alpha_tensor(), c.rho, c.rho);
  add_s_families(out, "b_i*b_j", ab, ab.bb_tensor(), c.rho0, c.rho0);
  add_s_families(out, "mixed/alpha", ab, ab.mixed_tensor(), c.rho1, c.rho1, -1);
  return out;
}

FieldElem f2_from_phi(const AlphaBeta& ab, const Laurent& phi) {
  Laurent sq = lmul(phi, phi);
  FieldElem out(ab.kernel());
  for (const auto& [p, c] : sq) out += ab.s_pow(p).scaled(c) * ab.alpha_pow(2);
  return out;
}

void check_alpha(const RiemannData& a, int n) {
  if (static_cast<int>(a.alpha.size()) != n) throw ArityError("alpha must be an n x n matrix");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(a.alpha[i].size()) != n) throw ArityError("alpha must be an n x n matrix");
    for (int j = 0; j < n; ++j) {
      if (!a.alpha[i][j].is_y_free()) throw InvalidArgument("alpha_ij must depend on x only");
      if (a.alpha[i][j] != a.alpha[j][i]) throw ArityError("alpha must be symmetric");
    }
  }
}

void check_beta(const OneFormData& b, int n) {
  if (static_cast<int>(b.b.size()) != n) throw ArityError("b must have n components");
  bool zero = true;
  for (const auto& c : b.b) {
    if (!c.is_y_free()) throw InvalidArgument("b_i must depend on x only");
    zero &= c.is_zero();
  }
  if (zero) throw ZeroOneForm("one-form beta vanishes identically");
}

int dim_of(const RiemannData& a) { return static_cast<int>(a.alpha.size()); }

// Hessian and gradient structures of a root kernel polynomial.
Tensor hessian_tensor(const Kernel& k, const RatFn& A, const FieldElem& factor) {
  const int n = k->n;
  Tensor t(k, "ll");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = factor.scaled(A.dy(i + 1).dy(j + 1));
  return t;
}

Tensor gradient_tensor(const Kernel& k, const RatFn& A, const FieldElem& factor) {
  const int n = k->n;
  Tensor t(k, "ll");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = factor.scaled(A.dy(i + 1) * A.dy(j + 1));
  return t;
}

TermFamily family(std::string name, mpq_class printed, std::optional<mpq_class> reference, Tensor s) {
  printed.canonicalize();
  if (reference) reference->canonicalize();
  return TermFamily{std::move(name), std::move(printed), std::move(reference), std::move(s)};
}

}  // namespace

Tensor assemble(const std::vector<TermFamily>& families, bool use_reference) {
  if (families.empty()) throw InvalidArgument("no term families");
  Tensor out(families.front().structure.kernel(), families.front().structure.variance());
  for (const auto& f : families) {
    mpq_class c = use_reference ? f.reference.value_or(f.printed) : f.printed;
    if (c == 0) continue;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!f.structure[i].is_zero()) out[i] += f.structure[i].scaled(c);
  }
  return out;
}

RatFn alpha_squared(const RiemannData& a, int n) {
  RatFn s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!a.alpha[i][j].is_zero()) s += a.alpha[i][j] * RatFn::y(n, i + 1) * RatFn::y(n, j + 1);
  return s;
}

RatFn beta_form(const OneFormData& b, int n) {
  RatFn s(n);
  for (int i = 0; i < n; ++i)
    if (!b.b[i].is_zero()) s += b.b[i] * RatFn::y(n, i + 1);
  return s;
}

MetricInstance make_riemannian(const RiemannData& a) {
  const int n = dim_of(a);
  check_alpha(a, n);
  MetricInstance inst;
  inst.family = "riemannian";
  inst.n = n;
  inst.kernel = trivial_kernel(n);
  inst.F2 = FieldElem(inst.kernel, alpha_squared(a, n));
  inst.alpha = a;
  {
    std::vector<std::vector<FieldElem>> m(n, std::vector<FieldElem>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] = FieldElem(inst.kernel, a.alpha[i][j]);
    if (determinant(m).is_zero()) throw Degenerate("alpha is singular");
  }
  return inst;
}

MetricInstance make_randers(const RiemannData& a, const OneFormData& b,
                            const std::vector<std::vector<mpq_class>>& points) {
  const int n = dim_of(a);
  check_alpha(a, n);
  if (static_cast<int>(b.b.size()) != n) throw ArityError("b must have n components");
  MetricInstance inst;
  inst.family = "randers";
  inst.n = n;
  RatFn a2 = alpha_squared(a, n);
  inst.kernel = make_kernel(n, 2, a2);
  inst.alpha = a;
  inst.beta = b;
  inst.phi = Laurent{{0, mpq_class(1)}, {1, mpq_class(1)}};
  AlphaBeta ab(inst.kernel, a, b);
  inst.F2 = f2_from_phi(ab, *inst.phi);
  bool b_zero = true;
  for (const auto& c : b.b) b_zero &= c.is_zero();
  if (!b_zero) inst.printed.gen_metric = gen_metric_families(ab, *inst.phi);

  // Printed closed form of g for alpha Euclidean in the plane and b = (c(x), c(x)).
  const bool plane = n == 2 && a.alpha[0][0].is_one() && a.alpha[1][1].is_one() && a.alpha[0][1].is_zero();
  if (plane && !b_zero && b.b[0] == b.b[1]) {
    const RatFn& c = b.b[0];
    const RatFn y1 = RatFn::y(n, 1), y2 = RatFn::y(n, 2);
    const FieldElem inv3 = FieldElem::theta_pow(inst.kernel, -3);
    Tensor delta(inst.kernel, "ll"), csq(inst.kernel, "ll"), cubes(inst.kernel, "ll"), own(inst.kernel, "ll"),
        cross(inst.kernel, "ll");
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        csq(i, j) = ab.rat(c * c);
        cubes(i, j) = inv3.scaled(c * (y1.pow(3) + y2.pow(3)));
      }
    delta(0, 0) = delta(1, 1) = ab.rat(RatFn(n, mpq_class(1)));
    own(0, 0) = inv3.scaled(c * y1.pow(3));
    own(1, 1) = inv3.scaled(c * y2.pow(3));
    cross(0, 0) = inv3.scaled(c * y1 * y2 * y2);
    cross(1, 1) = inv3.scaled(c * y2 * y1 * y1);
    auto& g = inst.printed.g;
    g.push_back(family("delta_ij", 1, 1, delta));
    g.push_back(family("c^2", 1, 1, csq));
    g.push_back(family("c (y1^3 + y2^3) / alpha^3", 1, 1, cubes));
    g.push_back(family("diag c y_i^3 / alpha^3", 0, 1, own));
    g.push_back(family("diag c y_i y_j^2 / alpha^3", 1, 3, cross));
  }

  // |beta|_alpha^2 = alpha^ij b_i b_j at each declared point.
  if (!points.empty() && !b_zero) {
    Kernel triv = trivial_kernel(n);
    Tensor at(triv, "ll");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) at(i, j) = FieldElem(triv, a.alpha[i][j]);
    Tensor ainv = inverse_matrix(at);
    RatFn norm2(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) norm2 += ainv(i, j).rational_part() * b.b[i] * b.b[j];
    for (const auto& p : points)
      if (norm2.eval(p) >= 1) throw NormViolation("|beta|_alpha >= 1 at a sample point");
  }
  return inst;
}

MetricInstance make_gen_kropina(const RiemannData& a, const OneFormData& b, int k) {
  const int n = dim_of(a);
  check_alpha(a, n);
  check_beta(b, n);
  if (k < 1) throw InvalidArgument("generalized Kropina exponent must be a positive integer");
  MetricInstance inst;
  inst.family = "gen_kropina";
  inst.n = n;
  inst.kernel = trivial_kernel(n);
  inst.alpha = a;
  inst.beta = b;
  inst.kropina_k = k;
  inst.phi = Laurent{{-k, mpq_class(1)}};
  AlphaBeta ab(inst.kernel, a, b);
  inst.F2 = f2_from_phi(ab, *inst.phi);

  auto& pf = inst.printed;
  pf.gen_metric = gen_metric_families(ab, *inst.phi);
  // Printed eta = 1/s^(2k); a_ij = g_ij / eta.
  pf.eta = ab.s_pow(-2 * k);
  auto c = alpha_beta_coeffs(*inst.phi);
  const mpq_class K(k);
  add_s_families(pf.a, "alpha_ij", ab, ab.alpha_tensor(), Laurent{{0, K + 1}}, lshift(c.rho, 2 * k));
  add_s_families(pf.a, "b_i*b_j", ab, ab.bb_tensor(), Laurent{{-2, K * (2 * K + 1)}}, lshift(c.rho0, 2 * k));
  add_s_families(pf.a, "mixed/alpha", ab, ab.mixed_tensor(), Laurent{{-1, -K * (K + 2)}}, lshift(c.rho1, 2 * k), -1);

  // d/dy^r log eta = -2k b_r / beta + 2k y_r / alpha^2
  Tensor br(inst.kernel, "l"), yr(inst.kernel, "l");
  for (int r = 0; r < n; ++r) {
    br(r) = ab.rat(b.b[r] / ab.beta());
    yr(r) = ab.rat(ab.y_low(r) / ab.alpha2());
  }
  pf.dlog_fiber.push_back(family("b_r/beta", -2 * K, -2 * K, br));
  pf.dlog_fiber.push_back(family("y_r/alpha^2", 2 * K, 2 * K, yr));
  // d/dx^r log eta = -2k y^i d_r b_i / beta + k y^i y^j d_r alpha_ij / alpha^2
  Tensor db(inst.kernel, "l"), da(inst.kernel, "l");
  for (int r = 0; r < n; ++r) {
    db(r) = ab.rat(ab.beta().dx(r + 1) / ab.beta());
    da(r) = ab.rat(ab.alpha2().dx(r + 1) / ab.alpha2());
  }
  pf.dlog_base.push_back(family("d_r(beta)/beta", -2 * K, -2 * K, db));
  pf.dlog_base.push_back(family("d_r(alpha^2)/alpha^2", K, K, da));
  return inst;
}

MetricInstance make_poly_ab(const RiemannData& alpha, const OneFormData& beta, const mpq_class& a,
                            const mpq_class& b, int k, int m) {
  const int n = dim_of(alpha);
  check_alpha(alpha, n);
  check_beta(beta, n);
  if (((k - m) % 2 + 2) % 2 != 0) throw ParityViolation("poly (alpha,beta) metric needs k = m mod 2");
  Laurent phi;
  phi[k] += a;
  phi[m] += b;
  std::erase_if(phi, [](const auto& kv) { return kv.second == 0; });
  if (phi.empty()) throw Degenerate("phi vanishes identically");
  // phi - s phi' = sum (1 - p) c_p s^p; zero exactly when phi is a multiple of s.
  bool degenerate = true;
  for (const auto& [p, c] : phi) degenerate &= p == 1;
  if (degenerate) throw Degenerate("phi(s) is proportional to s: F = c*beta has a singular metric tensor");

  MetricInstance inst;
  inst.family = "poly_ab";
  inst.n = n;
  inst.kernel = trivial_kernel(n);
  inst.alpha = alpha;
  inst.beta = beta;
  inst.phi = phi;
  AlphaBeta ab(inst.kernel, alpha, beta);
  inst.F2 = f2_from_phi(ab, phi);

  auto& pf = inst.printed;
  pf.gen_metric = gen_metric_families(ab, phi);
  pf.eta = FieldElem::constant(inst.kernel, 1);
  // First printed form of g_ij, transcribed term by term; "n" is the dimension.
  const mpq_class K(k), M(m), N(n);
  Laurent p_alpha, p_bb, p_mixed;
  p_alpha[2 * m] += -a * a * (M - 1);
  p_alpha[m + k] += -a * b * (K - 1) - a * b * (M - 1);
  p_alpha[2 * k] += -b * b * (K - 1);
  p_bb[2 * m - 2] += a * a * M * (2 * M - 1);
  p_bb[2 * k - 2] += b * b * K * (2 * K - 1);
  p_bb[m + k - 2] += a * b * (M + K - 1) * (M + N);
  p_mixed[2 * m - 1] += -2 * a * a * M * (M - 1);
  p_mixed[2 * k - 1] += -b * b * K * (K - 1);
  p_mixed[m + k - 1] += -a * b * (M + K - 2) * (M + K);
  for (auto* l : {&p_alpha, &p_bb, &p_mixed})
    std::erase_if(*l, [](const auto& kv) { return kv.second == 0; });
  auto c = alpha_beta_coeffs(phi);
  add_s_families(pf.a, "alpha_ij", ab, ab.alpha_tensor(), p_alpha, c.rho);
  add_s_families(pf.a, "b_i*b_j", ab, ab.bb_tensor(), p_bb, c.rho0);
  add_s_families(pf.a, "mixed/alpha", ab, ab.mixed_tensor(), p_mixed, c.rho1, -1);
  // Printed: both logarithmic derivatives of eta vanish.
  Tensor zero(inst.kernel, "l");
  pf.dlog_fiber.push_back(family("zero", 0, 0, zero));
  pf.dlog_base.push_back(family("zero", 0, 0, zero));
  return inst;
}

RatFn root_polynomial(const RootData& r, int n) {
  if (r.A) return *r.A;
  RatFn A(n);
  for (const auto& [idx, c] : r.coeffs) {
    if (static_cast<int>(idx.size()) != r.m) throw ArityError("root coefficient needs exactly m indices");
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != idx) throw ArityError("root coefficient indices must be sorted");
    // Number of distinct orderings of the tuple.
    mpz_class count = 1;
    for (int f = 2; f <= r.m; ++f) count *= f;
    std::map<int, int> mult;
    for (int i : idx) {
      if (i < 1 || i > n) throw ArityError("root coefficient index out of range");
      ++mult[i];
    }
    for (const auto& kv : mult)
      for (int f = 2; f <= kv.second; ++f) count /= f;
    RatFn mono(n, mpq_class(count));
    for (int i : idx) mono = mono * RatFn::y(n, i);
    A += c * mono;
  }
  return A;
}

namespace {

MetricInstance root_instance(const RootData& r, int n, bool extended) {
  if (r.m < 2) throw InvalidArgument("root order must be at least 2");
  if (!extended) {
    for (const auto& kv : r.coeffs)
      if (!kv.second.is_y_free()) throw HomogeneityViolation("m-th root coefficients must depend on x only");
  } else {
    for (const auto& kv : r.coeffs) {
      if (kv.second.is_zero()) continue;
      auto d = y_homogeneity_degree(kv.second);
      if (!d || *d != 0) throw HomogeneityViolation("extended root coefficients must be homogeneous of degree 0");
    }
  }
  RatFn A = root_polynomial(r, n);
  if (A.is_zero()) throw ZeroPolynomial("root kernel polynomial is zero");
  if (!extended && !A.den().is_constant() && !RatFn(A.den()).is_y_free())
    throw HomogeneityViolation("m-th root kernel must be polynomial in y");
  MetricInstance inst;
  inst.family = extended ? "extended_mth_root" : "mth_root";
  inst.n = n;
  inst.kernel = make_kernel(n, r.m, A);
  inst.F2 = FieldElem::theta_pow(inst.kernel, 2);
  inst.root = A;
  inst.root_m = r.m;
  inst.nondegenerate_only = r.m % 2 == 1;

  const int m = r.m;
  const mpq_class M(m);
  auto& pf = inst.printed;
  const FieldElem one = FieldElem::constant(inst.kernel, 1);
  const FieldElem lead = FieldElem::theta_pow(inst.kernel, 2 - 2 * m);
  const FieldElem Aelem(inst.kernel, A);
  // Reference: g = 1/2 d2(A^(2/m)) = (1/m) A^(2/m-2) [A A_ij + (2/m - 1) A_i A_j].
  const mpq_class grad_ref_g = (2 - M) / (M * M);
  pf.g.push_back(family("theta^(2-2m)*A*A_ij", 1 / M, 1 / M, hessian_tensor(inst.kernel, A, lead * Aelem)));
  pf.g.push_back(family("theta^(2-2m)*A_i*A_j", grad_ref_g, grad_ref_g, gradient_tensor(inst.kernel, A, lead)));
  Tensor dA(inst.kernel, "l"), dxA(inst.kernel, "l");
  for (int i = 0; i < n; ++i) {
    dA(i) = FieldElem(inst.kernel, A.dy(i + 1) / A);
    dxA(i) = FieldElem(inst.kernel, A.dx(i + 1) / A);
  }
  if (!extended) {
    pf.eta = lead.scaled(1 / M);
    pf.a.push_back(family("A*A_ij", 1, 1, hessian_tensor(inst.kernel, A, Aelem)));
    pf.a.push_back(family("A_i*A_j", -(2 - M) / M, (2 - M) / M, gradient_tensor(inst.kernel, A, one)));
    const mpq_class printed = 2 * (1 - M) / (M * M), ref = (2 - 2 * M) / M;
    pf.dlog_fiber.push_back(family("A_i/A", printed, ref, dA));
    pf.dlog_base.push_back(family("d_i(A)/A", printed, ref, dxA));
  } else {
    pf.eta = lead;
    pf.a.push_back(family("A*A_ij", 1 / M, 1 / M, hessian_tensor(inst.kernel, A, Aelem)));
    pf.a.push_back(family("A_i*A_j", -(2 - M) / (M * M), (2 - M) / (M * M), gradient_tensor(inst.kernel, A, one)));
    pf.dlog_fiber.push_back(family("A_i/A", (2 - 2 * M) / M, (2 - 2 * M) / M, dA));
  }
  return inst;
}

}  // namespace

MetricInstance make_mth_root(const RootData& r, int n) { return root_instance(r, n, false); }

MetricInstance make_extended_mth_root(const RootData& r, int n) { return root_instance(r, n, true); }

MetricInstance make_kropina_change(const MetricInstance& base, const OneFormData& b, int k) {
  if (!base.root) throw InvalidArgument("Kropina change needs an m-th root or extended m-th root base");
  const int n = base.n;
  check_beta(b, n);
  if (k < 1) throw InvalidArgument("Kropina change exponent must be a positive integer");
  const RatFn beta = beta_form(b, n);
  MetricInstance inst;
  inst.family = "kropina_change";
  inst.n = n;
  inst.kernel = base.kernel;
  inst.beta = b;
  inst.root = base.root;
  inst.root_m = base.root_m;
  inst.kropina_k = k;
  inst.nondegenerate_only = true;
  inst.F2 = FieldElem::monomial(inst.kernel, beta.pow(-2 * k), 2 * k + 2);

  const int m = base.root_m;
  const RatFn& A = *base.root;
  const mpq_class K(k), M(m);
  auto& pf = inst.printed;
  pf.eta = FieldElem::monomial(inst.kernel, beta.pow(-2 * k), 2 * k + 2 - m);
  Tensor bb(inst.kernel, "ll"), mixed(inst.kernel, "ll");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bb(i, j) = FieldElem(inst.kernel, A * b.b[i] * b.b[j] / (beta * beta));
      mixed(i, j) = FieldElem(inst.kernel, (b.b[j] * A.dy(i + 1) + b.b[i] * A.dy(j + 1)) / beta);
    }
  const FieldElem one = FieldElem::constant(inst.kernel, 1);
  const FieldElem invA(inst.kernel, A.inv());
  const mpq_class c_bb = K * (2 * K + 1), c_h = (K + 1) / M, c_g = (K + 1) * (2 * K - M + 2) / (M * M),
                  c_m = -2 * K * (K + 1) / M;
  pf.a.push_back(family("A*b_i*b_j/beta^2", c_bb, c_bb, bb));
  pf.a.push_back(family("A_ij", c_h, c_h, hessian_tensor(inst.kernel, A, one)));
  pf.a.push_back(family("A_i*A_j/A", c_g, c_g, gradient_tensor(inst.kernel, A, invA)));
  pf.a.push_back(family("(b_j*A_i+b_i*A_j)/beta", c_m, c_m, mixed));
  return inst;
}

MetricInstance make_raw(Kernel k, FieldElem F2) {
  MetricInstance inst;
  inst.family = "raw";
  inst.n = k->n;
  inst.kernel = std::move(k);
  inst.F2 = std::move(F2);
  inst.nondegenerate_only = true;
  return inst;
}

namespace {

double to_double(const mpq_class& q) { return q.get_d(); }

double eval_double(const FieldElem& f, std::span<const mpq_class> point, double theta) {
  auto c = f.eval_coeffs(point);
  double s = 0, t = 1;
  for (const auto& v : c) {
    s += to_double(v) * t;
    t *= theta;
  }
  return s;
}

double det_double(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

}  // namespace

PositivitySample sample_positivity(const MetricInstance& inst, const MetricData& md,
                                   const std::vector<std::vector<mpq_class>>& points) {
  PositivitySample out;
  const int n = inst.n;
  for (const auto& p : points) {
    mpq_class A0;
    try {
      A0 = inst.kernel->A.eval(p);
    } catch (const DivisionByZero&) {
      continue;
    }
    if (A0 <= 0) continue;
    const double theta = std::pow(to_double(A0), 1.0 / inst.kernel->m);
    try {
      ++out.points;
      double f2 = eval_double(inst.F2, p, theta);
      std::vector<std::vector<double>> g(n, std::vector<double>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = eval_double(md.g(i, j), p, theta);
      bool minors_positive = f2 > 0;
      for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<double>> sub(k, std::vector<double>(k));
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub[i][j] = g[i][j];
        if (det_double(sub) <= 0) minors_positive = false;
      }
      if (minors_positive) ++out.positive;
      if (det_double(g) != 0) ++out.nondegenerate;
    } catch (const DivisionByZero&) {
      --out.points;
    }
  }
  return out;
}

std::vector<std::vector<mpq_class>> sample_points(const MetricInstance& inst, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> ynum(5, 30), xnum(-8, 8), den(2, 9);
  const int n = inst.n;
  std::vector<std::vector<mpq_class>> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < count && guard++ < 100 * count + 100) {
    std::vector<mpq_class> p(2 * n);
    for (int i = 0; i < n; ++i) {
      p[i] = mpq_class(xnum(rng), 16);
      p[i].canonicalize();
      p[n + i] = mpq_class(ynum(rng), den(rng));
      p[n + i].canonicalize();
    }
    try {
      if (inst.kernel->A.eval(p) <= 0) continue;
      bool ok = true;
      for (const auto& c : inst.F2.coeffs())
        if (!c.is_zero() && c.den().eval(p) == 0) ok = false;
      if (inst.beta && beta_form(*inst.beta, n).eval(p) == 0) ok = false;
      if (!ok) continue;
      out.push_back(std::move(p));
    } catch (const DivisionByZero&) {
    }
  }
  return out;
}

}  // namespace arf
