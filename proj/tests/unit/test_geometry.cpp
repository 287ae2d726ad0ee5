#include "arfinsler/errors.hpp"
#include "arfinsler/geometry.hpp"
#include "arfinsler/metrics.hpp"
#include "doctest.h"
#include "support/classical.hpp"

using namespace arf;

namespace {

RatFn c(int n, long a, long b = 1) { return RatFn(n, mpq_class(a, b)); }
RatFn x(int n, int i) { return RatFn::x(n, i); }
RatFn y(int n, int i) { return RatFn::y(n, i); }

RiemannData euclid(int n) {
  RiemannData a;
  a.alpha.assign(n, std::vector<RatFn>(n, c(n, 0)));
  for (int i = 0; i < n; ++i) a.alpha[i][i] = c(n, 1);
  return a;
}

RiemannData sphere() {
  const RatFn conf = c(2, 4) / (c(2, 1) + x(2, 1) * x(2, 1) + x(2, 2) * x(2, 2)).pow(2);
  RiemannData a;
  a.alpha = {{conf, c(2, 0)}, {c(2, 0), conf}};
  return a;
}

RiemannData warped3() {
  RiemannData a;
  a.alpha = {{c(3, 1), x(3, 2), c(3, 0)}, {x(3, 2), c(3, 2), c(3, 0)}, {c(3, 0), c(3, 0), c(3, 1) + x(3, 1) * x(3, 1)}};
  return a;
}

MetricInstance kropina_x() {
  RiemannData a;
  a.alpha = {{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1) + x(2, 1) * x(2, 1)}};
  OneFormData b;
  b.b = {c(2, 1), x(2, 1)};
  return make_gen_kropina(a, b, 1);
}

Tensor as_tensor(const Kernel& k, const test::Matrix& m) {
  Tensor t(k, "ul");
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) t(i, j) = FieldElem(k, m[i][j]);
  return t;
}

}  // namespace

TEST_CASE("euclidean plane is flat in every object") {
  FinslerSession s(make_riemannian(euclid(2)).F2);
  const auto& md = s.metric();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(md.g(i, j) == FieldElem::constant(s.kernel(), i == j ? 1 : 0));
      CHECK(md.ginv(i, j) == FieldElem::constant(s.kernel(), i == j ? 1 : 0));
    }
  for (const auto& name : FinslerSession::object_names()) {
    if (name == "F2" || name == "g" || name == "ginv") continue;
    CHECK_MESSAGE(s.object(name).is_zero(), name);
  }
}

TEST_CASE("riemannian metrics match the classical curvature") {
  for (const RiemannData& a : {sphere(), warped3()}) {
    const MetricInstance inst = make_riemannian(a);
    FinslerSession s(inst.F2);
    const Kernel& k = s.kernel();
    CHECK(s.cartan().is_zero());
    CHECK(s.berwald_curvature().is_zero());
    CHECK(s.douglas().is_zero());
    CHECK(s.landsberg().is_zero());
    const auto G = test::quadratic_spray(a.alpha);
    for (int i = 0; i < inst.n; ++i) {
      CHECK(s.spray()(i) == FieldElem(k, G[i]));
      CHECK(k_homogeneity_degree(s.spray()(i)) == 2);
    }
    CHECK(s.riemann() == as_tensor(k, test::riemann_contracted(a.alpha)));
    // sigma = 1: S is the trace of N.
    FieldElem tr(k);
    for (int m = 0; m < inst.n; ++m) tr += s.barthel()(m, m);
    CHECK(s.s_curvature() == tr);
  }
}

TEST_CASE("unit sphere has R = F^2 delta - y y_low") {
  FinslerSession s(make_riemannian(sphere()).F2);
  const Kernel& k = s.kernel();
  const auto& md = s.metric();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      FieldElem ylow(k);
      for (int m = 0; m < 2; ++m) ylow += md.g(m, j) * fiber_var(k, m);
      FieldElem expected = (i == j ? s.F2() : FieldElem(k)) - fiber_var(k, i) * ylow;
      CHECK(s.riemann()(i, j) == expected);
    }
  CHECK(s.ricci() == s.F2());
}

TEST_CASE("randers g11 mixes theta degrees") {
  OneFormData b;
  b.b = {c(2, 1, 2), c(2, 0)};
  FinslerSession s(make_randers(euclid(2), b).F2);
  CHECK(theta_support(s.metric().g(0, 0)) == std::set<int>{0, 1});
  CHECK_FALSE(s.mean_cartan().is_rational());
}

TEST_CASE("cubic root fundamental tensor") {
  RootData r;
  r.m = 3;
  r.A = y(3, 1) * y(3, 2) * y(3, 3);
  const MetricInstance inst = make_mth_root(r, 3);
  FinslerSession s(inst.F2);
  const Kernel& k = s.kernel();
  const RatFn expected = y(3, 1) * y(3, 2) * y(3, 3) * y(3, 3) / (*r.A * *r.A);
  CHECK(s.metric().g(0, 1) == FieldElem::monomial(k, expected.scaled(mpq_class(2, 9)), 2));
  CHECK(theta_support(s.metric().g(0, 1)) == std::set<int>{2});
  CHECK(s.mean_cartan().is_rational());
}

TEST_CASE("contractions and homogeneity ladder on an x-dependent Kropina metric") {
  const MetricInstance inst = kropina_x();
  FinslerSession s(inst.F2, c(2, 1) + x(2, 2) * x(2, 2));
  const Kernel& k = s.kernel();
  const int n = 2;
  const auto& md = s.metric();

  FieldElem yy(k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) yy += md.g(i, j) * fiber_var(k, i) * fiber_var(k, j);
  CHECK(yy == s.F2());
  CHECK_FALSE(s.cartan().is_zero());
  for (int j = 0; j < n; ++j)
    for (int kk = 0; kk < n; ++kk) {
      FieldElem yc(k);
      for (int i = 0; i < n; ++i) yc += fiber_var(k, i) * s.cartan()(i, j, kk);
      CHECK(yc.is_zero());
    }
  for (int i = 0; i < n; ++i) {
    FieldElem yn(k);
    for (int j = 0; j < n; ++j) yn += fiber_var(k, j) * s.barthel()(i, j);
    CHECK(yn == s.spray()(i).scaled(mpq_class(2)));
    for (int j = 0; j < n; ++j) {
      FieldElem yg(k);
      for (int kk = 0; kk < n; ++kk) yg += fiber_var(k, kk) * s.berwald_connection()(i, j, kk);
      CHECK(yg == s.barthel()(i, j));
    }
  }
  auto degree_is = [](const Tensor& t, int d) {
    for (std::size_t f = 0; f < t.size(); ++f)
      if (!t[f].is_zero() && k_homogeneity_degree(t[f]) != d) return false;
    return true;
  };
  CHECK(degree_is(md.g, 0));
  CHECK(degree_is(s.cartan(), -1));
  CHECK(degree_is(s.spray(), 2));
  CHECK(degree_is(s.barthel(), 1));
  CHECK(degree_is(s.berwald_connection(), 0));
  CHECK(degree_is(s.riemann(), 2));
  CHECK(k_homogeneity_degree(s.s_curvature()) == 1);
  CHECK(s.berwald_curvature().symmetric_in(1, 2));
  CHECK(s.berwald_curvature().symmetric_in(2, 3));
}

TEST_CASE("mean Landsberg by trace and by covariant derivative differ by sign") {
  FinslerSession s(kropina_x().F2);
  const Tensor& J = s.mean_landsberg();
  const Tensor& Jcov = s.mean_landsberg_covariant();
  CHECK_FALSE(J.is_zero());
  for (int k = 0; k < 2; ++k) CHECK(J(k) == -Jcov(k));
}

TEST_CASE("berwald derivative of g is twice the Landsberg tensor") {
  FinslerSession s(kropina_x().F2);
  const Tensor h = berwald_hcov(s.metric().g, s.barthel(), s.berwald_connection());
  for (std::size_t f = 0; f < h.size(); ++f) CHECK(h[f] == s.landsberg()[f].scaled(mpq_class(2)));
}

TEST_CASE("weyl variants and E curvature") {
  FinslerSession s(kropina_x().F2);
  const Tensor& wp = s.weyl(WeylVariant::Printed);
  const Tensor& ws = s.weyl(WeylVariant::Standard);
  CHECK(wp.rank() == 2);
  CHECK(ws.rank() == 2);
  CHECK(wp != ws);
  for (std::size_t f = 0; f < wp.size(); ++f) {
    if (!wp[f].is_zero()) CHECK(k_homogeneity_degree(wp[f]) == 2);
    if (!ws[f].is_zero()) CHECK(k_homogeneity_degree(ws[f]) == 2);
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(s.e_curvature()(i, j) == s.s_curvature().pdiff_fiber(i).pdiff_fiber(j).scaled(mpq_class(1, 2)));
}

TEST_CASE("degenerate and non-homogeneous inputs are rejected") {
  const Kernel k = trivial_kernel(2);
  CHECK_THROWS_AS(fundamental_tensor(FieldElem(k, y(2, 1) * y(2, 1))), Degenerate);
  CHECK_THROWS_AS(fundamental_tensor(FieldElem(k, y(2, 1))), HomogeneityViolation);
  CHECK_THROWS_AS(FinslerSession(make_riemannian(euclid(2)).F2).object("nope"), InvalidArgument);
}
