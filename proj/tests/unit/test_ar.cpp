#include "arfinsler/ar.hpp"
#include "arfinsler/errors.hpp"
#include "doctest.h"

using namespace arf;

namespace {

RatFn c(int n, long a, long b = 1) { return RatFn(n, mpq_class(a, b)); }
RatFn x(int n, int i) { return RatFn::x(n, i); }
RatFn y(int n, int i) { return RatFn::y(n, i); }

RiemannData euclid2() {
  RiemannData a;
  a.alpha = {{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1)}};
  return a;
}

OneFormData b10() {
  OneFormData b;
  b.b = {c(2, 1), c(2, 0)};
  return b;
}

MetricInstance cubic() {
  RootData r;
  r.m = 3;
  r.A = y(3, 1) * y(3, 2) * y(3, 3);
  return make_mth_root(r, 3);
}

MetricInstance kropina_x() {
  RiemannData a;
  a.alpha = {{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1) + x(2, 1) * x(2, 1)}};
  OneFormData b;
  b.b = {c(2, 1), x(2, 1)};
  return make_gen_kropina(a, b, 1);
}

bool regular(const MetricInstance& inst, FinslerSession& s) {
  return !inst.nondegenerate_only && sample_positivity(inst, s.metric(), sample_points(inst, 10, 3)).ok(false);
}

}  // namespace

TEST_CASE("detection on the catalog families") {
  {
    FinslerSession s(cubic().F2);
    const auto dec = detect_ar(s.metric());
    REQUIRE(dec.has_value());
    CHECK(dec->theta_deg == 2);
    CHECK_FALSE(dec->eta_is_rational);
    // g = eta a entrywise.
    for (std::size_t f = 0; f < dec->a.size(); ++f) CHECK(s.metric().g[f] == dec->eta() * dec->a[f]);
  }
  {
    OneFormData b;
    b.b = {c(2, 1, 2), c(2, 0)};
    FinslerSession s(make_randers(euclid2(), b).F2);
    CHECK_FALSE(detect_ar(s.metric()).has_value());
  }
  {
    FinslerSession s(make_gen_kropina(euclid2(), b10(), 2).F2);
    const auto dec = detect_ar(s.metric());
    REQUIRE(dec.has_value());
    CHECK(dec->eta_is_rational);
  }
}

TEST_CASE("mean Cartan torsion from the AR data") {
  for (const MetricInstance& inst : {cubic(), kropina_x(), make_poly_ab(euclid2(), b10(), 1, 1, 0, 2)}) {
    FinslerSession s(inst.F2);
    const auto dec = detect_ar(s.metric());
    REQUIRE(dec.has_value());
    CHECK(mean_cartan_scalar_formula(*dec) == s.mean_cartan());
    CHECK(mean_cartan_closed_form(*dec) == s.mean_cartan());
    CHECK(dlog_eta_fiber(*dec) == dlog_eta_fiber_from_a(*dec));
    // The printed versions are exactly twice the derived ones.
    const Tensor printed = assemble(mean_cartan_scalar_families(*dec));
    for (std::size_t f = 0; f < printed.size(); ++f) CHECK(printed[f] == s.mean_cartan()[f].scaled(mpq_class(2)));
  }
}

TEST_CASE("riemannian criterion verdicts") {
  RiemannData a;
  a.alpha = {{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1) + x(2, 1) * x(2, 1)}};
  {
    FinslerSession s(make_riemannian(a).F2);
    const auto dec = detect_ar(s.metric());
    REQUIRE(dec.has_value());
    const auto v = riemannian_verdicts(*dec, s.cartan());
    CHECK(v.agree());
    CHECK(riemannian_criterion(*dec, s.cartan()));
  }
  {
    FinslerSession s(kropina_x().F2);
    const auto dec = detect_ar(s.metric());
    REQUIRE(dec.has_value());
    CHECK(riemannian_verdicts(*dec, s.cartan()).agree());
    CHECK_FALSE(riemannian_criterion(*dec, s.cartan()));
  }
  {
    // The cubic root metric has I = 0 but C != 0; it is not positive definite.
    FinslerSession s(cubic().F2);
    const auto dec = detect_ar(s.metric());
    REQUIRE(dec.has_value());
    const auto v = riemannian_verdicts(*dec, s.cartan());
    CHECK(v.by_eta);
    CHECK(v.by_a);
    CHECK_FALSE(v.cartan_zero);
    CHECK_THROWS_AS(riemannian_criterion(*dec, s.cartan(), true), InternalInconsistency);
    CHECK_FALSE(riemannian_criterion(*dec, s.cartan(), false));
  }
}

TEST_CASE("delta log eta residual is a multiple of J") {
  const MetricInstance inst = kropina_x();
  FinslerSession s(inst.F2);
  const auto dec = detect_ar(s.metric());
  REQUIRE(dec.has_value());
  const DeltaLogEta d = delta_log_eta(*dec, s.metric(), s.barthel(), s.berwald_connection(), s.mean_landsberg());
  REQUIRE(d.j_multiple.has_value());
  // (1/n) g^ij g_ij|k with g_ij|k = 2 L_ijk is (2/n) J_k.
  CHECK(*d.j_multiple == mpq_class(2) / inst.n);
}

TEST_CASE("comparison localizes discrepancies") {
  const Kernel k = trivial_kernel(2);
  Tensor s1(k, "l"), s2(k, "l");
  s1(0) = FieldElem(k, y(2, 1));
  s1(1) = FieldElem(k, y(2, 2));
  s2(0) = FieldElem(k, y(2, 2) * y(2, 2) / y(2, 1));
  s2(1) = FieldElem(k, x(2, 1));
  Tensor target(k, "l");
  for (int i = 0; i < 2; ++i) target(i) = s1(i).scaled(mpq_class(2)) + s2(i).scaled(mpq_class(3));

  auto fam = [](const char* name, mpq_class p, std::optional<mpq_class> r, const Tensor& t) {
    return TermFamily{name, std::move(p), std::move(r), t};
  };
  CHECK(compare_families(target, {fam("s1", 2, 2, s1), fam("s2", 3, 3, s2)}).status == ClaimStatus::Holds);

  const Comparison by_ref = compare_families(target, {fam("s1", 2, 2, s1), fam("s2", 5, 3, s2)});
  CHECK(by_ref.status == ClaimStatus::Finding);
  CHECK(by_ref.witness == "s2");

  const Comparison by_fit = compare_families(target, {fam("s1", 2, std::nullopt, s1), fam("s2", 5, std::nullopt, s2)});
  CHECK(by_fit.status == ClaimStatus::Finding);
  CHECK(by_fit.witness == "s2");

  Tensor other(k, "l");
  other(0) = FieldElem(k, x(2, 2));
  CHECK(compare_families(target, {fam("s1", 2, std::nullopt, s1), fam("other", 1, std::nullopt, other)}).status ==
        ClaimStatus::Fails);
}

TEST_CASE("rationality of F") {
  const Kernel k = trivial_kernel(2);
  CHECK(f_is_rational(FieldElem(k, (y(2, 1) + y(2, 2)).pow(2))));
  CHECK_FALSE(f_is_rational(FieldElem(k, y(2, 1) * y(2, 1) + y(2, 2) * y(2, 2))));
  CHECK_FALSE(f_is_rational(cubic().F2));
}

TEST_CASE("verify_instance reports every registered claim in order") {
  for (const MetricInstance& inst : {cubic(), kropina_x(), make_riemannian(euclid2())}) {
    FinslerSession s(inst.F2);
    const VerificationReport rep = verify_instance(inst, s, regular(inst, s));
    REQUIRE(rep.claims().size() == claim_registry().size());
    for (std::size_t i = 0; i < rep.claims().size(); ++i) CHECK(rep.claims()[i].id == claim_registry()[i]);
    CHECK_FALSE(rep.any(ClaimKind::Reference, ClaimStatus::Fails));
    CHECK_FALSE(rep.any(ClaimKind::Pipeline, ClaimStatus::Fails));
  }
  CHECK_THROWS_AS(VerificationReport().at("ar.detect"), InvalidArgument);
}

TEST_CASE("printed coefficient findings are localized") {
  {
    FinslerSession s(cubic().F2);
    const auto rep = verify_instance(cubic(), s, false);
    CHECK(rep.at("printed.eta_a").status == ClaimStatus::Finding);
    CHECK(rep.at("printed.eta_a").witness == "A_i*A_j");
    CHECK(rep.at("printed.metric_tensor").status == ClaimStatus::Holds);
    CHECK(rep.at("thm.riemannian_criterion").status == ClaimStatus::NotApplicable);
  }
  {
    const MetricInstance inst = kropina_x();
    FinslerSession s(inst.F2);
    const auto rep = verify_instance(inst, s, true);
    CHECK(rep.at("proof.g_hcov_zero").status == ClaimStatus::Finding);
    CHECK(rep.at("pipeline.mean_landsberg_dual").status == ClaimStatus::Finding);
    CHECK(rep.at("rational.riemann").status == ClaimStatus::Holds);
    CHECK(rep.at("thm.riemannian_criterion").status == ClaimStatus::Holds);
  }
  {
    OneFormData b;
    b.b = {c(2, 1, 2), c(2, 0)};
    const MetricInstance inst = make_randers(euclid2(), b);
    FinslerSession s(inst.F2);
    const auto rep = verify_instance(inst, s, true);
    CHECK(rep.at("ar.detect").status == ClaimStatus::Holds);
    CHECK(rep.at("thm.no_randers").status == ClaimStatus::Holds);
  }
}
