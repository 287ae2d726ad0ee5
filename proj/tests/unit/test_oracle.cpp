#include "arfinsler/errors.hpp"
#include "arfinsler/oracle.hpp"
#include "doctest.h"

using namespace arf;

namespace {

RatFn c(int n, long a, long b = 1) { return RatFn(n, mpq_class(a, b)); }
RatFn x(int n, int i) { return RatFn::x(n, i); }

}  // namespace

TEST_CASE("oracle agrees with the pipeline on an x-dependent Kropina metric") {
  RiemannData a;
  a.alpha = {{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1) + x(2, 1) * x(2, 1)}};
  OneFormData b;
  b.b = {c(2, 1), x(2, 1)};
  const MetricInstance inst = make_gen_kropina(a, b, 1);
  FinslerSession s(inst.F2, c(2, 1) + x(2, 2) * x(2, 2));
  const OracleReport r = run_oracle(inst, s);
  CHECK(r.points_used == 10);
  CHECK(r.f2_source == "recipe");
  CHECK(r.ok());
  CHECK(r.max_rel_error() < 1e-20);
  CHECK(r.geodesic_residual < 1e-20);
  CHECK(r.objects.size() == FinslerSession::object_names().size());
}

TEST_CASE("oracle detects a wrong symbolic object") {
  RiemannData a;
  a.alpha = {{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1) + x(2, 1) * x(2, 1)}};
  const MetricInstance inst = make_riemannian(a);
  // A session over a different F^2 stands in for a pipeline bug.
  RiemannData wrong = a;
  wrong.alpha[1][1] = c(2, 1) + x(2, 1) * x(2, 1) * x(2, 1);
  FinslerSession s(make_riemannian(wrong).F2);
  const OracleReport r = run_oracle(inst, s);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.geodesic_ok);
}

TEST_CASE("raw metrics fall back to the field representation") {
  const Kernel k = trivial_kernel(2);
  const RatFn y1 = RatFn::y(2, 1), y2 = RatFn::y(2, 2);
  const MetricInstance inst = make_raw(k, FieldElem(k, y1 * y1 + y2 * y2 + (x(2, 1) * y1 * y2).scaled(mpq_class(1, 2))));
  FinslerSession s(inst.F2);
  const OracleReport r = run_oracle(inst, s, {.points = 10, .digits = 40});
  CHECK(r.f2_source == "field");
  CHECK(r.ok());
}

TEST_CASE("decimal evaluation of the kernel") {
  const Kernel k = make_kernel(2, 2, RatFn::y(2, 1) * RatFn::y(2, 1) + RatFn::y(2, 2) * RatFn::y(2, 2));
  const std::vector<mpq_class> p = {0, 0, 3, 4};
  CHECK(eval_decimal(FieldElem::theta_pow(k, 1), p, 30).substr(0, 8) == "5.000000");
  CHECK_THROWS_AS(run_oracle(make_riemannian({{{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1)}}}),
                             *std::make_unique<FinslerSession>(make_riemannian({{{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1)}}}).F2),
                             {.points = 0}),
                  InvalidArgument);
}
