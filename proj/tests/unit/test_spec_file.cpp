#include <filesystem>
#include <fstream>
#include <sstream>

#include "arfinsler/errors.hpp"
#include "arfinsler/spec_file.hpp"
#include "doctest.h"

using namespace arf;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("root metric statements on one line") {
  const MetricSpec s = parse_metric_file("family=mth_root; m=3; A=y1*y2*y3");
  CHECK(s.family == "mth_root");
  CHECK(s.n == 3);
  CHECK(s.m == 3);
  CHECK(*s.A == RatFn::y(3, 1) * RatFn::y(3, 2) * RatFn::y(3, 3));
}

TEST_CASE("randers statements") {
  const MetricSpec s = parse_metric_file("family=randers; alpha=[[1,0],[0,1]]; b=[1/2,0]");
  CHECK(s.n == 2);
  REQUIRE(s.b.has_value());
  CHECK((*s.b)[0] == RatFn(2, mpq_class(1, 2)));
  CHECK((*s.b)[1].is_zero());
  CHECK(build_instance(s).family == "randers");
}

TEST_CASE("parse errors carry the position") {
  try {
    parse_metric_file("A=y1*y2*");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 9);
  }
  try {
    parse_metric_file("family = riemannian\nalpha = [[1, 0], [0, 1]]\nbogus = 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
  }
  CHECK_THROWS_AS(parse_metric_file("family = mth_root; m = 3; A = y1*z2"), ParseError);
  CHECK_THROWS_AS(parse_metric_file("family = mth_root; m = 3; A = y1/(y2 - y2)"), ParseError);
  CHECK_THROWS_AS(parse_metric_file("family = randers; alpha = [[1,0],[0,1]]; b = [1/2,0]; m = 2"), ParseError);
  CHECK_THROWS_AS(parse_metric_file("family = mth_root; m = 3; A = y1*y2*y3; A = y1^3"), ParseError);
  CHECK_THROWS_AS(parse_metric_file("family = mth_root; m = 3; A = (y1 + y2"), ParseError);
  CHECK_THROWS_AS(parse_metric_file("family = shape; n = 2"), ParseError);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(parse_metric_file("family = riemannian; alpha = [[1, 0], [0]]"), ArityError);
  CHECK_THROWS_AS(parse_metric_file("family = riemannian; alpha = [[1, x1], [0, 1]]"), ArityError);
  CHECK_THROWS_AS(parse_metric_file("family = randers; alpha = [[1,0],[0,1]]; b = [1, 0, 0]"), ArityError);
  CHECK_THROWS_AS(parse_metric_file("family = mth_root; m = 3; mu[1,1] = 1"), ArityError);
  CHECK_THROWS_AS(parse_metric_file("family = randers; alpha = [[1,0],[0,1]]"), InvalidArgument);
}

TEST_CASE("expression grammar") {
  const MetricSpec s = parse_metric_file("family = raw\nF2 = -(y1)^2*(-1) + y2^2/1 + 0*x1 # comment\n");
  CHECK(s.n == 2);
  CHECK(s.F2->coeff(0) == RatFn::y(2, 1).pow(2) + RatFn::y(2, 2).pow(2));
  const MetricSpec t = parse_metric_file("n = 2; family = raw; m = 2; A = y1^2 + y2^2; F2 = (theta + y1)^2");
  CHECK(t.F2->coeff(1) == RatFn::y(2, 1).scaled(2));
  CHECK(parse_metric_file("family=mth_root; m=3; A=y1*y2*y3*y1^(-1)*y1").A == parse_metric_file("family=mth_root; m=3; A=y1*y2*y3").A);
}

TEST_CASE("printing round-trips") {
  const char* texts[] = {
      "family=mth_root; m=3; A=y1*y2*y3",
      "family=randers; alpha=[[1,0],[0,1]]; b=[1/2,0]; points=[[0,0,1,2]]; weyl=standard; precision=60",
      "family=extended_mth_root; m=3; mu[1,1,1]=y2/(y1+y2); mu[2,2,2]=1; sigma=1+x1^2",
      "family=poly_ab; alpha=[[1,0],[0,1+x1^2]]; b=[1,x1]; phi_a=-1/3; phi_b=2; phi_k=1; phi_m=3",
      "n=2; family=raw; m=2; A=y1^2+x1*y2^2; F2=(theta + y1)^2/(1+x2)",
  };
  for (const char* t : texts) {
    const MetricSpec s = parse_metric_file(t);
    const std::string printed = print_metric_file(s);
    CHECK(parse_metric_file(printed) == s);
    CHECK(print_metric_file(parse_metric_file(printed)) == printed);
  }
}

TEST_CASE("catalog files parse, round-trip and build") {
  const std::filesystem::path dir = ARF_CATALOG_DIR;
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".metric") continue;
    ++count;
    const MetricSpec s = parse_metric_file(read(entry.path()));
    CHECK(parse_metric_file(print_metric_file(s)) == s);
    CHECK_NOTHROW(build_instance(s));
  }
  CHECK(count >= 12);
}
