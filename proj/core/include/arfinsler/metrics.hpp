#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arfinsler/geometry.hpp"

namespace arf {

/// Symmetric matrix alpha_ij(x) of rational functions of x only.
struct RiemannData {
  std::vector<std::vector<RatFn>> alpha;
};

/// One-form coefficients b_i(x).
struct OneFormData {
  std::vector<RatFn> b;
};

/// Coefficients of an m-th root metric.
///
/// Either `A` is given directly or it is assembled from `coeffs`, a map from
/// sorted 1-based index tuples to the symmetric coefficient; every ordering of
/// a tuple carries the same value.
struct RootData {
  int m = 3;
  std::optional<RatFn> A;
  std::map<std::vector<int>, RatFn> coeffs;
};

/// Laurent polynomial phi(s) = sum c_p s^p.
using Laurent = std::map<int, mpq_class>;

/// One additive piece of a printed formula: a rational constant times a structure.
struct TermFamily {
  std::string name;
  mpq_class printed;
  /// Independently derived coefficient, when one is available.
  std::optional<mpq_class> reference;
  Tensor structure;
};

/// Sum of coefficient * structure over the families.
Tensor assemble(const std::vector<TermFamily>& families, bool use_reference = false);

/// Printed formulas attached to a catalog family.
struct PrintedForms {
  /// Printed eta and the printed a_ij as term families (a is relative to this eta).
  std::optional<FieldElem> eta;
  std::vector<TermFamily> a;
  /// Printed closed form of g_ij.
  std::vector<TermFamily> g;
  std::vector<TermFamily> dlog_fiber;
  std::vector<TermFamily> dlog_base;
  /// The (alpha, beta) metric tensor formula, for metrics of the form alpha * phi(beta/alpha).
  std::vector<TermFamily> gen_metric;
};

/// A constructed metric.
struct MetricInstance {
  std::string family;
  int n = 0;
  Kernel kernel;
  FieldElem F2;
  /// Only nondegeneracy is expected (conic and pseudo metrics).
  bool nondegenerate_only = false;
  std::optional<RiemannData> alpha;
  std::optional<OneFormData> beta;
  std::optional<Laurent> phi;
  /// Kernel polynomial of root families.
  std::optional<RatFn> root;
  int root_m = 0;
  int kropina_k = 0;
  PrintedForms printed;
};

MetricInstance make_riemannian(const RiemannData& a);
/// Throws NormViolation when |beta|_alpha >= 1 at one of `points`.
MetricInstance make_randers(const RiemannData& a, const OneFormData& b,
                            const std::vector<std::vector<mpq_class>>& points = {});
MetricInstance make_gen_kropina(const RiemannData& a, const OneFormData& b, int k);
/// phi(s) = a s^k + b s^m. Throws ParityViolation unless k = m mod 2 and
/// Degenerate when phi - s phi' vanishes identically.
MetricInstance make_poly_ab(const RiemannData& alpha, const OneFormData& beta, const mpq_class& a,
                            const mpq_class& b, int k, int m);
MetricInstance make_mth_root(const RootData& r, int n);
MetricInstance make_extended_mth_root(const RootData& r, int n);
/// F^(k+1) / beta^k for a root-family base.
MetricInstance make_kropina_change(const MetricInstance& base, const OneFormData& b, int k);
/// F^2 given directly in a kernel.
MetricInstance make_raw(Kernel k, FieldElem F2);

/// Kernel polynomial of RootData in dimension n.
RatFn root_polynomial(const RootData& r, int n);

/// alpha^2 = alpha_ij y^i y^j and beta = b_i y^i.
RatFn alpha_squared(const RiemannData& a, int n);
RatFn beta_form(const OneFormData& b, int n);

/// Result of positivity sampling.
struct PositivitySample {
  int points = 0;
  int positive = 0;
  int nondegenerate = 0;
  bool ok(bool nondegenerate_only) const { return nondegenerate_only ? nondegenerate == points : positive == points; }
};

/// Evaluates F^2 and the leading principal minors of g at the points (2n
/// coordinates each). Points where the kernel is not positive are skipped.
PositivitySample sample_positivity(const MetricInstance& inst, const MetricData& md,
                                   const std::vector<std::vector<mpq_class>>& points);

/// Seeded sample points with y in the positive cone and small x, avoiding
/// zeros of the given denominators and points where the kernel is not positive.
std::vector<std::vector<mpq_class>> sample_points(const MetricInstance& inst, int count, std::uint64_t seed);

}  // namespace arf
