#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arfinsler/geometry.hpp"
#include "arfinsler/metrics.hpp"
#include "arfinsler/report.hpp"

namespace arf {

/// g_ij = theta^k a_ij with a_ij rational.
struct ARDecomposition {
  Kernel kernel;
  int theta_deg = 0;
  Tensor a;     // "ll", rational entries
  Tensor ainv;  // "uu"
  bool eta_is_rational = true;

  FieldElem eta() const { return FieldElem::theta_pow(kernel, theta_deg); }
};

/// Returns the decomposition when every g_ij is supported on one common
/// theta power, nullopt otherwise.
std::optional<ARDecomposition> detect_ar(const MetricData& md);

/// d/dy^i log eta = theta_deg * d/dy^i A / (m A).
Tensor dlog_eta_fiber(const ARDecomposition& dec);
/// a^ji (d/dy^i a_jk - d/dy^k a_ij) / (n - 1), computed from a alone.
Tensor dlog_eta_fiber_from_a(const ARDecomposition& dec);
Tensor dlog_eta_base(const ARDecomposition& dec);

/// I_i = (a^jk d/dy^i a_jk + n d/dy^i log eta) / 2.
Tensor mean_cartan_scalar_formula(const ARDecomposition& dec);
/// I_i = a^jk (n d/dy^k a_ji - d/dy^i a_jk) / (2 (n - 1)).
Tensor mean_cartan_closed_form(const ARDecomposition& dec);
/// The printed forms of the two expressions above, which omit the factor 1/2.
std::vector<TermFamily> mean_cartan_scalar_families(const ARDecomposition& dec);
std::vector<TermFamily> mean_cartan_closed_form_families(const ARDecomposition& dec);

struct CriterionVerdicts {
  bool by_eta = false;     // d/dy^i log eta = -(1/n) a^jk d/dy^i a_jk
  bool by_a = false;       // a^jk (n d/dy^k a_ji - d/dy^i a_jk) = 0
  bool cartan_zero = false;
  bool agree() const { return by_eta == by_a && by_a == cartan_zero; }
};
CriterionVerdicts riemannian_verdicts(const ARDecomposition& dec, const Tensor& C);

/// Riemannian test from the AR data. Throws InternalInconsistency when the
/// three verdicts diverge; pass `regular = false` for pseudo or conic metrics,
/// where a vanishing mean Cartan torsion does not force C = 0 and the
/// returned value is the C = 0 verdict.
bool riemannian_criterion(const ARDecomposition& dec, const Tensor& C, bool regular = true);

/// delta_k log eta + (1/n) a^ij a_ij|k and the trace (1/n) g^ij g_ij|k it must equal.
struct DeltaLogEta {
  Tensor lhs;       // "l"
  Tensor trace;     // "l"
  /// lhs = c J_k for a rational constant c, when such a c exists.
  std::optional<mpq_class> j_multiple;
};
DeltaLogEta delta_log_eta(const ARDecomposition& dec, const MetricData& md, const Tensor& N,
                          const Tensor& Gjk, const Tensor& J);

/// Spray, nonlinear connection and S-curvature written through eta and a, as
/// term families (printed coefficients plus independently derived ones).
std::vector<TermFamily> ar_spray_families(const ARDecomposition& dec);
std::vector<TermFamily> ar_barthel_families(const ARDecomposition& dec);
std::vector<TermFamily> ar_s_curvature_families(const ARDecomposition& dec, const VolumeForm& vol);

/// Outcome of comparing a printed formula with an exact target.
struct Comparison {
  ClaimStatus status = ClaimStatus::Holds;
  std::string detail;
  std::string witness;
};

/// Holds if the printed sum equals the target. Otherwise the discrepancy is
/// localized: first by the reference coefficients, then by a single family
/// whose coefficient is off by a rational constant. Unlocalized differences
/// fail.
Comparison compare_families(const Tensor& target, const std::vector<TermFamily>& families);

/// Rationality of the geometric objects for an AR metric (claims rational.*).
VerificationReport rationality_report(FinslerSession& s, const std::optional<ARDecomposition>& dec);

/// Rigidity statements tested through exact membership (thm.isotropic_s,
/// thm.isotropic_j, thm.einstein_ricci_flat).
VerificationReport consequence_report(FinslerSession& s, const std::optional<ARDecomposition>& dec);

/// Every claim of the registry for one metric.
VerificationReport verify_instance(const MetricInstance& inst, FinslerSession& s, bool regular);

/// True when F = sqrt(F^2) is a rational function.
bool f_is_rational(const FieldElem& F2);

}  // namespace arf
