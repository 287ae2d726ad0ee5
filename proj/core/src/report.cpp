#include "arfinsler/report.hpp"

#include "arfinsler/errors.hpp"

namespace arf {

const char* to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::Holds:
      return "holds";
    case ClaimStatus::Fails:
      return "fails";
    case ClaimStatus::NotApplicable:
      return "not-applicable";
    case ClaimStatus::Finding:
      return "finding";
  }
  return "?";
}

const char* to_string(ClaimKind k) { return k == ClaimKind::Reference ? "reference" : "pipeline"; }

void VerificationReport::add(ClaimRecord r) {
  for (auto& c : claims_)
    if (c.id == r.id) {
      c = std::move(r);
      return;
    }
  claims_.push_back(std::move(r));
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const auto& c : other.claims_) add(c);
}

const ClaimRecord* VerificationReport::find(const std::string& id) const {
  for (const auto& c : claims_)
    if (c.id == id) return &c;
  return nullptr;
}

const ClaimRecord& VerificationReport::at(const std::string& id) const {
  const ClaimRecord* c = find(id);
  if (!c) throw InvalidArgument("claim '" + id + "' missing from report");
  return *c;
}

bool VerificationReport::any(ClaimKind kind, ClaimStatus status) const {
  for (const auto& c : claims_)
    if (c.kind == kind && c.status == status) return true;
  return false;
}

const std::vector<std::string>& claim_registry() {
  static const std::vector<std::string> ids = {
      "ar.detect",
      "thm.no_randers",
      "lemma.f2_over_eta_rational",
      "lemma.inverse_metric",
      "prop.dlog_eta_fiber",
      "prop.mean_cartan_formula",
      "cor.mean_cartan_closed_form",
      "prop.delta_log_eta",
      "proof.g_hcov_zero",
      "eq.spray_definition",
      "thm.riemannian_criterion",
      "prop.spray_ar_form",
      "prop.barthel_ar_form",
      "prop.s_curvature_ar_form",
      "rational.I",
      "rational.G",
      "rational.N",
      "rational.berwald_connection",
      "rational.berwald_curvature",
      "rational.douglas",
      "rational.landsberg",
      "rational.mean_landsberg",
      "rational.riemann",
      "rational.ricci",
      "rational.weyl_printed",
      "rational.weyl_standard",
      "rational.chi",
      "rational.S",
      "rational.E",
      "rational.dlog_eta_base",
      "thm.isotropic_s",
      "thm.isotropic_j",
      "thm.einstein_ricci_flat",
      "printed.eta_a",
      "printed.metric_tensor",
      "printed.dlog_eta_fiber",
      "printed.dlog_eta_base",
      "eq.gen_metric",
      "pipeline.mean_landsberg_dual",
      "pipeline.contractions",
      "pipeline.homogeneity",
  };
  return ids;
}

}  // namespace arf
