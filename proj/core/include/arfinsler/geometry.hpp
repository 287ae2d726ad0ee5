#pragma once

#include <optional>

#include "arfinsler/tensor.hpp"

namespace arf {

/// Which reading of the projective Weyl curvature to compute.
///
/// Printed: W^i_j = Q^i_j - y^i d/dy^s Q^i_s / (n+1) (j does not
/// enter the second term). Standard: W^i_j = Q^i_j - y^i d/dy^s Q^s_j / (n+1).
enum class WeylVariant { Printed, Standard };

struct MetricData {
  FieldElem F2;
  Tensor g;     // "ll"
  Tensor ginv;  // "uu"
  FieldElem det_g;
};

struct VolumeForm {
  RatFn sigma;
};

/// Determinant of an n x n matrix over K by cofactor expansion.
FieldElem determinant(const std::vector<std::vector<FieldElem>>& m);
/// Inverse of a rank-2 tensor via the adjugate; throws Degenerate when singular.
Tensor inverse_matrix(const Tensor& t, FieldElem* det_out = nullptr);

/// g_ij = 1/2 d2 F2 / dy^i dy^j and its inverse.
/// Throws HomogeneityViolation unless F2 has degree 2, Degenerate if det g = 0.
MetricData fundamental_tensor(const FieldElem& F2);

Tensor cartan(const MetricData& md);
Tensor mean_cartan(const MetricData& md, const Tensor& C);
Tensor mean_cartan(const MetricData& md);
Tensor spray(const MetricData& md);
Tensor barthel(const Tensor& G);
Tensor berwald_connection(const Tensor& N);
Tensor berwald_curvature(const Tensor& Gjk);
Tensor douglas(const Tensor& N, const Tensor& Gjkl);
/// L_ijk = 1/2 y_s G^s_ijk with y_s = y^m g_ms.
Tensor landsberg(const MetricData& md, const Tensor& Gjkl);
/// J_k = g^ij L_ijk.
Tensor mean_landsberg(const MetricData& md, const Tensor& L);
/// y^s d_s I_k - 2 G^s d/dy^s I_k - N^s_k I_s.
Tensor mean_landsberg_covariant(const Tensor& I, const Tensor& G, const Tensor& N);
Tensor riemann(const Tensor& G, const Tensor& N, const Tensor& Gjk);
FieldElem ricci(const Tensor& R);
Tensor weyl(const Tensor& R, WeylVariant variant);
Tensor chi(const Tensor& R);
FieldElem s_curvature(const Tensor& N, const VolumeForm& vol);
Tensor e_curvature(const FieldElem& S);
/// T_ij|k = delta_k T_ij - T_sj G^s_ik - T_is G^s_jk, delta_k = d_k - N^r_k d/dy^r.
Tensor berwald_hcov(const Tensor& T, const Tensor& N, const Tensor& Gjk);

/// Euler operator y^i d/dy^i on a field element.
FieldElem euler(const FieldElem& f);
/// y^i as an element of K.
FieldElem fiber_var(const Kernel& k, int i);

/// Lazily computed tensor pipeline for one metric.
///
/// Every object is computed at most once. Not safe for concurrent use; the
/// returned references stay valid for the lifetime of the session.
class FinslerSession {
 public:
  explicit FinslerSession(FieldElem F2, std::optional<RatFn> sigma = std::nullopt);

  const Kernel& kernel() const { return F2_.kernel(); }
  int dim() const { return F2_.n(); }
  const FieldElem& F2() const { return F2_; }
  const VolumeForm& volume() const { return vol_; }

  const MetricData& metric();
  const Tensor& cartan();
  const Tensor& mean_cartan();
  const Tensor& spray();
  const Tensor& barthel();
  const Tensor& berwald_connection();
  const Tensor& berwald_curvature();
  const Tensor& douglas();
  const Tensor& landsberg();
  const Tensor& mean_landsberg();
  const Tensor& mean_landsberg_covariant();
  const Tensor& riemann();
  const FieldElem& ricci();
  const Tensor& weyl(WeylVariant variant);
  const Tensor& chi();
  const FieldElem& s_curvature();
  const Tensor& e_curvature();

  /// Look up any object by its CLI name (g, ginv, C, I, G, N, Gjk, Gjkl, D, L,
  /// J, R, Ric, W, W_standard, chi, S, E). Scalars come back as rank-0 tensors.
  Tensor object(const std::string& name);
  static const std::vector<std::string>& object_names();

 private:
  FieldElem F2_;
  VolumeForm vol_;
  std::optional<MetricData> md_;
  std::optional<Tensor> C_, I_, G_, N_, Gjk_, Gjkl_, D_, L_, J_, Jcov_, R_, Wp_, Ws_, chi_, E_;
  std::optional<FieldElem> Ric_, S_;
};

}  // namespace arf
