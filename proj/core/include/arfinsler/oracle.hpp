#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arfinsler/metrics.hpp"

namespace arf {

struct OracleOptions {
  int points = 10;
  /// Working precision in decimal digits.
  unsigned digits = 50;
  std::uint64_t seed = 1;
  double tolerance = 1e-20;
};

struct OracleObjectCheck {
  std::string name;
  /// Largest normwise relative error over the sample points.
  double max_rel_error = 0;
  bool ok = true;
};

/// Floating-point cross-check of the symbolic pipeline.
///
/// F^2 is rebuilt from the family parameters (not from the symbolic F^2)
/// and expanded as a truncated Taylor series in x and y at each sample
/// point; every tensor is then recomputed from those series and compared
/// with the symbolic tensor evaluated at the same point.
struct OracleReport {
  int points_used = 0;
  unsigned digits = 0;
  /// "recipe" for catalog families, "field" when F^2 had to be taken from
  /// its field representation (raw family).
  std::string f2_source;
  std::vector<OracleObjectCheck> objects;
  /// Largest relative residual of g_ij xdd^j + y^k d_k dy_i (F^2/2) - d_i (F^2/2)
  /// with xdd = -2 G.
  double geodesic_residual = 0;
  bool geodesic_ok = true;

  double max_rel_error() const;
  bool ok() const;
};

OracleReport run_oracle(const MetricInstance& inst, FinslerSession& s, const OracleOptions& opt = {});

/// Value of a field element at a rational point where the kernel is positive,
/// to `digits` decimal digits, as a decimal string.
std::string eval_decimal(const FieldElem& f, const std::vector<mpq_class>& point, unsigned digits);

}  // namespace arf
