#pragma once

// Classical Riemannian curvature from Christoffel symbols, written directly
// over rational functions of x. Used to check the Finslerian pipeline on
// quadratic metrics.

#include <vector>

#include "arfinsler/ratfn.hpp"

namespace arf::test {

using Matrix = std::vector<std::vector<RatFn>>;

inline Matrix gauss_inverse(Matrix a) {
  const int n = static_cast<int>(a.size());
  const int dim = a[0][0].dim();
  Matrix inv(n, std::vector<RatFn>(n, RatFn(dim)));
  for (int i = 0; i < n; ++i) inv[i][i] = RatFn(dim, mpq_class(1));
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (a[p][c].is_zero()) ++p;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const RatFn s = a[c][c].inv();
    for (int j = 0; j < n; ++j) {
      a[c][j] = a[c][j] * s;
      inv[c][j] = inv[c][j] * s;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const RatFn f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] = a[r][j] - f * a[c][j];
        inv[r][j] = inv[r][j] - f * inv[c][j];
      }
    }
  }
  return inv;
}

/// gamma[i][j][k] = Gamma^i_jk.
inline std::vector<Matrix> christoffel(const Matrix& a) {
  const int n = static_cast<int>(a.size());
  const int dim = a[0][0].dim();
  const Matrix ai = gauss_inverse(a);
  std::vector<Matrix> gamma(n, Matrix(n, std::vector<RatFn>(n, RatFn(dim))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        RatFn acc(dim);
        for (int l = 0; l < n; ++l)
          acc += ai[i][l] * (a[l][k].dx(j + 1) + a[l][j].dx(k + 1) - a[j][k].dx(l + 1));
        gamma[i][j][k] = acc.scaled(mpq_class(1, 2));
      }
  return gamma;
}

/// R^i_k = R^i_jkl y^j y^l with R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj
/// + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj.
inline Matrix riemann_contracted(const Matrix& a) {
  const int n = static_cast<int>(a.size());
  const int dim = a[0][0].dim();
  const auto G = christoffel(a);
  Matrix R(n, std::vector<RatFn>(n, RatFn(dim)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          RatFn r = G[i][l][j].dx(k + 1) - G[i][k][j].dx(l + 1);
          for (int m = 0; m < n; ++m) r += G[i][k][m] * G[m][l][j] - G[i][l][m] * G[m][k][j];
          R[i][k] += r * RatFn::y(dim, j + 1) * RatFn::y(dim, l + 1);
        }
  return R;
}

/// G^i = Gamma^i_jk y^j y^k / 2.
inline std::vector<RatFn> quadratic_spray(const Matrix& a) {
  const int n = static_cast<int>(a.size());
  const int dim = a[0][0].dim();
  const auto G = christoffel(a);
  std::vector<RatFn> out(n, RatFn(dim));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[i] += G[i][j][k] * RatFn::y(dim, j + 1) * RatFn::y(dim, k + 1);
  for (auto& g : out) g = g.scaled(mpq_class(1, 2));
  return out;
}

}  // namespace arf::test
