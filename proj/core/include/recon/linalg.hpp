#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace recon::detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

/// Pivot magnitudes below this are treated as singular.
inline constexpr double kPivotTol = 1e-12;

/// In-place LU factorization with partial pivoting of the row-major n x n
/// matrix `a`.  Fills `piv` with the pivot row chosen at each step.
/// Returns false if some pivot magnitude falls below pivot_tol.
inline bool lu_factor(double* a, int n, int* piv, double pivot_tol = kPivotTol) {
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(a[k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(a[i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv[k] = p;
    if (best < pivot_tol) return false;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
    }
    const double inv = 1.0 / a[k * n + k];
    for (int i = k + 1; i < n; ++i) {
      const double l = a[i * n + k] * inv;
      a[i * n + k] = l;
      for (int j = k + 1; j < n; ++j) a[i * n + j] -= l * a[k * n + j];
    }
  }
  return true;
}

/// Solves L U x = P b using factors produced by lu_factor; b is overwritten
/// with the solution.  The stored L carries every row swap, so all swaps
/// must be applied to b before the forward substitution.
inline void lu_solve(const double* a, int n, const int* piv, double* b) {
  for (int k = 0; k < n; ++k) {
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = k + 1; i < n; ++i) b[i] -= a[i * n + k] * b[k];
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = k + 1; j < n; ++j) b[k] -= a[k * n + j] * b[j];
    b[k] /= a[k * n + k];
  }
}

}  // namespace recon::detail
