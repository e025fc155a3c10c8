#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "halfline/errors.hpp"

namespace halfline {

/// Symmetric tridiagonal matrix: diagonal d (size m) and off-diagonal e (size m-1).
template <typename Scalar>
struct SymTridiagonal {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Array diag;
  Array off;

  Eigen::Index size() const { return diag.size(); }

  /// Gershgorin enclosure of the spectrum.
  std::pair<Scalar, Scalar> gershgorin() const {
    const Eigen::Index m = size();
    Scalar lo = std::numeric_limits<Scalar>::max();
    Scalar hi = std::numeric_limits<Scalar>::lowest();
    for (Eigen::Index i = 0; i < m; ++i) {
      Scalar r = 0;
      if (i > 0) r += std::abs(off[i - 1]);
      if (i + 1 < m) r += std::abs(off[i]);
      lo = std::min(lo, diag[i] - r);
      hi = std::max(hi, diag[i] + r);
    }
    return {lo, hi};
  }

  Scalar norm_inf() const {
    const auto [lo, hi] = gershgorin();
    return std::max(std::abs(lo), std::abs(hi));
  }

  Array apply(const Array& v) const {
    const Eigen::Index m = size();
    Array w = diag * v;
    w.head(m - 1) += off * v.tail(m - 1);
    w.tail(m - 1) += off * v.head(m - 1);
    return w;
  }
};

/// Number of eigenvalues strictly below `shift`, from the sign pattern of the
/// LDL^T pivots of T - shift I. Pivots are kept away from zero by a floor
/// proportional to the largest squared off-diagonal entry.
template <typename Scalar>
Eigen::Index sturm_count(const SymTridiagonal<Scalar>& t, Scalar shift) {
  const Eigen::Index m = t.size();
  const Scalar safmin = std::numeric_limits<Scalar>::min();
  Scalar emax2 = 0;
  for (Eigen::Index i = 0; i + 1 < m; ++i) emax2 = std::max(emax2, t.off[i] * t.off[i]);
  const Scalar pivmin = safmin * std::max(Scalar(1), emax2);

  Eigen::Index count = 0;
  Scalar q = t.diag[0] - shift;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0) ++count;
  for (Eigen::Index i = 1; i < m; ++i) {
    q = t.diag[i] - shift - t.off[i - 1] * t.off[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
  }
  return count;
}

/// Bisection for the k-th smallest eigenvalue (0-based) inside [lo, hi],
/// where sturm_count(lo) <= k < sturm_count(hi).
template <typename Scalar>
Scalar bisect_eigenvalue(const SymTridiagonal<Scalar>& t, Eigen::Index k, Scalar lo, Scalar hi,
                         Scalar tol) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int iter = 0; iter < 400; ++iter) {
    const Scalar width = hi - lo;
    const Scalar floor = Scalar(2) * eps * (std::abs(lo) + std::abs(hi));
    if (width <= std::max(tol, floor)) break;
    const Scalar mid = lo + width / Scalar(2);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo + (hi - lo) / Scalar(2);
}

/// LU factorization with partial pivoting of T - shift I (the LAPACK gttrf
/// layout: U carries two super-diagonals).
template <typename Scalar>
class ShiftedTridiagonalLU {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  ShiftedTridiagonalLU(const SymTridiagonal<Scalar>& t, Scalar shift) {
    const Eigen::Index m = t.size();
    d_ = t.diag - shift;
    dl_ = t.off;
    du_ = t.off;
    du2_ = Array::Zero(std::max<Eigen::Index>(m - 2, 0));
    pivot_.assign(static_cast<std::size_t>(m), false);

    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] != Scalar(0)) {
          const Scalar fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const Scalar fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const Scalar temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < m) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        pivot_[static_cast<std::size_t>(i)] = true;
      }
    }
    const Scalar tiny = std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), t.norm_inf());
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::abs(d_[i]) < tiny) d_[i] = d_[i] < 0 ? -tiny : tiny;
    }
  }

  Array solve(Array b) const {
    const Eigen::Index m = d_.size();
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      if (!pivot_[static_cast<std::size_t>(i)]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const Scalar temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[m - 1] /= d_[m - 1];
    if (m > 1) b[m - 2] = (b[m - 2] - du_[m - 2] * b[m - 1]) / d_[m - 2];
    for (Eigen::Index i = m - 3; i >= 0; --i) {
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
    return b;
  }

 private:
  Array d_, dl_, du_, du2_;
  std::vector<bool> pivot_;
};

template <typename Scalar>
struct InverseIterationResult {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> vector;  // unit Euclidean norm
  Scalar residual = 0;                              // ||(T - lambda) v||
  int iterations = 0;
  bool converged = false;
};

/// Inverse iteration at a (bisection-accurate) eigenvalue. Iterates are kept
/// orthogonal to `previous` (unit vectors of lower eigenvalues). The residual
/// target is absolute_tol plus a rounding allowance of 64 eps ||T||.
template <typename Scalar>
InverseIterationResult<Scalar> inverse_iteration(
    const SymTridiagonal<Scalar>& t, Scalar lambda,
    std::span<const Eigen::Array<Scalar, Eigen::Dynamic, 1>> previous, Scalar absolute_tol,
    int max_iterations = 5) {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index m = t.size();
  const ShiftedTridiagonalLU<Scalar> lu(t, lambda);
  const Scalar target =
      absolute_tol + Scalar(64) * std::numeric_limits<Scalar>::epsilon() * t.norm_inf();

  // deterministic start vector without special structure
  Array v(m);
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (Eigen::Index i = 0; i < m; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = Scalar(0.5) + static_cast<Scalar>(state >> 11) * Scalar(0x1.0p-53);
  }
  v /= std::sqrt((v * v).sum());

  InverseIterationResult<Scalar> out;
  for (int it = 1; it <= max_iterations; ++it) {
    Array w = lu.solve(v);
    for (const auto& p : previous) w -= (w * p).sum() * p;
    const Scalar norm = std::sqrt((w * w).sum());
    if (!(norm > 0) || !std::isfinite(norm)) break;
    v = w / norm;
    out.iterations = it;
    const Array r = t.apply(v) - lambda * v;
    out.residual = std::sqrt((r * r).sum());
    if (it >= 2 && out.residual <= target) {
      out.converged = true;
      break;
    }
  }
  out.vector = std::move(v);
  return out;
}

}  // namespace halfline
