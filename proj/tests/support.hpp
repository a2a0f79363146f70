#pragma once

// Reference computations for the tests. None of them call into the
// library's factorization code: ranks come from row reduction, norms from
// the Hermitian eigen-solver, projections from plain cyclic iteration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isoposet/chain.hpp"
#include "isoposet/fixtures.hpp"
#include "isoposet/linalg.hpp"
#include "isoposet/partial_isometry.hpp"

namespace oracle {

using isoposet::Matrix;
using isoposet::Scalar;
using isoposet::Vector;

/// Rank by Gaussian elimination with partial pivoting; pivots at or below
/// rel * (largest entry) count as zero.
inline std::size_t gauss_rank(Matrix m, double rel = 1e-9) {
  if (m.size() == 0) return 0;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0;
  std::size_t rank = 0;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv = row;
    for (Eigen::Index i = row + 1; i < m.rows(); ++i) {
      if (std::abs(m(i, col)) > std::abs(m(piv, col))) piv = i;
    }
    if (std::abs(m(piv, col)) <= rel * scale) continue;
    m.row(piv).swap(m.row(row));
    for (Eigen::Index i = row + 1; i < m.rows(); ++i) {
      const Scalar f = m(i, col) / m(row, col);
      m.row(i) -= f * m.row(row);
    }
    ++row;
    ++rank;
  }
  return rank;
}

/// Largest singular value from the eigenvalues of M*M.
inline double norm2(const Matrix& m) {
  const Matrix g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Orthogonal projection onto the column span of a full-column-rank matrix.
inline Matrix span_projector(const Matrix& basis) {
  if (basis.cols() == 0) return Matrix::Zero(basis.rows(), basis.rows());
  const Matrix gram = basis.adjoint() * basis;
  return basis * gram.inverse() * basis.adjoint();
}

/// Membership straight from the defining equations, spectral residuals.
inline double membership_residual(const Matrix& t, const isoposet::Chain& chain) {
  const auto d = t.rows();
  double worst = 0.0;
  for (const auto& e : chain.elements()) {
    const Matrix p = e.matrix().adjoint() * e.matrix();
    const Matrix q = e.matrix() * e.matrix().adjoint();
    worst = std::max(worst, norm2((Matrix::Identity(d, d) - q) * t * p));
  }
  return worst;
}

/// Cyclic projections T ↦ T − (I − Q_E) T P_E over the chain elements
/// themselves (not the increments), iterated to a fixed point.
inline Matrix naive_projection(const Matrix& t, const isoposet::Chain& chain, int sweeps = 20000) {
  const auto d = t.rows();
  Matrix cur = t;
  for (int s = 0; s < sweeps; ++s) {
    double moved = 0.0;
    for (const auto& e : chain.elements()) {
      const Matrix p = e.matrix().adjoint() * e.matrix();
      const Matrix q = e.matrix() * e.matrix().adjoint();
      const Matrix delta = (Matrix::Identity(d, d) - q) * cur * p;
      moved = std::max(moved, delta.norm());
      cur -= delta;
    }
    if (moved < 1e-15 * (1.0 + cur.norm())) break;
  }
  return cur;
}

/// k × k truncated shift e_1 ↦ e_2 ↦ … ↦ e_k ↦ 0.
inline Matrix truncated_shift(Eigen::Index k) {
  Matrix s = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i + 1 < k; ++i) s(i + 1, i) = 1.0;
  return s;
}

inline Matrix direct_sum(const std::vector<Matrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

/// Minimal spectral norm over real 2×2 upper-triangular A with A x = y for
/// real x, y with x_1 ≠ 0: rows are a_22 = y_2 / x_2 (or free when x_2 = 0)
/// and (a_11, a_12) on the line a_11 x_1 + a_12 x_2 = y_1. Grid search over
/// the remaining free parameters.
inline double grid_min_norm_2x2(double x1, double x2, double y1, double y2, int steps = 4001,
                                double span = 6.0) {
  double best = std::numeric_limits<double>::infinity();
  const auto norm_of = [](double a11, double a12, double a22) {
    Eigen::Matrix2d a;
    a << a11, a12, 0.0, a22;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a.transpose() * a, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  };
  const auto search = [&](double a22, double centre, double width) {
    double local_best = std::numeric_limits<double>::infinity();
    double arg = centre;
    for (int s = 0; s < steps; ++s) {
      const double a12 = centre - width + 2.0 * width * s / (steps - 1);
      const double a11 = (y1 - a12 * x2) / x1;
      const double v = norm_of(a11, a12, a22);
      if (v < local_best) {
        local_best = v;
        arg = a12;
      }
    }
    return std::pair{local_best, arg};
  };
  const auto refine = [&](double a22) {
    auto [v, a12] = search(a22, 0.0, span);
    double width = span;
    for (int r = 0; r < 6; ++r) {
      width *= 4.0 / steps * 10.0;
      std::tie(v, a12) = search(a22, a12, width);
    }
    return v;
  };
  if (x2 != 0.0) {
    best = refine(y2 / x2);
  } else {
    for (int s = 0; s < 201; ++s) best = std::min(best, refine(-span + 2.0 * span * s / 200));
  }
  return best;
}

}  // namespace oracle
