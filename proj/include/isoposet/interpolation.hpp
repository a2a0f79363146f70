#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <vector>

#include "isoposet/chain.hpp"
#include "isoposet/linalg.hpp"

namespace isoposet {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Optimal constant of a tail-ratio supremum, with the index attaining it.
struct BoundData {
  double k = 0.0;              ///< may be +inf
  std::size_t certificate = 0; ///< 0-based index attaining the supremum
  bool finite() const noexcept { return k < kInfinity; }
};

/// K = max_r ‖y_{r..}‖ / ‖x_{r..}‖ over 0-based tail starts r. A vanishing
/// ratio 0/0 contributes 0; nonzero/0 makes K infinite. Tails below
/// tol.rank times the full norm count as zero.
BoundData tail_constant(const Vector& x, const Vector& y, const Tolerances& tol = {});

/// Upper-triangular A with A x = y and ‖A‖ ≤ tail_constant(x, y). Rows with
/// y_i = 0 and columns with x_j = 0 are identically zero; `zero_rows` and
/// `zero_cols` may only name such indices (BadZeroRequest otherwise).
/// Infeasible when the tail constant is infinite.
Matrix triangular_interpolate(const Vector& x, const Vector& y,
                              const std::set<std::size_t>& zero_rows = {},
                              const std::set<std::size_t>& zero_cols = {},
                              const Tolerances& tol = {});

/// sup over chain elements of ‖(I − Q_E) y‖ / ‖(I − P_E) x‖.
BoundData chain_bound(const Vector& x, const Vector& y, const Chain& chain,
                      const Tolerances& tol = {});

/// sup over chain elements of ‖P_E y‖ / ‖Q_E x‖.
BoundData adjoint_bound(const Vector& x, const Vector& y, const Chain& chain,
                        const Tolerances& tol = {});

/// Intermediate data of the chain solvers: the orthogonal pieces of x and y
/// cut out by consecutive chain elements, and the triangular matrices.
struct InterpolationWorkspace {
  std::vector<Vector> x_pieces;
  std::vector<Vector> y_pieces;
  Eigen::VectorXd x_norms;
  Eigen::VectorXd y_norms;
  Eigen::MatrixXd b;  ///< upper triangular, B · x_norms = y_norms
  Eigen::MatrixXd a;  ///< a_ij = b_ij / (‖x_j‖ ‖y_i‖), 0 where b_ij = 0
};

struct InterpolationSolution {
  Matrix t;
  double k = 0.0;
  std::size_t certificate = 0;
  double achieved_norm = 0.0;
  std::size_t iterations = 0;  ///< rows assembled by the triangular solver
  InterpolationWorkspace workspace;
};

/// Minimal-norm T in the operator space with T x = y. Requires x in the
/// initial space and y in the final space of some element
/// (HypothesisViolated) and a finite chain_bound (Infeasible).
InterpolationSolution chain_interpolate(const Vector& x, const Vector& y, const Chain& chain,
                                        const Tolerances& tol = {});

/// Minimal-norm T in the operator space with T* x = y. Requires y in the
/// initial space of some element and a finite adjoint_bound.
InterpolationSolution chain_interpolate_adjoint(const Vector& x, const Vector& y,
                                                const Chain& chain, const Tolerances& tol = {});

}  // namespace isoposet
