#pragma once

// Dense complex linear algebra shared by every other module: tolerance
// policy, tolerant rank, orthonormal bases of ranges/kernels, subspace
// calculus and the spectral norm.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace isoposet {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest supported ambient dimension.
inline constexpr std::size_t kMaxDim = 64;

struct Tolerances {
  double rank = 1e-10;    ///< relative singular-value cutoff
  double eq = 1e-9;       ///< relative Frobenius equality
  double member = 1e-9;   ///< relative membership residual

  /// Throws std::invalid_argument unless every value lies in (0, 1).
  void check() const;
};

/// <u, v>, linear in the first argument and conjugate-linear in the second.
inline Scalar inner(const Vector& u, const Vector& v) { return v.dot(u); }

/// Rank-one realization of e ⊗ f, i.e. the matrix of v ↦ <v, e> f.
inline Matrix rank_one(const Vector& e, const Vector& f) { return f * e.adjoint(); }

/// Throws DimensionMismatch / std::invalid_argument when M is empty or has
/// non-finite entries.
void require_finite(const Matrix& m, const char* what);
void require_square(const Matrix& m, const char* what);

/// Singular values, non-increasing.
Eigen::VectorXd singular_values(const Matrix& m);

/// Number of singular values strictly above tol.rank * sigma_max.
std::size_t numerical_rank(const Matrix& m, const Tolerances& tol = {});

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// ‖A − B‖_F ≤ tol.eq · (1 + max(‖A‖_F, ‖B‖_F)).
bool approx_equal(const Matrix& a, const Matrix& b, const Tolerances& tol = {});

/// A closed subspace of C^d held as an orthonormal basis (d × k, k may be 0).
class Subspace {
public:
  /// The zero subspace of C^ambient_dim.
  explicit Subspace(std::size_t ambient_dim);

  /// Span of the columns of `spanning`, re-orthonormalized.
  static Subspace span_of(const Matrix& spanning, const Tolerances& tol = {});
  static Subspace whole(std::size_t ambient_dim);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  bool is_zero() const noexcept { return dim() == 0; }
  const Matrix& basis() const noexcept { return basis_; }

  /// Orthogonal projection onto the subspace.
  Matrix projector() const;
  Subspace orthogonal_complement(const Tolerances& tol = {}) const;
  /// Distance of v from the subspace.
  double distance(const Vector& v) const;
  bool contains(const Vector& v, const Tolerances& tol = {}) const;

private:
  Subspace(std::size_t ambient_dim, Matrix basis);
  friend Subspace orthonormal_range(const Matrix&, const Tolerances&);
  friend Subspace orthonormal_kernel(const Matrix&, const Tolerances&);
  friend Subspace range_abs(const Matrix&, double);
  friend Subspace kernel_abs(const Matrix&, double);

  std::size_t ambient_dim_;
  Matrix basis_;
};

/// Column space of M; directions with sigma ≤ tol.rank · sigma_max are dropped.
Subspace orthonormal_range(const Matrix& m, const Tolerances& tol = {});

/// Null space of M, complementary to orthonormal_range(M*) under the same cutoff.
Subspace orthonormal_kernel(const Matrix& m, const Tolerances& tol = {});

/// Range / kernel with an absolute singular-value cutoff, for matrices whose
/// natural scale is 1 (stacked projections, differences of partial isometries).
Subspace range_abs(const Matrix& m, double cutoff);
Subspace kernel_abs(const Matrix& m, double cutoff);

/// A ⊆ B, tested as ‖(I − P_B) a_j‖ ≤ tol.eq for every basis vector a_j of A.
bool subspace_leq(const Subspace& a, const Subspace& b, const Tolerances& tol = {});

/// Mutual inclusion.
bool subspace_equal(const Subspace& a, const Subspace& b, const Tolerances& tol = {});

/// Intersection, computed as the kernel of the stacked complementary projections.
Subspace subspace_intersection(std::span<const Subspace> spaces, const Tolerances& tol = {});

/// B ⊖ A: the part of B orthogonal to A.
Subspace relative_complement(const Subspace& b, const Subspace& a, const Tolerances& tol = {});

}  // namespace isoposet
