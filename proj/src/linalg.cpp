#include "isoposet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "isoposet/errors.hpp"

namespace isoposet {

namespace {

struct Factorization {
  Eigen::JacobiSVD<Matrix> svd;
  std::size_t rank;
};

// Singular values strictly above `cutoff` count towards the rank.
Factorization factor_abs(const Matrix& m, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(rank)) > cutoff) {
    ++rank;
  }
  return {std::move(svd), rank};
}

Factorization factor(const Matrix& m, const Tolerances& tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? tol.rank * s(0) : 0.0;
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(rank)) > cutoff) {
    ++rank;
  }
  return {std::move(svd), rank};
}

}  // namespace

void Tolerances::check() const {
  for (double t : {rank, eq, member}) {
    if (!(t > 0.0 && t < 1.0)) {
      throw std::invalid_argument("tolerances must lie strictly between 0 and 1");
    }
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw DimensionMismatch(std::string(what) + ": empty matrix");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

void require_square(const Matrix& m, const char* what) {
  require_finite(m, what);
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is not square");
  }
}

Eigen::VectorXd singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

std::size_t numerical_rank(const Matrix& m, const Tolerances& tol) {
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<std::size_t>((s.array() > tol.rank * s(0)).count());
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

bool approx_equal(const Matrix& a, const Matrix& b, const Tolerances& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = 1.0 + std::max(a.norm(), b.norm());
  return (a - b).norm() <= tol.eq * scale;
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(std::size_t ambient_dim)
    : ambient_dim_(ambient_dim), basis_(static_cast<Eigen::Index>(ambient_dim), 0) {}

Subspace::Subspace(std::size_t ambient_dim, Matrix basis)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {}

Subspace Subspace::span_of(const Matrix& spanning, const Tolerances& tol) {
  return orthonormal_range(spanning, tol);
}

Subspace Subspace::whole(std::size_t ambient_dim) {
  const auto d = static_cast<Eigen::Index>(ambient_dim);
  return Subspace(ambient_dim, Matrix::Identity(d, d));
}

Matrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

Subspace Subspace::orthogonal_complement(const Tolerances& tol) const {
  if (is_zero()) return whole(ambient_dim_);
  return orthonormal_kernel(basis_.adjoint(), tol);
}

double Subspace::distance(const Vector& v) const {
  if (is_zero()) return v.norm();
  return (v - basis_ * (basis_.adjoint() * v)).norm();
}

bool Subspace::contains(const Vector& v, const Tolerances& tol) const {
  return distance(v) <= tol.eq * (1.0 + v.norm());
}

Subspace orthonormal_range(const Matrix& m, const Tolerances& tol) {
  const auto d = static_cast<std::size_t>(m.rows());
  if (m.cols() == 0 || m.rows() == 0) return Subspace(d);
  const Factorization f = factor(m, tol);
  return Subspace(d, f.svd.matrixU().leftCols(static_cast<Eigen::Index>(f.rank)));
}

Subspace orthonormal_kernel(const Matrix& m, const Tolerances& tol) {
  const auto n = static_cast<std::size_t>(m.cols());
  if (m.rows() == 0) return Subspace::whole(n);
  const Factorization f = factor(m, tol);
  return Subspace(n, f.svd.matrixV().rightCols(static_cast<Eigen::Index>(n - f.rank)));
}

Subspace range_abs(const Matrix& m, double cutoff) {
  const auto d = static_cast<std::size_t>(m.rows());
  if (m.cols() == 0 || m.rows() == 0) return Subspace(d);
  const Factorization f = factor_abs(m, cutoff);
  return Subspace(d, f.svd.matrixU().leftCols(static_cast<Eigen::Index>(f.rank)));
}

Subspace kernel_abs(const Matrix& m, double cutoff) {
  const auto n = static_cast<std::size_t>(m.cols());
  if (m.rows() == 0) return Subspace::whole(n);
  const Factorization f = factor_abs(m, cutoff);
  return Subspace(n, f.svd.matrixV().rightCols(static_cast<Eigen::Index>(n - f.rank)));
}

bool subspace_leq(const Subspace& a, const Subspace& b, const Tolerances& tol) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionMismatch("subspace_leq: ambient dimensions differ");
  }
  if (a.is_zero()) return true;
  if (a.dim() > b.dim()) return false;
  Matrix outside = a.basis();
  if (!b.is_zero()) outside -= b.basis() * (b.basis().adjoint() * a.basis());
  for (Eigen::Index j = 0; j < outside.cols(); ++j) {
    if (outside.col(j).norm() > tol.eq) return false;
  }
  return true;
}

bool subspace_equal(const Subspace& a, const Subspace& b, const Tolerances& tol) {
  return a.dim() == b.dim() && subspace_leq(a, b, tol) && subspace_leq(b, a, tol);
}

Subspace subspace_intersection(std::span<const Subspace> spaces, const Tolerances& tol) {
  if (spaces.empty()) {
    throw std::invalid_argument("subspace_intersection: empty list");
  }
  const std::size_t d = spaces.front().ambient_dim();
  const auto di = static_cast<Eigen::Index>(d);
  Matrix stacked(di * static_cast<Eigen::Index>(spaces.size()), di);
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    if (spaces[k].ambient_dim() != d) {
      throw DimensionMismatch("subspace_intersection: ambient dimensions differ");
    }
    stacked.middleRows(static_cast<Eigen::Index>(k) * di, di) =
        Matrix::Identity(di, di) - spaces[k].projector();
  }
  // The stacked blocks are projections, so the natural scale is 1; a
  // relative cutoff would misfire when every block vanishes.
  return kernel_abs(stacked, tol.rank);
}

Subspace relative_complement(const Subspace& b, const Subspace& a, const Tolerances& tol) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionMismatch("relative_complement: ambient dimensions differ");
  }
  if (b.is_zero()) return Subspace(b.ambient_dim());
  Matrix rest = b.basis();
  if (!a.is_zero()) rest -= a.basis() * (a.basis().adjoint() * b.basis());
  // Columns of `rest` are projections of unit vectors: absolute cutoff.
  return range_abs(rest, tol.rank);
}

}  // namespace isoposet
