#include "isoposet/partial_isometry.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "isoposet/errors.hpp"

namespace isoposet {

namespace {

// Projections have spectrum {0, 1}; anything above one half is range.
constexpr double kProjectionCutoff = 0.5;

void require_same_dim(std::span<const PartialIsometry> family, const char* what) {
  if (family.empty()) throw std::invalid_argument(std::string(what) + ": empty family");
  const std::size_t d = family.front().dim();
  for (const auto& e : family) {
    if (e.dim() != d) throw DimensionMismatch(std::string(what) + ": dimensions differ");
  }
}

// Residual of "M is isometric on ker(M)^⊥".
double isometric_on_initial(const Matrix& m, const Tolerances& tol) {
  const Subspace initial = orthonormal_range(m.adjoint(), tol);
  if (initial.is_zero()) return 0.0;
  const Matrix image = m * initial.basis();
  const auto k = static_cast<Eigen::Index>(initial.dim());
  return (image.adjoint() * image - Matrix::Identity(k, k)).norm();
}

}  // namespace

PartialIsometry::PartialIsometry(Matrix v, Matrix p, Matrix q, Subspace initial, Subspace final_space)
    : v_(std::move(v)),
      p_(std::move(p)),
      q_(std::move(q)),
      initial_(std::move(initial)),
      final_(std::move(final_space)) {}

double partial_isometry_residual(const Matrix& m) {
  return (m * m.adjoint() * m - m).norm() / (1.0 + m.norm());
}

PartialIsometry PartialIsometry::validate(const Matrix& m, const Tolerances& tol) {
  require_square(m, "validate_partial_isometry");
  if (static_cast<std::size_t>(m.rows()) > kMaxDim) {
    throw DimensionMismatch("validate_partial_isometry: dimension exceeds 64");
  }
  const double residual = partial_isometry_residual(m);
  if (!(residual <= tol.eq)) {
    throw NotAPartialIsometry(
        "not a partial isometry: ‖VV*V − V‖ relative residual " + std::to_string(residual),
        residual);
  }
  Matrix p = m.adjoint() * m;
  Matrix q = m * m.adjoint();
  Subspace initial = range_abs(p, kProjectionCutoff);
  Subspace final_space = range_abs(q, kProjectionCutoff);
  return PartialIsometry(m, std::move(p), std::move(q), std::move(initial), std::move(final_space));
}

PartialIsometry PartialIsometry::zero(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return PartialIsometry(Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d), Subspace(dim),
                         Subspace(dim));
}

PartialIsometry PartialIsometry::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return PartialIsometry(Matrix::Identity(d, d), Matrix::Identity(d, d), Matrix::Identity(d, d),
                         Subspace::whole(dim), Subspace::whole(dim));
}

std::array<double, 6> basic_condition_residuals(const Matrix& m, const Tolerances& tol) {
  require_square(m, "basic_condition_residuals");
  const double scale = 1.0 + m.norm();
  const Matrix vvs = m * m.adjoint();
  const Matrix vsv = m.adjoint() * m;
  return {
      isometric_on_initial(m, tol) / scale,
      isometric_on_initial(m.adjoint(), tol) / scale,
      (vvs * vvs - vvs).norm() / scale,
      (vsv * vsv - vsv).norm() / scale,
      (vvs * m - m).norm() / scale,
      (vsv * m.adjoint() - m.adjoint()).norm() / scale,
  };
}

bool hm_leq(const PartialIsometry& e, const PartialIsometry& f, const Tolerances& tol) {
  if (e.dim() != f.dim()) throw DimensionMismatch("hm_leq: dimensions differ");
  if (e.rank() > f.rank()) return false;
  const Matrix& em = e.matrix();
  return (f.matrix() * e.initial_projection() - em).norm() <= tol.eq * (1.0 + em.norm());
}

bool hm_comparable(const PartialIsometry& e, const PartialIsometry& f, const Tolerances& tol) {
  return hm_leq(e, f, tol) || hm_leq(f, e, tol);
}

bool hm_equal(const PartialIsometry& e, const PartialIsometry& f, const Tolerances& tol) {
  return e.dim() == f.dim() && approx_equal(e.matrix(), f.matrix(), tol);
}

Subspace agreement_space(std::span<const PartialIsometry> family, const Tolerances& tol) {
  require_same_dim(family, "agreement_space");
  const auto d = static_cast<Eigen::Index>(family.front().dim());
  const auto n = static_cast<Eigen::Index>(family.size());
  // Rows: (I − P_E) for each member, then (E − E_0) for the others.
  Matrix stacked(d * (2 * n - 1), d);
  for (Eigen::Index k = 0; k < n; ++k) {
    stacked.middleRows(k * d, d) =
        Matrix::Identity(d, d) - family[static_cast<std::size_t>(k)].initial_projection();
  }
  const Matrix& base = family.front().matrix();
  for (Eigen::Index k = 1; k < n; ++k) {
    stacked.middleRows((n + k - 1) * d, d) = family[static_cast<std::size_t>(k)].matrix() - base;
  }
  return kernel_abs(stacked, tol.eq);
}

PartialIsometry infimum(std::span<const PartialIsometry> family, const Tolerances& tol) {
  const Subspace x = agreement_space(family, tol);
  return PartialIsometry::validate(family.front().matrix() * x.projector(), tol);
}

std::optional<std::pair<std::size_t, std::size_t>> first_incomparable_pair(
    std::span<const PartialIsometry> family, const Tolerances& tol) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (!hm_comparable(family[i], family[j], tol)) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

PartialIsometry supremum(std::span<const PartialIsometry> family,
                         const std::optional<PartialIsometry>& upper_bound, const Tolerances& tol) {
  require_same_dim(family, "supremum");
  const std::size_t d = family.front().dim();
  if (upper_bound) {
    if (upper_bound->dim() != d) throw DimensionMismatch("supremum: bound dimension differs");
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (!hm_leq(family[i], *upper_bound, tol)) {
        throw NotAnUpperBound("supremum: bound does not dominate member " + std::to_string(i));
      }
    }
    Matrix spanning(static_cast<Eigen::Index>(d), 0);
    for (const auto& e : family) {
      Matrix grown(spanning.rows(), spanning.cols() + e.initial_space().basis().cols());
      grown << spanning, e.initial_space().basis();
      spanning = std::move(grown);
    }
    const Subspace x = range_abs(spanning, tol.rank);
    return PartialIsometry::validate(upper_bound->matrix() * x.projector(), tol);
  }
  if (first_incomparable_pair(family, tol)) {
    throw NoUpperBoundProvided("supremum: family is not totally ordered and no upper bound was given");
  }
  const auto top = std::max_element(family.begin(), family.end(),
                                    [](const auto& a, const auto& b) { return a.rank() < b.rank(); });
  return *top;
}

std::vector<PartialIsometry> complete_cover(std::span<const PartialIsometry> family,
                                            const Tolerances& tol) {
  if (family.empty()) throw std::invalid_argument("complete_cover: empty family");
  require_same_dim(family, "complete_cover");
  if (const auto bad = first_incomparable_pair(family, tol)) {
    throw NotTotallyOrdered("complete_cover: members " + std::to_string(bad->first) + " and " +
                                std::to_string(bad->second) + " are incomparable",
                            bad->first, bad->second);
  }
  // In a chain, E < F forces rank(E) < rank(F), so rank sorts the chain.
  std::vector<PartialIsometry> sorted;
  for (const auto& e : family) {
    if (e.rank() > 0) sorted.push_back(e);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.rank() < b.rank(); });
  std::vector<PartialIsometry> out{PartialIsometry::zero(family.front().dim())};
  for (auto& e : sorted) {
    if (!hm_equal(out.back(), e, tol)) out.push_back(std::move(e));
  }
  return out;
}

PowerPIReport hw_invariants(const PartialIsometry& v, const Tolerances& tol) {
  const std::size_t d = v.dim();
  PowerPIReport report;
  report.horizon = 2 * d;
  report.rank_sequence.reserve(report.horizon + 1);
  report.rank_sequence.push_back(d);

  const auto rank_of = [&](const Matrix& m) {
    const Eigen::VectorXd s = singular_values(m);
    return static_cast<std::size_t>((s.array() > tol.rank).count());
  };

  Matrix power = v.matrix();
  for (std::size_t k = 1; k <= report.horizon; ++k) {
    if (!report.failure_power && partial_isometry_residual(power) > tol.eq) {
      report.failure_power = k;
    }
    report.rank_sequence.push_back(rank_of(power));
    power = power * v.matrix();
  }
  report.is_ppi = !report.failure_power.has_value();
  if (!report.is_ppi) return report;

  const auto& r = report.rank_sequence;
  report.dim_unitary = r.back();
  for (std::size_t k = 1; k < report.horizon; ++k) {
    const auto m = static_cast<long>(r[k - 1]) - 2 * static_cast<long>(r[k]) + static_cast<long>(r[k + 1]);
    if (m != 0) report.shift_multiplicities[k] = static_cast<std::size_t>(m);
  }
  return report;
}

}  // namespace isoposet
