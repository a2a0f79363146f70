#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "isoposet/linalg.hpp"

namespace isoposet {

/// A square matrix V with VV*V = V, together with its initial projection
/// P = V*V, final projection Q = VV* and the corresponding subspaces.
class PartialIsometry {
public:
  /// Throws NotAPartialIsometry when ‖VV*V − V‖_F > tol.eq · (1 + ‖V‖_F).
  static PartialIsometry validate(const Matrix& m, const Tolerances& tol = {});
  static PartialIsometry zero(std::size_t dim);
  static PartialIsometry identity(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.rows()); }
  const Matrix& matrix() const noexcept { return v_; }
  const Matrix& initial_projection() const noexcept { return p_; }
  const Matrix& final_projection() const noexcept { return q_; }
  /// ker(V)^⊥
  const Subspace& initial_space() const noexcept { return initial_; }
  /// ran(V)
  const Subspace& final_space() const noexcept { return final_; }
  std::size_t rank() const noexcept { return initial_.dim(); }

private:
  PartialIsometry(Matrix v, Matrix p, Matrix q, Subspace initial, Subspace final_space);

  Matrix v_;
  Matrix p_;
  Matrix q_;
  Subspace initial_;
  Subspace final_;
};

/// Residuals of the six equivalent characterisations of a partial isometry:
///   0: V isometric on ker(V)^⊥        3: V*V idempotent
///   1: V* isometric on ker(V*)^⊥      4: VV*V = V
///   2: VV* idempotent                 5: V*VV* = V*
/// All are relative (divided by 1 + ‖V‖_F).
std::array<double, 6> basic_condition_residuals(const Matrix& m, const Tolerances& tol = {});

/// ‖VV*V − V‖_F / (1 + ‖V‖_F)
double partial_isometry_residual(const Matrix& m);

/// Halmos–McLaughlin order: E ≤ F iff F agrees with E on E's initial space,
/// tested as ‖F·P_E − E‖_F ≤ tol.eq · (1 + ‖E‖_F).
bool hm_leq(const PartialIsometry& e, const PartialIsometry& f, const Tolerances& tol = {});

/// E ≤ F or F ≤ E.
bool hm_comparable(const PartialIsometry& e, const PartialIsometry& f, const Tolerances& tol = {});

/// Matrix equality within tol.eq.
bool hm_equal(const PartialIsometry& e, const PartialIsometry& f, const Tolerances& tol = {});

/// The largest subspace of ∩ ker(E)^⊥ on which every member agrees.
Subspace agreement_space(std::span<const PartialIsometry> family, const Tolerances& tol = {});

/// Greatest lower bound: a fixed member restricted to the agreement space.
PartialIsometry infimum(std::span<const PartialIsometry> family, const Tolerances& tol = {});

/// Least upper bound. With `upper_bound`, the bound restricted to the span of
/// the members' initial spaces (NotAnUpperBound if it fails to dominate).
/// Without one, the family must be totally ordered and its maximum is
/// returned (NoUpperBoundProvided otherwise).
PartialIsometry supremum(std::span<const PartialIsometry> family,
                         const std::optional<PartialIsometry>& upper_bound = std::nullopt,
                         const Tolerances& tol = {});

/// Index pair of the first incomparable members, if any.
std::optional<std::pair<std::size_t, std::size_t>> first_incomparable_pair(
    std::span<const PartialIsometry> family, const Tolerances& tol = {});

/// Sorted, deduplicated chain with 0 adjoined at the front. The family must be
/// totally ordered (NotTotallyOrdered otherwise); finite subsets attain their
/// bounds, so no other elements are added.
std::vector<PartialIsometry> complete_cover(std::span<const PartialIsometry> family,
                                            const Tolerances& tol = {});

struct PowerPIReport {
  bool is_ppi = false;
  std::size_t horizon = 0;                      ///< largest power checked
  std::optional<std::size_t> failure_power;     ///< first k with V^k not a partial isometry
  std::size_t dim_unitary = 0;
  std::map<std::size_t, std::size_t> shift_multiplicities;  ///< truncated-shift index → count
  std::vector<std::size_t> rank_sequence;       ///< rank(V^k), k = 0..horizon
};

/// Halmos–Wallen invariants of a power partial isometry on C^d: powers up to
/// 2d are checked, and truncated-shift multiplicities are read off the rank
/// sequence as m_k = r_{k−1} − 2 r_k + r_{k+1}.
PowerPIReport hw_invariants(const PartialIsometry& v, const Tolerances& tol = {});

}  // namespace isoposet
