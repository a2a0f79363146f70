#pragma once

#include <cstddef>
#include <vector>

#include "isoposet/chain.hpp"
#include "isoposet/linalg.hpp"

namespace isoposet {

/// e ⊗ f, the operator v ↦ <v, e> f.
struct RankOne {
  Vector e;
  Vector f;

  Matrix matrix() const { return rank_one(e, f); }
};

struct Decomposition {
  std::vector<RankOne> terms;
  double residual = 0.0;  ///< ‖R − Σ terms‖ (spectral)
  /// Chain index U split off at each step; empty entries (npos) mark steps
  /// where every term was emitted directly.
  std::vector<std::size_t> pivots;
};

/// The chain predecessor of E (the supremum of the elements strictly below
/// it); 0 for the bottom element.
const PartialIsometry& e_minus(const Chain& chain, std::size_t index);

/// Is e ⊗ f in the operator space? True iff e ∈ ker(∨chain), or some element E
/// has f ∈ ran(E) and e ∈ ker(E_−).
bool rank_one_membership(const Vector& e, const Vector& f, const Chain& chain,
                         const Tolerances& tol = {});

/// R = Σ e_i ⊗ f_i from the truncated SVD: e_i right singular vectors,
/// f_i = σ_i · left singular vectors. Both families are independent.
std::vector<RankOne> canonical_rank_representation(const Matrix& r, const Tolerances& tol = {});

/// Writes a member of rank n as a sum of n rank-one members. Throws
/// NotAMember if R is not in the operator space; rank 0 yields no terms.
Decomposition decompose_finite_rank(const Matrix& r, const Chain& chain, const Tolerances& tol = {});

}  // namespace isoposet
