#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isoposet/linalg.hpp"
#include "isoposet/partial_isometry.hpp"

namespace isoposet {

/// A finite complete chain 0 = E_0 < E_1 < … < E_n of partial isometries,
/// with the nests of initial and final projections it induces.
class Chain {
public:
  std::size_t dim() const noexcept { return dim_; }
  /// Number of elements, including the bottom element 0.
  std::size_t size() const noexcept { return elements_.size(); }
  const PartialIsometry& operator[](std::size_t i) const { return elements_.at(i); }
  const std::vector<PartialIsometry>& elements() const noexcept { return elements_; }
  const PartialIsometry& top() const noexcept { return elements_.back(); }

  /// {0} ∪ {P_E} ∪ {I}, increasing and without repeats.
  const std::vector<Matrix>& nest_p() const noexcept { return nest_p_; }
  /// {0} ∪ {Q_E} ∪ {I}, increasing and without repeats.
  const std::vector<Matrix>& nest_q() const noexcept { return nest_q_; }

private:
  friend Chain build_chain(std::span<const PartialIsometry>, std::size_t, const Tolerances&);
  Chain(std::size_t dim, std::vector<PartialIsometry> elements);

  std::size_t dim_;
  std::vector<PartialIsometry> elements_;
  std::vector<Matrix> nest_p_;
  std::vector<Matrix> nest_q_;
};

/// Sorts, deduplicates and adjoins 0. Throws IncomparablePair carrying the
/// input indices of the first incomparable pair. `dim` is only consulted
/// when `family` is empty.
Chain build_chain(std::span<const PartialIsometry> family, std::size_t dim,
                  const Tolerances& tol = {});

struct MembershipReport {
  bool is_member = false;
  std::vector<double> residuals;  ///< ‖(I − Q_E) T P_E‖ per chain element
  std::size_t worst_element = 0;
  double threshold = 0.0;         ///< tol.member · (1 + ‖T‖)
};

/// Does T map the initial space of every chain element into its final space?
MembershipReport membership(const Matrix& t, const Chain& chain, const Tolerances& tol = {});

enum class ElementStatus { range_in_initial, range_full, violation };

std::string to_string(ElementStatus s);

struct AlgebraReport {
  bool is_algebra = false;
  bool is_nest_algebra = false;
  std::vector<ElementStatus> status;
  std::vector<bool> ppi;
  /// All elements are power partial isometries, or all but the top one and
  /// that one has full range.
  bool ppi_dichotomy = false;
};

/// Decides, element by element, whether ran(E) ⊆ ker(E)^⊥ or ran(E) = H.
AlgebraReport algebra_criterion(const Chain& chain, const Tolerances& tol = {});

/// Which branch of the construction produced a counterexample.
enum class CounterexampleCase {
  whole_chain_kernel,   ///< x lies in the kernel of every element
  above_certified,      ///< the kernel set of x has supremum strictly above E
  larger_element_kernel,  ///< some V > E has ran(E) ⊄ ker(V)^⊥
  complement_direction, ///< ran(E) ⊆ ker(V)^⊥ for every V > E
};

std::string to_string(CounterexampleCase c);

struct Counterexample {
  Vector x;  ///< unit vector, not orthogonal to ran(E)
  Vector y;  ///< unit vector, outside ran(E)
  CounterexampleCase which;
  std::size_t element;
  /// Realization of x ⊗ y: in the operator space, not in alg N_Q.
  Matrix operator_matrix() const { return rank_one(x, y); }
};

/// For an element violating the criterion, vectors x, y such that every chain
/// element V has x ∈ ker(V) or y ∈ ran(V). PreconditionViolated otherwise.
Counterexample counterexample_xy(const Chain& chain, std::size_t element, const Tolerances& tol = {});

/// One linear constraint (I − left) · T · right = 0, where `left` and `right`
/// are orthogonal projections.
struct ProjectionConstraint {
  Matrix left;
  Matrix right;
};

/// Frobenius-orthogonal projection onto the intersection of the constraint
/// subspaces by cyclic projections. Stops once every residual is at most
/// 1e-12 · (1 + ‖T‖); NonConvergence after `max_sweeps`.
Matrix cyclic_project(const Matrix& t, std::span<const ProjectionConstraint> constraints,
                      std::size_t max_sweeps = 100000);

/// Constraints whose intersection is the operator space of the chain. They
/// use the increments P_{E_k} − P_{E_{k−1}} on the right, which makes them
/// mutually commuting.
std::vector<ProjectionConstraint> operator_space_constraints(const Chain& chain);

/// Constraints whose intersection is the nest algebra of nest_q.
std::vector<ProjectionConstraint> nest_algebra_constraints(const Chain& chain);

/// Orthogonal projection onto the operator space of the chain.
Matrix project_onto_space(const Matrix& t, const Chain& chain, const Tolerances& tol = {});

/// Orthogonal projection onto alg N_Q.
Matrix project_onto_nest_algebra(const Matrix& s, const Chain& chain);

/// max over the nest Q of ‖(I − Q) S Q‖.
double nest_algebra_residual(const Matrix& s, const Chain& chain);

}  // namespace isoposet
