#include "isoposet/chain.hpp"

#include <algorithm>
#include <cmath>

#include "isoposet/errors.hpp"

namespace isoposet {

namespace {

std::vector<Matrix> nest_of(const std::vector<Matrix>& projections, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<Matrix> nest{Matrix::Zero(d, d)};
  for (const auto& p : projections) {
    if (!approx_equal(nest.back(), p)) nest.push_back(p);
  }
  const Matrix id = Matrix::Identity(d, d);
  if (!approx_equal(nest.back(), id)) nest.push_back(id);
  return nest;
}

std::vector<ProjectionConstraint> increment_constraints(const std::vector<Matrix>& left,
                                                        const std::vector<Matrix>& right) {
  std::vector<ProjectionConstraint> out;
  for (std::size_t k = 1; k < left.size(); ++k) {
    out.push_back({left[k], right[k] - right[k - 1]});
  }
  return out;
}

}  // namespace

Chain::Chain(std::size_t dim, std::vector<PartialIsometry> elements)
    : dim_(dim), elements_(std::move(elements)) {
  std::vector<Matrix> ps;
  std::vector<Matrix> qs;
  for (std::size_t i = 1; i < elements_.size(); ++i) {
    ps.push_back(elements_[i].initial_projection());
    qs.push_back(elements_[i].final_projection());
  }
  nest_p_ = nest_of(ps, dim_);
  nest_q_ = nest_of(qs, dim_);
}

Chain build_chain(std::span<const PartialIsometry> family, std::size_t dim, const Tolerances& tol) {
  if (family.empty()) {
    if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("build_chain: dimension out of range");
    return Chain(dim, {PartialIsometry::zero(dim)});
  }
  const std::size_t d = family.front().dim();
  for (const auto& e : family) {
    if (e.dim() != d) throw DimensionMismatch("build_chain: dimensions differ");
  }
  if (const auto bad = first_incomparable_pair(family, tol)) {
    throw IncomparablePair("build_chain: elements " + std::to_string(bad->first) + " and " +
                               std::to_string(bad->second) + " are incomparable",
                           bad->first, bad->second);
  }
  return Chain(d, complete_cover(family, tol));
}

MembershipReport membership(const Matrix& t, const Chain& chain, const Tolerances& tol) {
  require_square(t, "membership");
  if (static_cast<std::size_t>(t.rows()) != chain.dim()) {
    throw DimensionMismatch("membership: operator and chain dimensions differ");
  }
  const auto d = static_cast<Eigen::Index>(chain.dim());
  MembershipReport report;
  report.threshold = tol.member * (1.0 + spectral_norm(t));
  double worst = -1.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& e = chain[i];
    const double r = spectral_norm((Matrix::Identity(d, d) - e.final_projection()) * t *
                                   e.initial_projection());
    report.residuals.push_back(r);
    if (r > worst) {
      worst = r;
      report.worst_element = i;
    }
  }
  report.is_member = worst <= report.threshold;
  return report;
}

std::string to_string(ElementStatus s) {
  switch (s) {
    case ElementStatus::range_in_initial: return "range_in_initial";
    case ElementStatus::range_full: return "range_full";
    case ElementStatus::violation: return "violation";
  }
  return "?";
}

std::string to_string(CounterexampleCase c) {
  switch (c) {
    case CounterexampleCase::whole_chain_kernel: return "whole_chain_kernel";
    case CounterexampleCase::above_certified: return "above_certified";
    case CounterexampleCase::larger_element_kernel: return "larger_element_kernel";
    case CounterexampleCase::complement_direction: return "complement_direction";
  }
  return "?";
}

namespace {

ElementStatus classify(const PartialIsometry& e, const Tolerances& tol) {
  // Full range first: a unitary at the tolerance edge must not fall through
  // to the containment test.
  if (e.final_space().dim() == e.dim()) return ElementStatus::range_full;
  if (subspace_leq(e.final_space(), e.initial_space(), tol)) return ElementStatus::range_in_initial;
  return ElementStatus::violation;
}

}  // namespace

AlgebraReport algebra_criterion(const Chain& chain, const Tolerances& tol) {
  AlgebraReport report;
  report.is_algebra = true;
  for (const auto& e : chain.elements()) {
    const ElementStatus s = classify(e, tol);
    report.status.push_back(s);
    if (s == ElementStatus::violation) report.is_algebra = false;
    report.ppi.push_back(hw_invariants(e, tol).is_ppi);
  }
  const auto d = static_cast<Eigen::Index>(chain.dim());
  report.is_nest_algebra = membership(Matrix::Identity(d, d), chain, tol).is_member;

  const bool all_but_top =
      std::all_of(report.ppi.begin(), report.ppi.end() - 1, [](bool b) { return b; });
  report.ppi_dichotomy =
      all_but_top && (report.ppi.back() || report.status.back() == ElementStatus::range_full);
  return report;
}

namespace {

struct KernelDirection {
  Vector x;
  double strength;  ///< largest singular value of (I − P_V) on ran(E)
};

// Component in ker(V) of the range vector of E that sticks out the most.
KernelDirection kernel_component(const Subspace& range_e, const PartialIsometry& v) {
  const auto d = static_cast<Eigen::Index>(v.dim());
  const Matrix out = (Matrix::Identity(d, d) - v.initial_projection()) * range_e.basis();
  Eigen::JacobiSVD<Matrix> svd(out, Eigen::ComputeFullV);
  const Vector z = range_e.basis() * svd.matrixV().col(0);
  const Vector x = (Matrix::Identity(d, d) - v.initial_projection()) * z;
  return {x / x.norm(), svd.singularValues()(0)};
}

bool in_kernel(const PartialIsometry& v, const Vector& x, const Tolerances& tol) {
  return (v.initial_projection() * x).norm() <= tol.eq * x.norm();
}

// Index of the supremum of {V : x ∈ ker(V)}; the set is a down-set of the chain.
std::size_t kernel_set_top(const Chain& chain, const Vector& x, const Tolerances& tol) {
  std::size_t top = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (in_kernel(chain[i], x, tol)) top = i;
  }
  return top;
}

// Unit vector with its largest entry real and positive.
Vector canonical_phase(const Vector& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return v * (std::abs(v(k)) / v(k)) / v.norm();
}

Vector first_basis_vector(const Subspace& s) {
  if (s.is_zero()) throw Error("counterexample_xy: expected a non-zero subspace");
  return s.basis().col(0);
}

// y outside ran(E): either orthogonal to ran(E) altogether, or in
// ran(W) ⊖ ran(E) for the supremum W of the kernel set of x.
Vector choose_y(const Chain& chain, std::size_t kernel_top, const Subspace& range_e,
                CounterexampleCase& which, CounterexampleCase above_case,
                const Tolerances& tol) {
  if (kernel_top + 1 == chain.size()) {
    which = CounterexampleCase::whole_chain_kernel;
    return first_basis_vector(range_e.orthogonal_complement(tol));
  }
  which = above_case;
  return first_basis_vector(relative_complement(chain[kernel_top].final_space(), range_e, tol));
}

}  // namespace

Counterexample counterexample_xy(const Chain& chain, std::size_t element, const Tolerances& tol) {
  if (element >= chain.size()) throw std::out_of_range("counterexample_xy: element index");
  const PartialIsometry& e = chain[element];
  if (classify(e, tol) != ElementStatus::violation) {
    throw PreconditionViolated("counterexample_xy: element " + std::to_string(element) +
                               " satisfies ran(E) ⊆ ker(E)^⊥ or ran(E) = H");
  }
  const Subspace& range_e = e.final_space();
  Counterexample out;
  out.element = element;

  out.x = kernel_component(range_e, e).x;
  const std::size_t top = kernel_set_top(chain, out.x, tol);
  if (top + 1 == chain.size() || top > element) {
    out.y = choose_y(chain, top, range_e, out.which, CounterexampleCase::above_certified, tol);
  } else {
    // E is the supremum of the kernel set: x ∈ ker(V) iff V ≤ E.
    std::size_t larger = element + 1;
    while (larger < chain.size() && subspace_leq(range_e, chain[larger].initial_space(), tol)) {
      ++larger;
    }
    if (larger < chain.size()) {
      out.x = kernel_component(range_e, chain[larger]).x;
      const std::size_t top2 = kernel_set_top(chain, out.x, tol);
      out.y = choose_y(chain, top2, range_e, out.which, CounterexampleCase::larger_element_kernel,
                       tol);
      if (out.which == CounterexampleCase::whole_chain_kernel) {
        out.which = CounterexampleCase::larger_element_kernel;
      }
    } else {
      // ker(E)^⊥ ⊊ ker(E_+)^⊥; every V > E is isometric there and agrees
      // with E_+ on the extra directions.
      const PartialIsometry& next = chain[element + 1];
      const Subspace extra = relative_complement(next.initial_space(), e.initial_space(), tol);
      out.y = next.matrix() * first_basis_vector(extra);
      out.which = CounterexampleCase::complement_direction;
    }
  }
  out.x = canonical_phase(out.x);
  out.y = canonical_phase(out.y);

  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!in_kernel(chain[i], out.x, tol) && !chain[i].final_space().contains(out.y, tol)) {
      throw Error("counterexample_xy: construction failed at element " + std::to_string(i) +
                  " (case " + to_string(out.which) + "); fixture is tolerance-sensitive");
    }
  }
  return out;
}

Matrix cyclic_project(const Matrix& t, std::span<const ProjectionConstraint> constraints,
                      std::size_t max_sweeps) {
  const auto d = static_cast<Eigen::Index>(t.rows());
  const Matrix id = Matrix::Identity(d, d);
  std::vector<Matrix> complements;
  complements.reserve(constraints.size());
  for (const auto& c : constraints) complements.push_back(id - c.left);

  Matrix current = t;
  const auto worst_residual = [&] {
    double worst = 0.0;
    for (std::size_t k = 0; k < constraints.size(); ++k) {
      worst = std::max(worst, (complements[k] * current * constraints[k].right).norm());
    }
    return worst;
  };
  for (std::size_t sweep = 0; sweep <= max_sweeps; ++sweep) {
    if (worst_residual() <= 1e-12 * (1.0 + current.norm())) return current;
    if (sweep == max_sweeps) break;
    for (std::size_t k = 0; k < constraints.size(); ++k) {
      current -= complements[k] * current * constraints[k].right;
    }
  }
  throw NonConvergence("cyclic_project: no convergence after " + std::to_string(max_sweeps) +
                       " sweeps");
}

std::vector<ProjectionConstraint> operator_space_constraints(const Chain& chain) {
  std::vector<Matrix> ps;
  std::vector<Matrix> qs;
  for (const auto& e : chain.elements()) {
    ps.push_back(e.initial_projection());
    qs.push_back(e.final_projection());
  }
  return increment_constraints(qs, ps);
}

std::vector<ProjectionConstraint> nest_algebra_constraints(const Chain& chain) {
  return increment_constraints(chain.nest_q(), chain.nest_q());
}

Matrix project_onto_space(const Matrix& t, const Chain& chain, const Tolerances& tol) {
  require_square(t, "project_onto_space");
  if (static_cast<std::size_t>(t.rows()) != chain.dim()) {
    throw DimensionMismatch("project_onto_space: operator and chain dimensions differ");
  }
  const auto constraints = operator_space_constraints(chain);
  Matrix out = cyclic_project(t, constraints);
  if (!membership(out, chain, tol).is_member) {
    throw NonConvergence("project_onto_space: projected operator fails membership");
  }
  return out;
}

Matrix project_onto_nest_algebra(const Matrix& s, const Chain& chain) {
  require_square(s, "project_onto_nest_algebra");
  const auto constraints = nest_algebra_constraints(chain);
  return cyclic_project(s, constraints);
}

double nest_algebra_residual(const Matrix& s, const Chain& chain) {
  const auto d = static_cast<Eigen::Index>(chain.dim());
  double worst = 0.0;
  for (const auto& q : chain.nest_q()) {
    worst = std::max(worst, spectral_norm((Matrix::Identity(d, d) - q) * s * q));
  }
  return worst;
}

}  // namespace isoposet
