#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "isoposet/chain.hpp"
#include "isoposet/errors.hpp"
#include "isoposet/fixtures.hpp"
#include "support.hpp"

using namespace isoposet;

namespace {

Matrix unit(Eigen::Index d, Eigen::Index to, Eigen::Index from) {
  Matrix m = Matrix::Zero(d, d);
  m(to, from) = 1.0;
  return m;
}

Chain chain_of(std::initializer_list<Matrix> ms, std::size_t d) {
  std::vector<PartialIsometry> f;
  for (const auto& m : ms) f.push_back(PartialIsometry::validate(m));
  return build_chain(f, d);
}

Chain ex1_chain() { return chain_of({unit(2, 1, 0)}, 2); }

Matrix swap2() {
  Matrix t(2, 2);
  t << 0, 1, 1, 0;
  return t;
}

Vector e(Eigen::Index d, Eigen::Index i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

// V = U·P_k-chain where the P_k are nested coordinate projections and U is
// block unitary with respect to them: P_E = Q_E but E is not a projection.
Chain block_unitary_chain(std::size_t d, const std::vector<std::size_t>& ranks, Rng& rng) {
  const Matrix basis = rng.unitary(d);
  Matrix u = Matrix::Zero(d, d);
  std::size_t lo = 0;
  for (std::size_t r : ranks) {
    const auto k = static_cast<Eigen::Index>(r - lo);
    u.block(lo, lo, k, k) = rng.unitary(r - lo);
    lo = r;
  }
  if (lo < d) {
    const auto k = static_cast<Eigen::Index>(d - lo);
    u.block(lo, lo, k, k) = rng.unitary(d - lo);
  }
  std::vector<PartialIsometry> f;
  for (std::size_t r : ranks) {
    Matrix p = Matrix::Zero(d, d);
    p.topLeftCorner(r, r).setIdentity();
    f.push_back(PartialIsometry::validate(basis * u * p * basis.adjoint()));
  }
  return build_chain(f, d);
}

}  // namespace

TEST(BuildChain, Ex1) {
  const Chain c = ex1_chain();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].rank(), 0u);
  ASSERT_EQ(c.nest_p().size(), 3u);
  EXPECT_TRUE(approx_equal(c.nest_p()[1], unit(2, 0, 0)));
  EXPECT_TRUE(approx_equal(c.nest_q()[1], unit(2, 1, 1)));
  EXPECT_TRUE(approx_equal(c.nest_p()[2], Matrix::Identity(2, 2)));
}

TEST(BuildChain, EmptyFamily) {
  const Chain c = build_chain({}, 3);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(c.nest_p().size(), 2u);
  EXPECT_EQ(c.nest_q().size(), 2u);
}

TEST(BuildChain, IncomparablePair) {
  std::vector<PartialIsometry> f{PartialIsometry::validate(unit(2, 0, 0)),
                                 PartialIsometry::validate(unit(2, 1, 0))};
  EXPECT_THROW(build_chain(f, 2), IncomparablePair);
}

TEST(BuildChain, RandomModesAreStrictlyIncreasing) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (ChainMode mode : {ChainMode::nest, ChainMode::violating, ChainMode::mixed}) {
      const std::size_t d = 2 + seed % 6;
      const Chain c = random_chain(d, 1 + seed % (d - 1), mode, seed);
      for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        EXPECT_TRUE(hm_leq(c[i], c[i + 1]));
        EXPECT_FALSE(hm_equal(c[i], c[i + 1]));
      }
      // every element is a member of its own operator space
      for (const auto& el : c.elements()) EXPECT_TRUE(membership(el.matrix(), c).is_member);
    }
  }
}

TEST(RandomChain, ModeGuarantees) {
  const Chain n = random_chain(2, 1, ChainMode::nest, 4);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_TRUE(approx_equal(n[1].initial_projection(), n[1].final_projection()));
  EXPECT_TRUE(approx_equal(n[1].matrix(), n[1].initial_projection()));

  // Violating on C² is unitarily equivalent to the shift: V² = 0, rank 1.
  const Chain v = random_chain(2, 1, ChainMode::violating, 4);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1].rank(), 1u);
  EXPECT_LE((v[1].matrix() * v[1].matrix()).norm(), 1e-12);
  EXPECT_FALSE(algebra_criterion(v).is_algebra);

  EXPECT_NO_THROW(random_chain(4, 2, ChainMode::mixed, 4));
  EXPECT_THROW(random_chain(1, 1, ChainMode::violating, 4), std::invalid_argument);
  EXPECT_THROW(random_chain(3, 4, ChainMode::nest, 4), std::invalid_argument);
}

TEST(Membership, Ex1) {
  const Chain c = ex1_chain();
  EXPECT_TRUE(membership(swap2(), c).is_member);
  const Matrix tv = swap2() * c[1].matrix();
  const MembershipReport r = membership(tv, c);
  EXPECT_FALSE(r.is_member);
  EXPECT_EQ(r.worst_element, 1u);
  EXPECT_NEAR(r.residuals[1], 1.0, 1e-12);
  EXPECT_TRUE(membership(Matrix::Zero(2, 2), c).is_member);
}

TEST(Membership, AgreesWithDirectResidual) {
  Rng rng(21);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Chain c = random_chain(5, 3, ChainMode::mixed, seed);
    for (int k = 0; k < 10; ++k) {
      const Matrix member = project_onto_space(rng.gaussian_matrix(5, 5), c);
      EXPECT_LE(oracle::membership_residual(member, c), 1e-9 * (1 + member.norm()));
      const Matrix other = rng.gaussian_matrix(5, 5);
      EXPECT_EQ(membership(other, c).is_member,
                oracle::membership_residual(other, c) <= 1e-9 * (1 + oracle::norm2(other)));
    }
  }
}

TEST(Membership, CoverInvariance) {
  Rng rng(22);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Chain c = random_chain(5, 3, ChainMode::mixed, seed);
    std::vector<PartialIsometry> shuffled(c.elements().rbegin(), c.elements().rend() - 1);
    const Chain again = build_chain(shuffled, 5);
    for (int k = 0; k < 20; ++k) {
      const Matrix t = k % 2 ? rng.gaussian_matrix(5, 5) : project_onto_space(rng.gaussian_matrix(5, 5), c);
      EXPECT_EQ(membership(t, c).is_member, membership(t, again).is_member);
    }
  }
}

TEST(Algebra, ProjectionNest) {
  const Chain c = chain_of({unit(2, 0, 0), Matrix::Identity(2, 2)}, 2);
  const AlgebraReport r = algebra_criterion(c);
  EXPECT_TRUE(r.is_algebra);
  EXPECT_TRUE(r.is_nest_algebra);
  EXPECT_TRUE(r.ppi_dichotomy);
}

TEST(Algebra, Ex1Violates) {
  const AlgebraReport r = algebra_criterion(ex1_chain());
  EXPECT_FALSE(r.is_algebra);
  EXPECT_FALSE(r.is_nest_algebra);
  EXPECT_EQ(r.status[1], ElementStatus::violation);
}

TEST(Algebra, UnitaryUsesFullRangeBranch) {
  const Matrix u = Rng(23).unitary(3);
  const AlgebraReport r = algebra_criterion(chain_of({u}, 3));
  EXPECT_TRUE(r.is_algebra);
  EXPECT_EQ(r.status[1], ElementStatus::range_full);
}

TEST(Algebra, BlockUnitaryChainsPass) {
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const Chain c = block_unitary_chain(6, {2, 3, 5}, rng);
    const AlgebraReport r = algebra_criterion(c);
    EXPECT_TRUE(r.is_algebra);
    EXPECT_TRUE(r.is_nest_algebra);
    for (const auto& el : c.elements()) {
      EXPECT_LE(spectral_norm(el.initial_projection() - el.final_projection()), 1e-8);
    }
    EXPECT_TRUE(r.ppi_dichotomy);
  }
}

TEST(Algebra, ProductsStayInPassingSpaces) {
  Rng rng(25);
  for (int trial = 0; trial < 5; ++trial) {
    const Chain c = block_unitary_chain(5, {1, 3}, rng);
    for (int k = 0; k < 10; ++k) {
      const Matrix a = project_onto_space(rng.gaussian_matrix(5, 5), c);
      const Matrix b = project_onto_space(rng.gaussian_matrix(5, 5), c);
      EXPECT_LE(oracle::membership_residual(a * b, c), 1e-8 * (1 + a.norm() * b.norm()));
      const Matrix s = project_onto_nest_algebra(rng.gaussian_matrix(5, 5), c);
      EXPECT_LE(nest_algebra_residual(s, c), 1e-10);
      EXPECT_LE(oracle::membership_residual(s * a, c), 1e-8 * (1 + s.norm() * a.norm()));
    }
  }
}

TEST(Counterexample, Ex1) {
  const Chain c = ex1_chain();
  const Counterexample ce = counterexample_xy(c, 1);
  EXPECT_LE((ce.x - e(2, 1)).norm(), 1e-12);
  EXPECT_LE((ce.y - e(2, 0)).norm(), 1e-12);
  EXPECT_EQ(ce.which, CounterexampleCase::whole_chain_kernel);
  const Matrix t = ce.operator_matrix();
  EXPECT_TRUE(membership(t, c).is_member);
  const Matrix& q = c[1].final_projection();
  EXPECT_NEAR(spectral_norm((Matrix::Identity(2, 2) - q) * t * q), 1.0, 1e-12);
}

TEST(Counterexample, ThreeDimensionalExample) {
  // V: e1 ↦ e3, e2 ↦ e1
  const Matrix v = unit(3, 2, 0) + unit(3, 0, 1);
  const Chain c = chain_of({v}, 3);
  ASSERT_EQ(algebra_criterion(c).status[1], ElementStatus::violation);
  const Counterexample ce = counterexample_xy(c, 1);
  const Matrix t = ce.operator_matrix();
  EXPECT_TRUE(membership(t, c).is_member);
  const Matrix& q = c[1].final_projection();
  EXPECT_GT(spectral_norm((Matrix::Identity(3, 3) - q) * t * q), 0.1);
  EXPECT_GT(std::abs(inner(ce.x, e(3, 0))) + std::abs(inner(ce.x, e(3, 2))), 0.1);  // not ⊥ ran(V)
  EXPECT_GT(c[1].final_space().distance(ce.y), 0.1);
}

TEST(Counterexample, PassingChainHasNone) {
  const Chain c = chain_of({unit(3, 0, 0), Matrix::Identity(3, 3)}, 3);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_THROW(counterexample_xy(c, i), PreconditionViolated);
}

TEST(Counterexample, RandomViolatingChains) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t d = 2 + seed % 7;
    const std::size_t n = 1 + seed % (d - 1);
    const Chain c = random_chain(d, n, ChainMode::violating, seed);
    const AlgebraReport r = algebra_criterion(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (r.status[i] != ElementStatus::violation) continue;
      const Counterexample ce = counterexample_xy(c, i);
      const Matrix t = ce.operator_matrix();
      EXPECT_TRUE(membership(t, c).is_member) << "seed " << seed << " element " << i;
      const Matrix& q = c[i].final_projection();
      const auto dd = static_cast<Eigen::Index>(d);
      EXPECT_GT(spectral_norm((Matrix::Identity(dd, dd) - q) * t * q), 1e-6);
    }
  }
}

TEST(Counterexample, MixedChainsExerciseAllCases) {
  std::set<CounterexampleCase> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t d = 3 + seed % 5;
    const Chain c = random_chain(d, 1 + seed % (d - 1), ChainMode::mixed, seed);
    const AlgebraReport r = algebra_criterion(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (r.status[i] != ElementStatus::violation) continue;
      const Counterexample ce = counterexample_xy(c, i);
      seen.insert(ce.which);
      EXPECT_TRUE(membership(ce.operator_matrix(), c).is_member);
      const Matrix& q = c[i].final_projection();
      const auto dd = static_cast<Eigen::Index>(d);
      EXPECT_GT(spectral_norm((Matrix::Identity(dd, dd) - q) * ce.operator_matrix() * q), 1e-6);
    }
  }
  EXPECT_GE(seen.size(), 2u);
}

TEST(Projection, SpecExamples) {
  const Chain nest = chain_of({unit(2, 0, 0), Matrix::Identity(2, 2)}, 2);
  const Matrix lower = unit(2, 1, 0);
  EXPECT_LE(project_onto_space(lower, nest).norm(), 1e-12);
  EXPECT_LE(project_onto_space(Matrix::Zero(2, 2), nest).norm(), 1e-15);
  const Matrix upper = unit(2, 0, 1) + unit(2, 0, 0);
  EXPECT_LE((project_onto_space(upper, nest) - upper).norm(), 1e-12);
}

TEST(Projection, MatchesNaiveCyclicProjection) {
  Rng rng(26);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Chain c = random_chain(4, 2 + seed % 2, ChainMode::mixed, seed);
    const Matrix t = rng.gaussian_matrix(4, 4);
    const Matrix fast = project_onto_space(t, c);
    const Matrix slow = oracle::naive_projection(t, c);
    EXPECT_LE((fast - slow).norm(), 1e-8 * t.norm()) << "seed " << seed;
    // orthogonality of the residual to the space
    const Matrix member = project_onto_space(rng.gaussian_matrix(4, 4), c);
    EXPECT_LE(std::abs((t - fast).cwiseProduct(member.conjugate()).sum()), 1e-9 * t.norm() * member.norm());
  }
}

TEST(Projection, NonConvergenceIsReported) {
  std::vector<ProjectionConstraint> cs{{Matrix::Zero(2, 2), Matrix::Identity(2, 2)}};
  EXPECT_NO_THROW(cyclic_project(Matrix::Identity(2, 2), cs, 1));
  // Two non-commuting constraints need many sweeps.
  Matrix p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  std::vector<ProjectionConstraint> skew{{Matrix::Zero(2, 2), Matrix(unit(2, 0, 0))}, {Matrix::Zero(2, 2), p}};
  EXPECT_THROW(cyclic_project(Matrix::Identity(2, 2) + Matrix::Ones(2, 2), skew, 0), NonConvergence);
}
