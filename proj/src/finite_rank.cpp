#include "isoposet/finite_rank.hpp"

#include <optional>
#include <string>

#include "isoposet/errors.hpp"

namespace isoposet {

namespace {

bool annihilated_by(const PartialIsometry& v, const Vector& e, const Tolerances& tol) {
  return (v.initial_projection() * e).norm() <= tol.member * e.norm();
}

bool in_final_space(const PartialIsometry& v, const Vector& f, const Tolerances& tol) {
  return (f - v.final_projection() * f).norm() <= tol.member * f.norm();
}

// First chain index whose co-final projections make the value vectors
// linearly dependent, judged by the smallest singular value against the
// scale of the unprojected family.
std::optional<std::size_t> first_dependent(const Chain& chain, const Matrix& values,
                                           const Tolerances& tol) {
  const double scale = singular_values(values)(0);
  const auto d = static_cast<Eigen::Index>(chain.dim());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Matrix projected = (Matrix::Identity(d, d) - chain[k].final_projection()) * values;
    const Eigen::VectorXd s = singular_values(projected);
    if (s.size() < values.cols() || s(s.size() - 1) <= tol.rank * scale) return k;
  }
  return std::nullopt;
}

}  // namespace

const PartialIsometry& e_minus(const Chain& chain, std::size_t index) {
  if (index >= chain.size()) throw std::out_of_range("e_minus: index out of range");
  return chain[index == 0 ? 0 : index - 1];
}

bool rank_one_membership(const Vector& e, const Vector& f, const Chain& chain,
                         const Tolerances& tol) {
  const auto d = static_cast<Eigen::Index>(chain.dim());
  if (e.size() != d || f.size() != d) throw DimensionMismatch("rank_one_membership: vector length");
  if (e.norm() == 0.0 || f.norm() == 0.0) return true;
  if (annihilated_by(chain.top(), e, tol)) return true;
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (in_final_space(chain[k], f, tol) && annihilated_by(e_minus(chain, k), e, tol)) return true;
  }
  return false;
}

std::vector<RankOne> canonical_rank_representation(const Matrix& r, const Tolerances& tol) {
  require_square(r, "canonical_rank_representation");
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  std::vector<RankOne> out;
  if (s.size() == 0 || s(0) == 0.0) return out;
  for (Eigen::Index i = 0; i < s.size() && s(i) > tol.rank * s(0); ++i) {
    out.push_back({svd.matrixV().col(i), s(i) * svd.matrixU().col(i)});
  }
  return out;
}

Decomposition decompose_finite_rank(const Matrix& r, const Chain& chain, const Tolerances& tol) {
  const MembershipReport check = membership(r, chain, tol);
  if (!check.is_member) {
    throw NotAMember("decompose_finite_rank: operator violates chain element " +
                     std::to_string(check.worst_element));
  }
  const auto d = static_cast<Eigen::Index>(chain.dim());
  Decomposition out;
  Matrix remaining = r;
  for (;;) {
    const std::vector<RankOne> terms = canonical_rank_representation(remaining, tol);
    const auto n = static_cast<Eigen::Index>(terms.size());
    if (n == 0) break;
    Matrix values(d, n);
    for (Eigen::Index i = 0; i < n; ++i) values.col(i) = terms[static_cast<std::size_t>(i)].f;

    const std::optional<std::size_t> dep = first_dependent(chain, values, tol);
    if (!dep) {
      // Every argument vector lies in ker(∨chain): each term is a member.
      out.terms.insert(out.terms.end(), terms.begin(), terms.end());
      out.pivots.push_back(static_cast<std::size_t>(-1));
      break;
    }
    const PartialIsometry& u = chain[*dep];
    const Matrix& qu = u.final_projection();
    const Matrix projected = (Matrix::Identity(d, d) - qu) * values;
    Eigen::JacobiSVD<Matrix> svd(projected, Eigen::ComputeFullV);
    const Vector null = svd.matrixV().col(n - 1);

    Eigen::Index pivot = 0;
    null.cwiseAbs().maxCoeff(&pivot);
    // (I − Q_U) y_p = Σ_{i≠p} α_i (I − Q_U) y_i
    Vector alpha = -null / null(pivot);
    alpha(pivot) = 0.0;

    const auto& lead = terms[static_cast<std::size_t>(pivot)];
    const Vector z = qu * (lead.f - values * alpha);
    out.terms.push_back({lead.e, z});
    out.pivots.push_back(*dep);

    remaining = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == pivot) continue;
      const auto& t = terms[static_cast<std::size_t>(i)];
      remaining += rank_one(t.e + std::conj(alpha(i)) * lead.e, t.f);
    }
    const MembershipReport rest = membership(remaining, chain, tol);
    if (!rest.is_member) {
      throw Error("decompose_finite_rank: remainder of rank " + std::to_string(n - 1) +
                  " left the operator space at element " + std::to_string(rest.worst_element) +
                  " (residual " + std::to_string(rest.residuals[rest.worst_element]) + ")");
    }
  }

  Matrix sum = Matrix::Zero(d, d);
  for (const auto& t : out.terms) sum += t.matrix();
  out.residual = spectral_norm(r - sum);
  return out;
}

}  // namespace isoposet
