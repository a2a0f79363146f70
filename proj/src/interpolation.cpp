#include "isoposet/interpolation.hpp"

#include <cmath>
#include <string>

#include "isoposet/errors.hpp"

namespace isoposet {

namespace {

// Ratio bookkeeping shared by every supremum: 0/0 contributes nothing,
// nonzero/0 is infinite; the first index attaining the maximum wins.
struct RatioMax {
  BoundData data;
  bool seen = false;

  void add(double num, double den, std::size_t index) {
    double ratio = 0.0;
    if (den == 0.0) {
      ratio = num == 0.0 ? 0.0 : kInfinity;
    } else {
      ratio = num / den;
    }
    if (!seen || ratio > data.k) {
      data.k = ratio;
      data.certificate = index;
      seen = true;
    }
  }
};

double chop(double value, double scale, const Tolerances& tol) {
  return value <= tol.rank * scale ? 0.0 : value;
}

void require_length(const Vector& v, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(v.size()) != dim) {
    throw DimensionMismatch(std::string(what) + ": vector length does not match dimension");
  }
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

// Σ_{i≤j} a_ij · x_j ⊗ y_i, the operator v ↦ Σ a_ij <v, x_j> y_i.
Matrix assemble(const Eigen::MatrixXd& a, const std::vector<Vector>& x_pieces,
                const std::vector<Vector>& y_pieces, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix t = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      if (a(i, j) == 0.0) continue;
      t += a(i, j) * rank_one(x_pieces[static_cast<std::size_t>(j)],
                              y_pieces[static_cast<std::size_t>(i)]);
    }
  }
  return t;
}

// Pieces, their norms and the triangular solution; `a` is filled from `b`
// with the zero guard.
void solve_workspace(InterpolationWorkspace& ws, double x_scale, double y_scale,
                     const Tolerances& tol, std::size_t& rows_built) {
  const auto n = static_cast<Eigen::Index>(ws.x_pieces.size());
  ws.x_norms.resize(n);
  ws.y_norms.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ws.x_norms(i) = chop(ws.x_pieces[static_cast<std::size_t>(i)].norm(), x_scale, tol);
    ws.y_norms(i) = chop(ws.y_pieces[static_cast<std::size_t>(i)].norm(), y_scale, tol);
  }
  const Matrix b = triangular_interpolate(ws.x_norms.cast<Scalar>(), ws.y_norms.cast<Scalar>(), {},
                                          {}, tol);
  ws.b = b.real();
  ws.a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (ws.b(i, j) != 0.0) ws.a(i, j) = ws.b(i, j) / (ws.x_norms(j) * ws.y_norms(i));
    }
  }
  rows_built = static_cast<std::size_t>(n);
}

}  // namespace

BoundData tail_constant(const Vector& x, const Vector& y, const Tolerances& tol) {
  if (x.size() != y.size() || x.size() == 0) {
    throw DimensionMismatch("tail_constant: vectors must have equal, non-zero length");
  }
  const auto n = x.size();
  const double x_scale = x.norm();
  const double y_scale = y.norm();
  RatioMax best;
  double x_tail = 0.0;
  double y_tail = 0.0;
  std::vector<std::pair<double, double>> tails(static_cast<std::size_t>(n));
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    x_tail += std::norm(x(r));
    y_tail += std::norm(y(r));
    tails[static_cast<std::size_t>(r)] = {std::sqrt(y_tail), std::sqrt(x_tail)};
  }
  for (std::size_t r = 0; r < tails.size(); ++r) {
    best.add(chop(tails[r].first, y_scale, tol), chop(tails[r].second, x_scale, tol), r);
  }
  return best.data;
}

Matrix triangular_interpolate(const Vector& x, const Vector& y, const std::set<std::size_t>& zero_rows,
                              const std::set<std::size_t>& zero_cols, const Tolerances& tol) {
  const BoundData bound = tail_constant(x, y, tol);
  if (!bound.finite()) {
    throw Infeasible("triangular_interpolate: tail constant is infinite (index " +
                     std::to_string(bound.certificate) + ")");
  }
  const auto n = x.size();
  const double x_scale = x.norm();
  const double y_scale = y.norm();

  // Working copies with negligible entries set to exact zero.
  Vector xs = x;
  Vector ys = y;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(xs(i)) <= tol.rank * x_scale) xs(i) = 0.0;
    if (std::abs(ys(i)) <= tol.rank * y_scale) ys(i) = 0.0;
  }
  for (std::size_t p : zero_rows) {
    if (p >= static_cast<std::size_t>(n) || ys(static_cast<Eigen::Index>(p)) != 0.0) {
      throw BadZeroRequest("triangular_interpolate: row " + std::to_string(p) +
                           " cannot be zero (y_p ≠ 0 or out of range)");
    }
  }
  for (std::size_t q : zero_cols) {
    if (q >= static_cast<std::size_t>(n) || xs(static_cast<Eigen::Index>(q)) != 0.0) {
      throw BadZeroRequest("triangular_interpolate: column " + std::to_string(q) +
                           " cannot be zero (x_q ≠ 0 or out of range)");
    }
  }

  // Rows are filled bottom-up. With the trailing block A' already a
  // contraction (scaled by K) satisfying A' x_{i+1..} = y_{i+1..}, the new
  // row r must satisfy r x_{i..} = y_i and r* r ≤ D = K² I − (0 ⊕ A'* A').
  // The choice r = c · x_{i..}* D meets both exactly when |y_i|² ≤ x* D x,
  // and x* D x = K² ‖x_{i..}‖² − ‖y_{i+1..}‖², which is the tail condition.
  const double k2 = bound.k * bound.k;
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (ys(i) == Scalar(0.0)) continue;
    const Eigen::Index m = n - i;
    const auto tail = xs.tail(m);
    Matrix dmat = k2 * Matrix::Identity(m, m);
    if (m > 1) {
      const auto lower = a.bottomRightCorner(m - 1, m - 1);
      dmat.bottomRightCorner(m - 1, m - 1) -= lower.adjoint() * lower;
    }
    const Vector dx = dmat * tail;
    const double g = std::real(tail.dot(dx));
    if (!(g > 0.0)) {
      throw Infeasible("triangular_interpolate: degenerate row " + std::to_string(i));
    }
    const Scalar c = ys(i) / g;
    a.row(i).tail(m) = c * dx.adjoint();
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (xs(j) == Scalar(0.0)) a.col(j).setZero();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ys(i) == Scalar(0.0)) a.row(i).setZero();
  }
  return a;
}

BoundData chain_bound(const Vector& x, const Vector& y, const Chain& chain, const Tolerances& tol) {
  require_length(x, chain.dim(), "chain_bound");
  require_length(y, chain.dim(), "chain_bound");
  const double x_scale = x.norm();
  const double y_scale = y.norm();
  RatioMax best;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const double num = (y - chain[i].final_projection() * y).norm();
    const double den = (x - chain[i].initial_projection() * x).norm();
    best.add(chop(num, y_scale, tol), chop(den, x_scale, tol), i);
  }
  return best.data;
}

BoundData adjoint_bound(const Vector& x, const Vector& y, const Chain& chain,
                        const Tolerances& tol) {
  require_length(x, chain.dim(), "adjoint_bound");
  require_length(y, chain.dim(), "adjoint_bound");
  const double x_scale = x.norm();
  const double y_scale = y.norm();
  RatioMax best;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const double num = (chain[i].initial_projection() * y).norm();
    const double den = (chain[i].final_projection() * x).norm();
    best.add(chop(num, y_scale, tol), chop(den, x_scale, tol), i);
  }
  return best.data;
}

InterpolationSolution chain_interpolate(const Vector& x, const Vector& y, const Chain& chain,
                                        const Tolerances& tol) {
  require_length(x, chain.dim(), "chain_interpolate");
  require_length(y, chain.dim(), "chain_interpolate");
  const PartialIsometry& top = chain.top();
  if (!top.initial_space().contains(x, tol)) {
    throw HypothesisViolated("chain_interpolate: x lies in no initial space of the chain");
  }
  if (!top.final_space().contains(y, tol)) {
    throw HypothesisViolated("chain_interpolate: y lies in no final space of the chain");
  }
  const BoundData bound = chain_bound(x, y, chain, tol);
  if (!bound.finite()) {
    throw Infeasible("chain_interpolate: bound is infinite at chain element " +
                     std::to_string(bound.certificate));
  }

  InterpolationSolution sol;
  sol.k = bound.k;
  sol.certificate = bound.certificate;
  auto& ws = sol.workspace;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    ws.x_pieces.push_back(chain[i].initial_projection() * x - chain[i - 1].initial_projection() * x);
    ws.y_pieces.push_back(chain[i].final_projection() * y - chain[i - 1].final_projection() * y);
  }
  const auto d = static_cast<Eigen::Index>(chain.dim());
  if (ws.x_pieces.empty()) {
    sol.t = Matrix::Zero(d, d);
    return sol;
  }
  solve_workspace(ws, x.norm(), y.norm(), tol, sol.iterations);
  sol.t = assemble(ws.a, ws.x_pieces, ws.y_pieces, chain.dim());
  sol.achieved_norm = spectral_norm(sol.t);
  return sol;
}

InterpolationSolution chain_interpolate_adjoint(const Vector& x, const Vector& y,
                                                const Chain& chain, const Tolerances& tol) {
  require_length(x, chain.dim(), "chain_interpolate_adjoint");
  require_length(y, chain.dim(), "chain_interpolate_adjoint");
  if (!chain.top().initial_space().contains(y, tol)) {
    throw HypothesisViolated("chain_interpolate_adjoint: y lies in no initial space of the chain");
  }
  const BoundData bound = adjoint_bound(x, y, chain, tol);
  if (!bound.finite()) {
    throw Infeasible("chain_interpolate_adjoint: bound is infinite at chain element " +
                     std::to_string(bound.certificate));
  }

  InterpolationSolution sol;
  sol.k = bound.k;
  sol.certificate = bound.certificate;
  auto& ws = sol.workspace;
  // Pieces run from the top of the chain downwards.
  for (std::size_t i = chain.size() - 1; i >= 1; --i) {
    ws.x_pieces.push_back(chain[i].final_projection() * x - chain[i - 1].final_projection() * x);
    ws.y_pieces.push_back(chain[i].initial_projection() * y - chain[i - 1].initial_projection() * y);
  }
  const auto d = static_cast<Eigen::Index>(chain.dim());
  if (ws.x_pieces.empty()) {
    sol.t = Matrix::Zero(d, d);
    return sol;
  }
  solve_workspace(ws, x.norm(), y.norm(), tol, sol.iterations);
  // T = Σ_{i≤j} conj(a_ij) · y_i ⊗ x_j, i.e. the adjoint of Σ a_ij · x_j ⊗ y_i.
  sol.t = assemble(ws.a, ws.x_pieces, ws.y_pieces, chain.dim()).adjoint();
  sol.achieved_norm = spectral_norm(sol.t);
  return sol;
}

}  // namespace isoposet
