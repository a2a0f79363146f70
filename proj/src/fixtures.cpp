#include "isoposet/fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <stdexcept>
#include <vector>

#include "isoposet/errors.hpp"

namespace isoposet {

namespace {

void require_dim(std::size_t d, const char* what) {
  if (d == 0 || d > kMaxDim) {
    throw std::invalid_argument(std::string(what) + ": dimension must lie in [1, 64]");
  }
}

// n distinct values from [lo, hi], increasing.
std::vector<std::size_t> sample_increasing(std::size_t n, std::size_t lo, std::size_t hi, Rng& rng) {
  std::vector<std::size_t> pool(hi - lo + 1);
  std::iota(pool.begin(), pool.end(), lo);
  // partial Fisher–Yates
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(pool[i], pool[rng.index(i, pool.size() - 1)]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

Vector Rng::gaussian_vector(std::size_t n) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal();
  return v;
}

Matrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = complex_normal();
  }
  return m;
}

Matrix Rng::unitary(std::size_t n) {
  const Matrix g = gaussian_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

PartialIsometry random_partial_isometry(std::size_t d, std::size_t r, std::uint64_t seed) {
  Rng rng(seed);
  return random_partial_isometry(d, r, rng);
}

PartialIsometry random_partial_isometry(std::size_t d, std::size_t r, Rng& rng) {
  require_dim(d, "random_partial_isometry");
  if (r > d) throw std::invalid_argument("random_partial_isometry: rank exceeds dimension");
  const Matrix w1 = rng.unitary(d);
  const Matrix w2 = rng.unitary(d);
  const auto k = static_cast<Eigen::Index>(r);
  return PartialIsometry::validate(w1.leftCols(k) * w2.leftCols(k).adjoint());
}

ChainMode parse_chain_mode(const std::string& name) {
  if (name == "nest") return ChainMode::nest;
  if (name == "violating") return ChainMode::violating;
  if (name == "mixed") return ChainMode::mixed;
  throw std::invalid_argument("unknown chain mode '" + name + "' (nest, violating, mixed)");
}

std::string to_string(ChainMode mode) {
  switch (mode) {
    case ChainMode::nest: return "nest";
    case ChainMode::violating: return "violating";
    case ChainMode::mixed: return "mixed";
  }
  return "?";
}

Chain random_chain(std::size_t d, std::size_t n, ChainMode mode, std::uint64_t seed) {
  Rng rng(seed);
  return random_chain(d, n, mode, rng);
}

Chain random_chain(std::size_t d, std::size_t n, ChainMode mode, Rng& rng) {
  require_dim(d, "random_chain");
  if (n > d) throw std::invalid_argument("random_chain: more elements than dimensions");
  if (mode == ChainMode::violating && (d < 2 || n == 0)) {
    throw std::invalid_argument("random_chain: a violating chain needs d >= 2 and n >= 1");
  }
  const Matrix a = rng.unitary(d);
  Matrix b;
  std::vector<std::size_t> ranks;

  switch (mode) {
    case ChainMode::nest:
      b = a;
      ranks = sample_increasing(n, 1, d, rng);
      break;
    case ChainMode::mixed:
      b = rng.unitary(d);
      ranks = sample_increasing(n, 1, d, rng);
      break;
    case ChainMode::violating: {
      const std::size_t r1 = rng.index(1, std::min(d / 2, d - n + 1));
      ranks = sample_increasing(n - 1, r1 + 1, d, rng);
      ranks.insert(ranks.begin(), r1);
      // Swap the first r1 columns with the next r1: E_1 maps span{a_0..}
      // onto an orthogonal subspace.
      b = a;
      const auto k = static_cast<Eigen::Index>(r1);
      b.leftCols(k) = a.middleCols(k, k);
      b.middleCols(k, k) = a.leftCols(k);
      break;
    }
  }

  std::vector<PartialIsometry> elements;
  for (std::size_t r : ranks) {
    const auto k = static_cast<Eigen::Index>(r);
    elements.push_back(PartialIsometry::validate(b.leftCols(k) * a.leftCols(k).adjoint()));
  }
  return build_chain(elements, d);
}

}  // namespace isoposet
