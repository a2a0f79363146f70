#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "isoposet/chain.hpp"
#include "isoposet/linalg.hpp"
#include "isoposet/partial_isometry.hpp"

namespace isoposet {

/// Seeded source of complex Gaussian data.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform integer in [lo, hi].
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  Scalar complex_normal() { return {normal(), normal()}; }
  Vector gaussian_vector(std::size_t n);
  Matrix gaussian_matrix(std::size_t rows, std::size_t cols);
  /// Haar-distributed unitary (QR of a Gaussian matrix with phases fixed).
  Matrix unitary(std::size_t n);

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// W₁ · diag(1,…,1,0,…,0) · W₂* with r ones.
PartialIsometry random_partial_isometry(std::size_t d, std::size_t r, std::uint64_t seed);
PartialIsometry random_partial_isometry(std::size_t d, std::size_t r, Rng& rng);

enum class ChainMode { nest, violating, mixed };

ChainMode parse_chain_mode(const std::string& name);
std::string to_string(ChainMode mode);

/// Chain with n non-zero elements on C^d (n ≤ d):
///  - nest: orthogonal projections of random increasing ranks;
///  - violating: the first non-zero element maps its initial space onto an
///    orthogonal subspace, so ran(E) ⊄ ker(E)^⊥ and ran(E) ≠ H;
///  - mixed: restrictions of a random partial isometry to a random flag.
Chain random_chain(std::size_t d, std::size_t n, ChainMode mode, std::uint64_t seed);
Chain random_chain(std::size_t d, std::size_t n, ChainMode mode, Rng& rng);

}  // namespace isoposet
