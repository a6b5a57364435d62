#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace ergomix {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; maps (master, stream) to an independent seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::MatrixXcd ginibre(int rows, int cols, Rng& rng);

/// Uniform (Haar) unit vector in C^d.
Eigen::VectorXcd random_unit_vector(int d, Rng& rng);

/// Haar-distributed unitary via phase-corrected QR of a Ginibre matrix.
Eigen::MatrixXcd random_unitary(int d, Rng& rng);

}  // namespace ergomix
