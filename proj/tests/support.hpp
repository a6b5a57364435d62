#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "ergomix/algebra.hpp"
#include "ergomix/superop.hpp"

namespace ergomix::support {

inline SuperOperator random_channel(const AlgebraShape& shape, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_kraus_channel(shape, rank, rng);
}

inline SuperOperator amplitude_damping(double gamma) {
  Eigen::MatrixXcd k0(2, 2), k1(2, 2);
  k0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
  k1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
  const std::vector<Eigen::MatrixXcd> ks{k0, k1};
  return from_kraus(AlgebraShape::single(2), ks);
}

// A fixed channel on Mat(2) + C that moves mass between the blocks.
inline SuperOperator two_block_channel() {
  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(3, 3);
  Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(3, 3);
  k0(0, 0) = std::sqrt(0.6);
  k0(1, 1) = std::sqrt(0.7);
  k0(2, 2) = std::sqrt(0.5);
  k1(2, 0) = std::sqrt(0.4);
  k1(0, 1) = std::sqrt(0.3);
  k1(1, 2) = std::sqrt(0.5);
  const std::vector<Eigen::MatrixXcd> ks{k0, k1};
  return from_kraus(AlgebraShape({{2, 1.0}, {1, 1.0}}), ks);
}

inline SuperOperator transposition(const AlgebraShape& shape) {
  return SuperOperator::from_action(
      shape,
      [&shape](const Element& x) {
        std::vector<Eigen::MatrixXcd> blocks;
        for (std::size_t i = 0; i < x.block_count(); ++i) blocks.push_back(x.block(i).transpose());
        return Element(shape, blocks);
      },
      TransferRecipe{}, false);
}

inline SuperOperator permutation_chain(int n, int shift) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, (i + shift) % n) = 1.0;
  return from_classical(p);
}

inline Eigen::MatrixXd random_row_stochastic(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(i, j) = u(rng);
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

inline double max_abs(const Element& x) {
  double m = 0.0;
  for (const auto& b : x.blocks()) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace ergomix::support
