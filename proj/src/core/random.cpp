#include "ergomix/random.hpp"

#include <cmath>

namespace ergomix {

Eigen::MatrixXcd ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = std::complex<double>(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

Eigen::VectorXcd random_unit_vector(int d, Rng& rng) {
  Eigen::VectorXcd v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

Eigen::MatrixXcd random_unitary(int d, Rng& rng) {
  const Eigen::MatrixXcd g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace ergomix
