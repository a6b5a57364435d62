#include "ergomix/basis.hpp"

#include <cmath>

#include "ergomix/errors.hpp"

namespace ergomix {

namespace {

// Within-block coordinate layout: [identity, sym pairs, antisym pairs, diag l=1..d-1].
int pair_count(int d) { return d * (d - 1) / 2; }

template <typename Vec>
void block_to_coords(const Eigen::MatrixXcd& x, double weight, Vec& out, int offset) {
  using Scalar = typename Vec::Scalar;
  const int d = static_cast<int>(x.rows());
  const double sw = std::sqrt(weight);
  const double r2 = std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  auto put = [&](int k, Complex v) {
    if constexpr (std::is_same_v<Scalar, double>) {
      out(offset + k) = v.real();
    } else {
      out(offset + k) = v;
    }
  };
  put(0, sw * x.trace() / std::sqrt(static_cast<double>(d)));
  const int pc = pair_count(d);
  int p = 0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k, ++p) {
      put(1 + p, sw * (x(k, j) + x(j, k)) / r2);
      put(1 + pc + p, sw * (-i * x(k, j) + i * x(j, k)) / r2);
    }
  }
  for (int l = 1; l < d; ++l) {
    Complex s = 0.0;
    for (int m = 0; m < l; ++m) s += x(m, m);
    s -= static_cast<double>(l) * x(l, l);
    put(1 + 2 * pc + (l - 1), sw * s / std::sqrt(static_cast<double>(l * (l + 1))));
  }
}

template <typename Vec>
Eigen::MatrixXcd coords_to_block(const Vec& c, int offset, int d, double weight) {
  const double isw = 1.0 / std::sqrt(weight);
  const double r2 = std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(d, d);
  const Complex c0 = c(offset);
  x.diagonal().setConstant(c0 * isw / std::sqrt(static_cast<double>(d)));
  const int pc = pair_count(d);
  int p = 0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k, ++p) {
      const Complex s = c(offset + 1 + p);
      const Complex a = c(offset + 1 + pc + p);
      x(j, k) += (s - i * a) * isw / r2;
      x(k, j) += (s + i * a) * isw / r2;
    }
  }
  for (int l = 1; l < d; ++l) {
    const Complex v = c(offset + 1 + 2 * pc + (l - 1)) * isw / std::sqrt(static_cast<double>(l * (l + 1)));
    for (int m = 0; m < l; ++m) x(m, m) += v;
    x(l, l) -= static_cast<double>(l) * v;
  }
  return x;
}

template <typename Vec>
Element build(const AlgebraShape& shape, const Vec& c) {
  if (c.size() != shape.real_dim()) {
    throw ShapeMismatch("coordinate vector has the wrong length");
  }
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    blocks.push_back(
        coords_to_block(c, shape.coord_offset(b), shape.block(b).dim, shape.block(b).weight));
  }
  return Element(shape, std::move(blocks));
}

}  // namespace

Eigen::VectorXcd coordinates(const Element& x) {
  const auto& shape = x.shape();
  Eigen::VectorXcd c(shape.real_dim());
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    block_to_coords(x.block(b), shape.block(b).weight, c, shape.coord_offset(b));
  }
  return c;
}

Eigen::VectorXd sa_coordinates(const Element& x) {
  const auto& shape = x.shape();
  Eigen::VectorXd c(shape.real_dim());
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    // Real part of tau(b_k x) is tau(b_k Re(x)) since b_k is self-adjoint.
    block_to_coords(x.block(b), shape.block(b).weight, c, shape.coord_offset(b));
  }
  return c;
}

Element from_coordinates(const AlgebraShape& shape, const Eigen::VectorXcd& c) {
  return build(shape, c);
}

Element from_coordinates(const AlgebraShape& shape, const Eigen::VectorXd& c) {
  return build(shape, c);
}

Element basis_element(const AlgebraShape& shape, int k) {
  if (k < 0 || k >= shape.real_dim()) throw ShapeMismatch("basis index out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(shape.real_dim());
  c(k) = 1.0;
  return from_coordinates(shape, c);
}

Eigen::VectorXd identity_coordinates(const AlgebraShape& shape) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(shape.real_dim());
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const Block& blk = shape.block(b);
    t(shape.coord_offset(b)) = std::sqrt(blk.weight * blk.dim);
  }
  return t;
}

Eigen::MatrixXd traceless_basis(const AlgebraShape& shape) {
  const int n = shape.real_dim();
  const Eigen::VectorXd t = identity_coordinates(shape).normalized();
  // Complete t to an orthonormal basis; the trailing n-1 columns span t-perp.
  Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(n, n);
  seed.col(0) = t;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - 1);
}

}  // namespace ergomix
