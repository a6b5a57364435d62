#include "ergomix/algebra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "ergomix/errors.hpp"

namespace ergomix {

namespace {

std::atomic<double> g_tolerance{1e-9};

constexpr double kJordanZero = 1e-12;
constexpr double kMergeTolerance = 1e-9;

void require_same_shape(const Element& a, const Element& b) {
  if (!(a.shape() == b.shape())) {
    throw ShapeMismatch("elements belong to different algebras");
  }
}

void require_self_adjoint(const Element& x, const char* op) {
  if (!is_self_adjoint(x)) {
    throw DomainError(std::string(op) + ": argument is not self-adjoint");
  }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hermitian_eigen(const Eigen::MatrixXcd& m) {
  // Symmetrize so round-off in the input does not leak into the spectrum.
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h);
}

}  // namespace

double default_tolerance() { return g_tolerance.load(std::memory_order_relaxed); }

void set_default_tolerance(double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  g_tolerance.store(tol, std::memory_order_relaxed);
}

AlgebraShape::AlgebraShape(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DomainError("an algebra needs at least one block");
  for (const auto& b : blocks_) {
    if (b.dim < 1) throw DomainError("block dimension must be >= 1");
    if (!(b.weight > 0.0) || !std::isfinite(b.weight)) {
      throw DomainError("block weight must be positive and finite");
    }
    block_offsets_.push_back(hilbert_dim_);
    coord_offsets_.push_back(real_dim_);
    hilbert_dim_ += b.dim;
    real_dim_ += b.dim * b.dim;
    total_trace_ += b.weight * b.dim;
  }
}

AlgebraShape AlgebraShape::single(int dim, double weight) {
  return AlgebraShape({Block{dim, weight}});
}

AlgebraShape AlgebraShape::normalized(int dim) {
  return AlgebraShape({Block{dim, 1.0 / dim}});
}

AlgebraShape AlgebraShape::diagonal(int n) {
  if (n < 1) throw DomainError("diagonal algebra needs n >= 1");
  return AlgebraShape(std::vector<Block>(static_cast<std::size_t>(n), Block{1, 1.0}));
}

double AlgebraShape::min_weight() const {
  return std::min_element(blocks_.begin(), blocks_.end(),
                          [](const Block& a, const Block& b) { return a.weight < b.weight; })
      ->weight;
}

Element::Element(AlgebraShape shape, std::vector<Eigen::MatrixXcd> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (blocks_.size() != shape_.block_count()) {
    throw ShapeMismatch("block count does not match the algebra");
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const int d = shape_.block(i).dim;
    if (blocks_[i].rows() != d || blocks_[i].cols() != d) {
      throw ShapeMismatch("block " + std::to_string(i) + " has the wrong size");
    }
  }
}

Element Element::zero(const AlgebraShape& shape) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& b : shape.blocks()) blocks.push_back(Eigen::MatrixXcd::Zero(b.dim, b.dim));
  return Element(shape, std::move(blocks));
}

Element Element::identity(const AlgebraShape& shape) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& b : shape.blocks()) blocks.push_back(Eigen::MatrixXcd::Identity(b.dim, b.dim));
  return Element(shape, std::move(blocks));
}

Element Element::matrix_unit(const AlgebraShape& shape, std::size_t block, int row, int col) {
  Element e = zero(shape);
  if (block >= shape.block_count() || row < 0 || col < 0 || row >= shape.block(block).dim ||
      col >= shape.block(block).dim) {
    throw ShapeMismatch("matrix unit index out of range");
  }
  e.block(block)(row, col) = 1.0;
  return e;
}

Element Element::rank_one_projector(const AlgebraShape& shape, std::size_t block,
                                    const Eigen::VectorXcd& psi) {
  if (block >= shape.block_count() || psi.size() != shape.block(block).dim) {
    throw ShapeMismatch("vector does not fit the block");
  }
  const double n2 = psi.squaredNorm();
  if (!(n2 > 0.0)) throw DomainError("rank-one projector needs a nonzero vector");
  Element e = zero(shape);
  e.block(block) = psi * psi.adjoint() / n2;
  return e;
}

Element Element::from_dense(const AlgebraShape& shape, const Eigen::MatrixXcd& dense, double tol) {
  const int n = shape.hilbert_dim();
  if (dense.rows() != n || dense.cols() != n) {
    throw ShapeMismatch("dense matrix side must be " + std::to_string(n));
  }
  Eigen::MatrixXcd rest = dense;
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t i = 0; i < shape.block_count(); ++i) {
    const int o = shape.block_offset(i);
    const int d = shape.block(i).dim;
    blocks.push_back(dense.block(o, o, d, d));
    rest.block(o, o, d, d).setZero();
  }
  if (rest.cwiseAbs().maxCoeff() > tol) {
    throw ShapeMismatch("matrix has entries outside the block-diagonal algebra");
  }
  return Element(shape, std::move(blocks));
}

Element Element::adjoint() const {
  Element out = *this;
  for (auto& b : out.blocks_) b.adjointInPlace();
  return out;
}

Element Element::real_part() const {
  Element out = *this;
  for (auto& b : out.blocks_) b = 0.5 * (b + b.adjoint()).eval();
  return out;
}

Element Element::imag_part() const {
  Element out = *this;
  const Complex minus_half_i(0.0, -0.5);
  for (auto& b : out.blocks_) b = ((b - b.adjoint()) * minus_half_i).eval();
  return out;
}

Eigen::MatrixXcd Element::dense() const {
  const int n = shape_.hilbert_dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const int o = shape_.block_offset(i);
    const int d = shape_.block(i).dim;
    m.block(o, o, d, d) = blocks_[i];
  }
  return m;
}

Element& Element::operator+=(const Element& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

Element& Element::operator-=(const Element& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

Element& Element::operator*=(Complex c) {
  for (auto& b : blocks_) b *= c;
  return *this;
}

Element& Element::operator*=(double c) {
  for (auto& b : blocks_) b *= c;
  return *this;
}

Element product(const Element& x, const Element& y) {
  require_same_shape(x, y);
  Element out = x;
  for (std::size_t i = 0; i < x.block_count(); ++i) out.block(i) = x.block(i) * y.block(i);
  return out;
}

Complex trace(const Element& x) {
  Complex t = 0.0;
  for (std::size_t i = 0; i < x.block_count(); ++i) {
    t += x.shape().block(i).weight * x.block(i).trace();
  }
  return t;
}

Complex pairing(const Element& x, const Element& y) {
  require_same_shape(x, y);
  Complex t = 0.0;
  for (std::size_t i = 0; i < x.block_count(); ++i) {
    // tr(a b) = sum_jk a_jk b_kj
    t += x.shape().block(i).weight * x.block(i).cwiseProduct(y.block(i).transpose()).sum();
  }
  return t;
}

double trace_norm(const Element& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.block_count(); ++i) {
    const auto& b = x.block(i);
    double block_sum = 0.0;
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + b.cwiseAbs().maxCoeff())) {
      block_sum = hermitian_eigen(b).eigenvalues().cwiseAbs().sum();
    } else {
      block_sum = Eigen::JacobiSVD<Eigen::MatrixXcd>(b).singularValues().sum();
    }
    s += x.shape().block(i).weight * block_sum;
  }
  return s;
}

double operator_norm(const Element& x) {
  double m = 0.0;
  for (const auto& b : x.blocks()) {
    m = std::max(m, Eigen::JacobiSVD<Eigen::MatrixXcd>(b).singularValues()(0));
  }
  return m;
}

bool is_self_adjoint(const Element& x, double tol) {
  for (const auto& b : x.blocks()) {
    const Eigen::MatrixXcd defect = b - b.adjoint();
    if (Eigen::JacobiSVD<Eigen::MatrixXcd>(defect).singularValues()(0) > tol) return false;
  }
  return true;
}

double min_eigenvalue(const Element& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : x.blocks()) m = std::min(m, hermitian_eigen(b).eigenvalues()(0));
  return m;
}

bool is_positive(const Element& x, double tol) {
  return is_self_adjoint(x, tol) && min_eigenvalue(x) >= -tol;
}

bool is_projector(const Element& x, double tol) {
  if (!is_self_adjoint(x, tol)) return false;
  for (const auto& b : x.blocks()) {
    const Eigen::MatrixXcd defect = b * b - b;
    if (Eigen::JacobiSVD<Eigen::MatrixXcd>(defect).singularValues()(0) > tol) return false;
  }
  return true;
}

Projector::Projector(Element p, double tol) : p_(std::move(p)) {
  if (!is_projector(p_, tol)) throw DomainError("element is not a projector");
}

Projector Projector::complement() const {
  return Projector(Element::identity(p_.shape()) - p_);
}

int Projector::rank() const {
  double r = 0.0;
  for (const auto& b : p_.blocks()) r += b.trace().real();
  return static_cast<int>(std::lround(r));
}

JordanParts jordan_decompose(const Element& x) {
  require_self_adjoint(x, "jordan_decompose");
  Element pos = Element::zero(x.shape());
  Element neg = Element::zero(x.shape());
  for (std::size_t i = 0; i < x.block_count(); ++i) {
    const auto es = hermitian_eigen(x.block(i));
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXcd& v = es.eigenvectors();
    Eigen::VectorXd lp = lam.unaryExpr([](double l) { return l >= -kJordanZero ? l : 0.0; });
    Eigen::VectorXd ln = lam.unaryExpr([](double l) { return l < -kJordanZero ? -l : 0.0; });
    // Tiny negative eigenvalues assigned to x+ keep their sign so x = x+ - x-.
    pos.block(i) = v * lp.cast<Complex>().asDiagonal() * v.adjoint();
    neg.block(i) = v * ln.cast<Complex>().asDiagonal() * v.adjoint();
  }
  return {std::move(pos), std::move(neg)};
}

std::vector<SpectralComponent> spectral_projectors(const Element& x) {
  require_self_adjoint(x, "spectral_projectors");
  struct Eig {
    double value;
    std::size_t block;
    Eigen::VectorXcd vec;
  };
  std::vector<Eig> all;
  for (std::size_t i = 0; i < x.block_count(); ++i) {
    const auto es = hermitian_eigen(x.block(i));
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      all.push_back({es.eigenvalues()(k), i, es.eigenvectors().col(k)});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Eig& a, const Eig& b) { return a.value < b.value; });

  std::vector<SpectralComponent> out;
  std::size_t start = 0;
  while (start < all.size()) {
    std::size_t end = start + 1;
    while (end < all.size() && all[end].value - all[start].value <= kMergeTolerance) ++end;
    Element p = Element::zero(x.shape());
    double mean = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      p.block(all[k].block) += all[k].vec * all[k].vec.adjoint();
      mean += all[k].value;
    }
    mean /= static_cast<double>(end - start);
    out.push_back({mean, Projector(std::move(p))});
    start = end;
  }
  return out;
}

namespace {

Eigen::MatrixXcd random_hermitian(int d, Rng& rng) {
  const Eigen::MatrixXcd g = ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

Element random_self_adjoint(const AlgebraShape& shape, Rng& rng) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& b : shape.blocks()) blocks.push_back(random_hermitian(b.dim, rng));
  return Element(shape, std::move(blocks));
}

Element random_positive(const AlgebraShape& shape, Rng& rng) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& b : shape.blocks()) {
    const Eigen::MatrixXcd g = ginibre(b.dim, b.dim, rng);
    blocks.push_back(g * g.adjoint() / static_cast<double>(b.dim));
  }
  return Element(shape, std::move(blocks));
}

std::size_t pick_block(const AlgebraShape& shape, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, shape.block_count() - 1);
  return pick(rng);
}

Element random_projector_below(const AlgebraShape& shape, double delta, Rng& rng) {
  if (delta > shape.total_trace() * (1.0 + 1e-12)) {
    throw DomainError("projector_below_delta requires delta <= tau(1)");
  }
  std::vector<std::size_t> feasible;
  for (std::size_t i = 0; i < shape.block_count(); ++i) {
    if (shape.block(i).weight < delta) feasible.push_back(i);
  }
  if (feasible.empty()) {
    throw InfeasibleRequest("every nonzero projector has tau(p) >= delta");
  }
  std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
  const std::size_t i = feasible[pick(rng)];
  const Block& b = shape.block(i);
  // largest rank k with k * w < delta
  int max_rank = static_cast<int>(std::ceil(delta / b.weight)) - 1;
  max_rank = std::clamp(max_rank, 1, b.dim);
  std::uniform_int_distribution<int> rank_dist(1, max_rank);
  const int k = rank_dist(rng);
  const Eigen::MatrixXcd u = random_unitary(b.dim, rng);
  Element p = Element::zero(shape);
  p.block(i) = u.leftCols(k) * u.leftCols(k).adjoint();
  return p;
}

}  // namespace

Element random_element(const AlgebraShape& shape, const ElementRequest& request, Rng& rng) {
  switch (request.kind) {
    case ElementKind::self_adjoint:
      return random_self_adjoint(shape, rng);
    case ElementKind::positive:
      return random_positive(shape, rng);
    case ElementKind::traceless: {
      Element x = random_self_adjoint(shape, rng);
      const double t = trace(x).real() / shape.total_trace();
      return x - t * Element::identity(shape);
    }
    case ElementKind::state: {
      Element x = random_positive(shape, rng);
      return x / trace(x).real();
    }
    case ElementKind::pure_state: {
      const std::size_t i = request.block ? *request.block : pick_block(shape, rng);
      if (i >= shape.block_count()) throw ShapeMismatch("pure_state block out of range");
      const Eigen::VectorXcd psi = random_unit_vector(shape.block(i).dim, rng);
      return Element::rank_one_projector(shape, i, psi) / shape.block(i).weight;
    }
    case ElementKind::projector_below_delta:
      return random_projector_below(shape, request.delta, rng);
  }
  throw DomainError("unknown element kind");
}

Element random_element(const AlgebraShape& shape, const ElementRequest& request,
                       std::uint64_t seed) {
  Rng rng(seed);
  return random_element(shape, request, rng);
}

}  // namespace ergomix
