#pragma once

// Finite von Neumann algebras M = Mat(d_1) + ... + Mat(d_k) with the faithful
// trace tau(x) = sum_i w_i * tr(x_i), and the element-level operations used by
// the rest of the library.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ergomix/random.hpp"

namespace ergomix {

using Complex = std::complex<double>;

/// Default tolerance for hermiticity / positivity / idempotency predicates,
/// measured in operator norm of the defect. Process-wide; set once at startup.
double default_tolerance();
void set_default_tolerance(double tol);

struct Block {
  int dim = 1;
  double weight = 1.0;

  bool operator==(const Block&) const = default;
};

class AlgebraShape {
 public:
  /// Throws DomainError on an empty block list, dim < 1, or weight <= 0.
  explicit AlgebraShape(std::vector<Block> blocks);

  static AlgebraShape single(int dim, double weight = 1.0);
  /// Mat(d) with weight 1/d, so tau(1) = 1.
  static AlgebraShape normalized(int dim);
  /// The commutative algebra C^n as n one-dimensional blocks of weight 1.
  static AlgebraShape diagonal(int n);

  std::span<const Block> blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Block& block(std::size_t i) const { return blocks_.at(i); }

  /// tau(1) = sum_i w_i d_i.
  double total_trace() const { return total_trace_; }
  /// sum_i d_i: side of the block-diagonal embedding.
  int hilbert_dim() const { return hilbert_dim_; }
  /// sum_i d_i^2: real dimension of the self-adjoint part.
  int real_dim() const { return real_dim_; }
  int block_offset(std::size_t i) const { return block_offsets_.at(i); }
  int coord_offset(std::size_t i) const { return coord_offsets_.at(i); }
  double min_weight() const;

  bool operator==(const AlgebraShape& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<Block> blocks_;
  std::vector<int> block_offsets_;
  std::vector<int> coord_offsets_;
  double total_trace_ = 0.0;
  int hilbert_dim_ = 0;
  int real_dim_ = 0;
};

class Element {
 public:
  /// Throws ShapeMismatch if the block count or any block size disagrees
  /// with the shape.
  Element(AlgebraShape shape, std::vector<Eigen::MatrixXcd> blocks);

  static Element zero(const AlgebraShape& shape);
  static Element identity(const AlgebraShape& shape);
  static Element matrix_unit(const AlgebraShape& shape, std::size_t block, int row, int col);
  /// Rank-one projector |psi><psi| / <psi|psi> placed in one block.
  static Element rank_one_projector(const AlgebraShape& shape, std::size_t block,
                                    const Eigen::VectorXcd& psi);
  /// Reads a block-diagonal matrix of side hilbert_dim(). Off-block entries
  /// larger than tol are a ShapeMismatch.
  static Element from_dense(const AlgebraShape& shape, const Eigen::MatrixXcd& dense,
                            double tol = 1e-12);

  const AlgebraShape& shape() const { return shape_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Eigen::MatrixXcd& block(std::size_t i) const { return blocks_.at(i); }
  Eigen::MatrixXcd& block(std::size_t i) { return blocks_.at(i); }
  std::span<const Eigen::MatrixXcd> blocks() const { return blocks_; }

  Element adjoint() const;
  /// (x + x*) / 2 and (x - x*) / 2i, so x = re + i im with both self-adjoint.
  Element real_part() const;
  Element imag_part() const;
  Eigen::MatrixXcd dense() const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(Complex c);
  Element& operator*=(double c);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { return a *= -1.0; }
  friend Element operator*(Element a, double c) { return a *= c; }
  friend Element operator*(double c, Element a) { return a *= c; }
  friend Element operator*(Complex c, Element a) { return a *= c; }
  friend Element operator/(Element a, double c) { return a *= 1.0 / c; }

 private:
  AlgebraShape shape_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// Blockwise operator product x * y.
Element product(const Element& x, const Element& y);

Complex trace(const Element& x);
/// tau(x y); the Hilbert-Schmidt type pairing used for duals.
Complex pairing(const Element& x, const Element& y);

/// ||x||_1 = sum_i w_i * (sum of singular values of block i).
double trace_norm(const Element& x);
/// max_i ||x_i||_op.
double operator_norm(const Element& x);

bool is_self_adjoint(const Element& x, double tol = default_tolerance());
bool is_positive(const Element& x, double tol = default_tolerance());
bool is_projector(const Element& x, double tol = default_tolerance());

/// Smallest eigenvalue over all blocks of a self-adjoint element.
double min_eigenvalue(const Element& x);

/// An element with p = p* = p^2.
class Projector {
 public:
  /// Throws DomainError unless p is a projector within tol.
  explicit Projector(Element p, double tol = default_tolerance());

  const Element& element() const { return p_; }
  Projector complement() const;
  double trace_value() const { return trace(p_).real(); }
  int rank() const;

 private:
  Element p_;
};

struct JordanParts {
  Element positive;
  Element negative;
};

/// x = x+ - x-, x+ x- = 0. Eigenvalues within 1e-12 of zero go to x+.
/// Throws DomainError for a non-self-adjoint x.
JordanParts jordan_decompose(const Element& x);

struct SpectralComponent {
  double eigenvalue;
  Projector projector;
};

/// Finite spectral resolution x = sum_k lambda_k p_k with eigenvalues merged
/// across blocks when they agree within 1e-9; ascending in eigenvalue.
std::vector<SpectralComponent> spectral_projectors(const Element& x);

enum class ElementKind {
  self_adjoint,
  positive,
  traceless,
  state,
  pure_state,
  projector_below_delta,
};

struct ElementRequest {
  ElementKind kind = ElementKind::self_adjoint;
  /// Only for projector_below_delta: the output has 0 < tau(p) < delta.
  double delta = 0.0;
  /// Optional block for pure_state; chosen uniformly when absent.
  std::optional<std::size_t> block;
};

/// Throws InfeasibleRequest when no element fits (e.g. every nonzero
/// projector has tau(p) >= delta).
Element random_element(const AlgebraShape& shape, const ElementRequest& request, Rng& rng);
Element random_element(const AlgebraShape& shape, const ElementRequest& request,
                       std::uint64_t seed);

}  // namespace ergomix
