#pragma once

// Linear maps T: L1(M) -> L1(M) stored as a real transfer matrix on the
// self-adjoint coordinates of basis.hpp. The action on a general element is
// the linear extension T(x1 + i x2) = T(x1) + i T(x2).

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ergomix/algebra.hpp"

namespace ergomix {

enum class MapKind { kraus, transfer, classical, depolarizing, shift_demo, rank_one };

std::string_view to_string(MapKind kind);
std::optional<MapKind> parse_map_kind(std::string_view name);

// Constructor payloads, kept so a map can be written back out as the spec it
// came from.
struct KrausRecipe {
  std::vector<Eigen::MatrixXcd> operators;
};
struct TransferRecipe {};
struct ClassicalRecipe {
  Eigen::MatrixXd matrix;
};
struct DepolarizingRecipe {
  double lambda = 1.0;
};
struct RankOneRecipe {
  Element y;
  Element z;
};
struct ShiftRecipe {
  int dim = 2;
  bool normalized = false;
};

using Recipe = std::variant<KrausRecipe, TransferRecipe, ClassicalRecipe, DepolarizingRecipe,
                            RankOneRecipe, ShiftRecipe>;

class SuperOperator {
 public:
  /// Throws ShapeMismatch unless transfer is real_dim x real_dim.
  SuperOperator(AlgebraShape shape, Eigen::MatrixXd transfer, Recipe recipe = TransferRecipe{},
                bool completely_positive_by_construction = false);

  static SuperOperator identity(const AlgebraShape& shape);
  /// Tabulates a linear action on the self-adjoint basis.
  static SuperOperator from_action(const AlgebraShape& shape,
                                   const std::function<Element(const Element&)>& action,
                                   Recipe recipe, bool completely_positive_by_construction);

  const AlgebraShape& shape() const { return shape_; }
  const Eigen::MatrixXd& transfer() const { return transfer_; }
  const Recipe& recipe() const { return recipe_; }
  MapKind kind() const;
  bool declared_completely_positive() const { return cp_by_construction_; }

  Element apply(const Element& x) const;
  /// The dual T* with tau(T*(a) x) = tau(a T(x)).
  Element apply_dual(const Element& a) const;

  SuperOperator scaled(double c) const;

 private:
  AlgebraShape shape_;
  Eigen::MatrixXd transfer_;
  Recipe recipe_;
  bool cp_by_construction_ = false;
};

/// T - S as a plain transfer map.
SuperOperator operator-(const SuperOperator& t, const SuperOperator& s);

/// T(x) = E(sum_a K_a x K_a*), where the K_a act on the block-diagonal
/// embedding C^{d_1} + ... + C^{d_k} and E compresses onto the blocks.
/// Stochastic iff sum_a K_a* W K_a = W, W = diag(w_i 1_{d_i}).
SuperOperator from_kraus(const AlgebraShape& shape, std::span<const Eigen::MatrixXcd> kraus);

/// A classical chain on C^n: rows of P are transition probabilities; states
/// evolve as p -> P^T p. Throws DomainError for negative entries or rows that
/// do not sum to 1 within 1e-12.
SuperOperator from_classical(const Eigen::MatrixXd& row_stochastic);

/// T(x) = lambda x + (1 - lambda) tau(x) 1 on a single block with tau(1) = 1.
SuperOperator from_depolarizing(const AlgebraShape& shape, double lambda);

/// T_{y,z}(x) = tau(x z) y. Throws DomainError unless y and z are self-adjoint.
SuperOperator rank_one(const Element& y, const Element& z);

/// S o T.
SuperOperator compose(const SuperOperator& s, const SuperOperator& t);
SuperOperator power(const SuperOperator& t, int n);

/// Transfer-matrix route; useful for tests that compare against native actions.
SuperOperator from_transfer(const AlgebraShape& shape, const Eigen::MatrixXd& transfer);

/// Kraus channel with `rank` Ginibre operators normalized to be stochastic.
SuperOperator random_kraus_channel(const AlgebraShape& shape, int rank, Rng& rng);
/// x -> U x U* for a block-diagonal unitary.
SuperOperator unitary_channel(const AlgebraShape& shape, const Eigen::MatrixXcd& u);
/// Block-diagonal Haar unitary conjugation.
SuperOperator random_unitary_channel(const AlgebraShape& shape, Rng& rng);

}  // namespace ergomix
