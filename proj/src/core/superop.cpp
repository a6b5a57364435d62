#include "ergomix/superop.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ergomix/basis.hpp"
#include "ergomix/errors.hpp"

namespace ergomix {

namespace {

constexpr double kClassicalRowTolerance = 1e-12;

Eigen::MatrixXcd weight_matrix(const AlgebraShape& shape) {
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(shape.hilbert_dim(), shape.hilbert_dim());
  for (std::size_t i = 0; i < shape.block_count(); ++i) {
    const int o = shape.block_offset(i);
    for (int k = 0; k < shape.block(i).dim; ++k) w(o + k, o + k) = shape.block(i).weight;
  }
  return w;
}

Element compress(const AlgebraShape& shape, const Eigen::MatrixXcd& dense) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t i = 0; i < shape.block_count(); ++i) {
    const int o = shape.block_offset(i);
    const int d = shape.block(i).dim;
    blocks.push_back(dense.block(o, o, d, d));
  }
  return Element(shape, std::move(blocks));
}

}  // namespace

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::kraus: return "kraus";
    case MapKind::transfer: return "transfer";
    case MapKind::classical: return "classical";
    case MapKind::depolarizing: return "depolarizing";
    case MapKind::shift_demo: return "shift_demo";
    case MapKind::rank_one: return "rank_one";
  }
  return "transfer";
}

std::optional<MapKind> parse_map_kind(std::string_view name) {
  for (MapKind k : {MapKind::kraus, MapKind::transfer, MapKind::classical, MapKind::depolarizing,
                    MapKind::shift_demo, MapKind::rank_one}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

SuperOperator::SuperOperator(AlgebraShape shape, Eigen::MatrixXd transfer, Recipe recipe,
                             bool completely_positive_by_construction)
    : shape_(std::move(shape)),
      transfer_(std::move(transfer)),
      recipe_(std::move(recipe)),
      cp_by_construction_(completely_positive_by_construction) {
  const int n = shape_.real_dim();
  if (transfer_.rows() != n || transfer_.cols() != n) {
    throw ShapeMismatch("transfer matrix must be " + std::to_string(n) + " x " +
                        std::to_string(n));
  }
}

SuperOperator SuperOperator::identity(const AlgebraShape& shape) {
  const int n = shape.real_dim();
  return SuperOperator(shape, Eigen::MatrixXd::Identity(n, n), TransferRecipe{}, true);
}

SuperOperator SuperOperator::from_action(const AlgebraShape& shape,
                                         const std::function<Element(const Element&)>& action,
                                         Recipe recipe, bool completely_positive_by_construction) {
  const int n = shape.real_dim();
  Eigen::MatrixXd a(n, n);
  for (int k = 0; k < n; ++k) {
    const Element image = action(basis_element(shape, k));
    if (!(image.shape() == shape)) throw ShapeMismatch("action leaves the algebra");
    a.col(k) = sa_coordinates(image);
  }
  return SuperOperator(shape, std::move(a), std::move(recipe), completely_positive_by_construction);
}

MapKind SuperOperator::kind() const {
  return std::visit(
      [](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, KrausRecipe>) return MapKind::kraus;
        if constexpr (std::is_same_v<R, TransferRecipe>) return MapKind::transfer;
        if constexpr (std::is_same_v<R, ClassicalRecipe>) return MapKind::classical;
        if constexpr (std::is_same_v<R, DepolarizingRecipe>) return MapKind::depolarizing;
        if constexpr (std::is_same_v<R, RankOneRecipe>) return MapKind::rank_one;
        if constexpr (std::is_same_v<R, ShiftRecipe>) return MapKind::shift_demo;
      },
      recipe_);
}

Element SuperOperator::apply(const Element& x) const {
  if (!(x.shape() == shape_)) throw ShapeMismatch("element does not live on the map's algebra");
  const Eigen::VectorXcd c = coordinates(x);
  if (c.imag().cwiseAbs().maxCoeff() == 0.0) {
    return from_coordinates(shape_, Eigen::VectorXd(transfer_ * c.real()));
  }
  return from_coordinates(shape_, Eigen::VectorXcd(transfer_.cast<Complex>() * c));
}

Element SuperOperator::apply_dual(const Element& a) const {
  if (!(a.shape() == shape_)) throw ShapeMismatch("element does not live on the map's algebra");
  const Eigen::VectorXcd c = coordinates(a);
  if (c.imag().cwiseAbs().maxCoeff() == 0.0) {
    return from_coordinates(shape_, Eigen::VectorXd(transfer_.transpose() * c.real()));
  }
  return from_coordinates(shape_, Eigen::VectorXcd(transfer_.transpose().cast<Complex>() * c));
}

SuperOperator SuperOperator::scaled(double c) const {
  return SuperOperator(shape_, transfer_ * c, TransferRecipe{}, cp_by_construction_ && c >= 0.0);
}

SuperOperator operator-(const SuperOperator& t, const SuperOperator& s) {
  if (!(t.shape() == s.shape())) throw ShapeMismatch("maps act on different algebras");
  return SuperOperator(t.shape(), t.transfer() - s.transfer());
}

SuperOperator from_kraus(const AlgebraShape& shape, std::span<const Eigen::MatrixXcd> kraus) {
  const int n = shape.hilbert_dim();
  if (kraus.empty()) throw ShapeMismatch("at least one Kraus operator is required");
  for (const auto& k : kraus) {
    if (k.rows() != n || k.cols() != n) {
      throw ShapeMismatch("Kraus operators must be " + std::to_string(n) + " x " +
                          std::to_string(n));
    }
  }
  std::vector<Eigen::MatrixXcd> ops(kraus.begin(), kraus.end());
  auto action = [&](const Element& x) {
    const Eigen::MatrixXcd dx = x.dense();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& k : ops) acc += k * dx * k.adjoint();
    return compress(shape, acc);
  };
  return SuperOperator::from_action(shape, action, KrausRecipe{ops}, true);
}

SuperOperator from_classical(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  if (n < 1 || p.cols() != n) throw ShapeMismatch("classical matrix must be square");
  for (int i = 0; i < n; ++i) {
    if ((p.row(i).array() < 0.0).any()) {
      throw DomainError("row " + std::to_string(i) + " has a negative entry");
    }
    if (std::abs(p.row(i).sum() - 1.0) > kClassicalRowTolerance) {
      throw DomainError("row " + std::to_string(i) + " does not sum to 1");
    }
  }
  // Unit-weight one-dimensional blocks have basis element [1]; coordinates are
  // the probabilities themselves.
  return SuperOperator(AlgebraShape::diagonal(n), p.transpose(), ClassicalRecipe{p}, true);
}

SuperOperator from_depolarizing(const AlgebraShape& shape, double lambda) {
  if (shape.block_count() != 1) throw ShapeMismatch("depolarizing map needs a single block");
  if (std::abs(shape.total_trace() - 1.0) > 1e-12) {
    throw DomainError("depolarizing map needs a normalized trace (tau(1) = 1)");
  }
  const int d = shape.block(0).dim;
  const double cp_floor = d > 1 ? -1.0 / (d * d - 1.0) : -1.0;
  const bool cp = lambda >= cp_floor - 1e-15 && lambda <= 1.0 + 1e-15;
  const Element one = Element::identity(shape);
  auto action = [&](const Element& x) { return lambda * x + (1.0 - lambda) * trace(x) * one; };
  return SuperOperator::from_action(shape, action, DepolarizingRecipe{lambda}, cp);
}

SuperOperator rank_one(const Element& y, const Element& z) {
  if (!(y.shape() == z.shape())) throw ShapeMismatch("y and z live on different algebras");
  if (!is_self_adjoint(y) || !is_self_adjoint(z)) {
    throw DomainError("rank_one requires self-adjoint y and z");
  }
  // tau(x z) = c(x) . c(z) for the orthonormal real basis.
  const Eigen::MatrixXd a = sa_coordinates(y) * sa_coordinates(z).transpose();
  const bool cp = is_positive(y) && is_positive(z);
  return SuperOperator(y.shape(), a, RankOneRecipe{y, z}, cp);
}

SuperOperator compose(const SuperOperator& s, const SuperOperator& t) {
  if (!(s.shape() == t.shape())) throw ShapeMismatch("maps act on different algebras");
  return SuperOperator(s.shape(), s.transfer() * t.transfer(), TransferRecipe{},
                       s.declared_completely_positive() && t.declared_completely_positive());
}

SuperOperator power(const SuperOperator& t, int n) {
  if (n < 0) throw DomainError("power needs n >= 0");
  const int dim = t.shape().real_dim();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd base = t.transfer();
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  if (n == 1) return t;
  return SuperOperator(t.shape(), std::move(result), TransferRecipe{},
                       n == 0 || t.declared_completely_positive());
}

SuperOperator from_transfer(const AlgebraShape& shape, const Eigen::MatrixXd& transfer) {
  return SuperOperator(shape, transfer);
}

SuperOperator random_kraus_channel(const AlgebraShape& shape, int rank, Rng& rng) {
  if (rank < 1) throw DomainError("Kraus rank must be >= 1");
  const int n = shape.hilbert_dim();
  std::vector<Eigen::MatrixXcd> ops;
  for (int a = 0; a < rank; ++a) ops.push_back(ginibre(n, n, rng));
  const Eigen::MatrixXcd w = weight_matrix(shape);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& k : ops) g += k.adjoint() * w * k;
  // K -> K G^{-1/2} W^{1/2} gives sum K* W K = W.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  const Eigen::MatrixXcd g_inv_sqrt = es.operatorInverseSqrt();
  const Eigen::MatrixXcd w_sqrt = w.cwiseSqrt();
  for (auto& k : ops) k = (k * g_inv_sqrt * w_sqrt).eval();
  return from_kraus(shape, ops);
}

SuperOperator unitary_channel(const AlgebraShape& shape, const Eigen::MatrixXcd& u) {
  // The unitary must itself be block-diagonal for x -> U x U* to preserve M.
  (void)Element::from_dense(shape, u, 1e-12);
  const std::vector<Eigen::MatrixXcd> ops{u};
  return from_kraus(shape, ops);
}

SuperOperator random_unitary_channel(const AlgebraShape& shape, Rng& rng) {
  const int n = shape.hilbert_dim();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < shape.block_count(); ++i) {
    const int o = shape.block_offset(i);
    const int d = shape.block(i).dim;
    u.block(o, o, d, d) = random_unitary(d, rng);
  }
  return unitary_channel(shape, u);
}

}  // namespace ergomix
