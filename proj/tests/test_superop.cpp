#include "ergomix/superop.hpp"

#include <gtest/gtest.h>

#include "ergomix/basis.hpp"
#include "ergomix/errors.hpp"
#include "support.hpp"

using namespace ergomix;

namespace {

double transfer_gap(const SuperOperator& a, const SuperOperator& b) {
  return (a.transfer() - b.transfer()).cwiseAbs().maxCoeff();
}

Element kraus_sum(const std::vector<Eigen::MatrixXcd>& ks, const Element& x) {
  const Eigen::MatrixXcd dx = x.dense();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dx.rows(), dx.cols());
  for (const auto& k : ks) acc += k * dx * k.adjoint();
  const auto& s = x.shape();
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t i = 0; i < s.block_count(); ++i) {
    blocks.push_back(acc.block(s.block_offset(i), s.block_offset(i), s.block(i).dim, s.block(i).dim));
  }
  return Element(s, blocks);
}

}  // namespace

TEST(FromKraus, IdentityOperator) {
  const AlgebraShape s({{2, 0.5}, {1, 1.0}});
  const std::vector<Eigen::MatrixXcd> ks{Eigen::MatrixXcd::Identity(3, 3)};
  EXPECT_LT(transfer_gap(from_kraus(s, ks), SuperOperator::identity(s)), 1e-14);
}

TEST(FromKraus, DepolarizingKraus) {
  // sqrt(lambda) 1 together with sqrt((1 - lambda)/d) E_jk reproduces
  // lambda x + (1 - lambda) tau(x) 1 for tau(1) = 1.
  for (int d : {2, 3}) {
    const double lambda = 0.35;
    std::vector<Eigen::MatrixXcd> ks{std::sqrt(lambda) * Eigen::MatrixXcd::Identity(d, d)};
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(d, d);
        e(j, k) = std::sqrt((1.0 - lambda) / d);
        ks.push_back(e);
      }
    }
    const AlgebraShape s = AlgebraShape::normalized(d);
    EXPECT_LT(transfer_gap(from_kraus(s, ks), from_depolarizing(s, lambda)), 1e-12);
  }
}

TEST(FromKraus, DimensionMismatch) {
  const std::vector<Eigen::MatrixXcd> ks{Eigen::MatrixXcd::Identity(2, 2)};
  EXPECT_THROW(from_kraus(AlgebraShape::single(3), ks), ShapeMismatch);
  EXPECT_THROW(from_kraus(AlgebraShape::single(3), {}), ShapeMismatch);
}

TEST(FromKraus, TransferMatchesNativeAction) {
  const std::vector<AlgebraShape> shapes{AlgebraShape::single(2), AlgebraShape::single(3, 0.4),
                                         AlgebraShape({{2, 1.0}, {1, 1.0}}), AlgebraShape({{2, 0.5}, {2, 2.0}})};
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const AlgebraShape& s = shapes[trial % shapes.size()];
    std::vector<Eigen::MatrixXcd> ks;
    for (int a = 0; a < 2; ++a) ks.push_back(ginibre(s.hilbert_dim(), s.hilbert_dim(), rng));
    const SuperOperator t = from_kraus(s, ks);
    std::vector<Eigen::MatrixXcd> blocks;
    for (const auto& b : s.blocks()) blocks.push_back(ginibre(b.dim, b.dim, rng));
    const Element x(s, blocks);
    const Element native = kraus_sum(ks, x);
    EXPECT_LT(trace_norm(t.apply(x) - native), 1e-10 * std::max(1.0, trace_norm(native)));
  }
}

TEST(FromKraus, RandomChannelsAreStochasticAndPositive) {
  const AlgebraShape s({{2, 0.25}, {2, 1.5}});
  Rng rng(2);
  const SuperOperator t = random_kraus_channel(s, 3, rng);
  const Eigen::VectorXd id = identity_coordinates(s);
  // tau o T = tau: the identity direction is a left eigenvector.
  EXPECT_LT((t.transfer().transpose() * id - id).cwiseAbs().maxCoeff(), 1e-10);
  for (int k = 0; k < 1000; ++k) {
    const Element x = random_element(s, {ElementKind::positive, 0.0, {}}, rng);
    const Element y = t.apply(x);
    EXPECT_TRUE(is_positive(y, 1e-9 * std::max(1.0, operator_norm(y))));
    EXPECT_NEAR(trace(y).real(), trace(x).real(), 1e-10 * std::max(1.0, trace(x).real()));
  }
}

TEST(FromClassical, Examples) {
  EXPECT_LT(transfer_gap(from_classical(Eigen::MatrixXd::Identity(3, 3)),
                         SuperOperator::identity(AlgebraShape::diagonal(3))),
            1e-15);

  Eigen::MatrixXd p(3, 3);
  p << 0.2, 0.5, 0.3, 0.2, 0.5, 0.3, 0.2, 0.5, 0.3;
  const SuperOperator t = from_classical(p);
  const AlgebraShape s = AlgebraShape::diagonal(3);
  std::vector<Eigen::MatrixXcd> pi;
  for (double v : {0.2, 0.5, 0.3}) pi.push_back(Eigen::MatrixXcd::Constant(1, 1, v));
  const Element y(s, pi);
  EXPECT_LT(transfer_gap(t, rank_one(y, Element::identity(s))), 1e-14);
}

TEST(FromClassical, ActsByTransposeOnDistributions) {
  Rng rng(4);
  const Eigen::MatrixXd p = support::random_row_stochastic(4, rng);
  const SuperOperator t = from_classical(p);
  const Eigen::VectorXd q = Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
  std::vector<Eigen::MatrixXcd> blocks;
  for (int i = 0; i < 4; ++i) blocks.push_back(Eigen::MatrixXcd::Constant(1, 1, q(i)));
  const Element image = t.apply(Element(AlgebraShape::diagonal(4), blocks));
  const Eigen::VectorXd expected = p.transpose() * q;
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(image.block(i)(0, 0).real(), expected(i), 1e-14);
}

TEST(FromClassical, RejectsBadRows) {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.5, 0.5, 0.6;
  EXPECT_THROW(from_classical(p), DomainError);
  p << 1.2, -0.2, 0.5, 0.5;
  EXPECT_THROW(from_classical(p), DomainError);
  EXPECT_THROW(from_classical(Eigen::MatrixXd::Identity(2, 3)), ShapeMismatch);
}

TEST(FromDepolarizing, Endpoints) {
  const AlgebraShape s = AlgebraShape::normalized(2);
  EXPECT_LT(transfer_gap(from_depolarizing(s, 1.0), SuperOperator::identity(s)), 1e-14);
  const SuperOperator t0 = from_depolarizing(s, 0.0);
  const SuperOperator t1 = rank_one(Element::identity(s), Element::identity(s));
  EXPECT_LT(transfer_gap(t0, t1), 1e-14);
  EXPECT_THROW(from_depolarizing(AlgebraShape::single(2), 0.5), DomainError);
}

TEST(FromDepolarizing, ScalesTracelessUniformly) {
  const AlgebraShape s = AlgebraShape::normalized(3);
  const SuperOperator t = from_depolarizing(s, -0.1);
  const Element x = random_element(s, {ElementKind::traceless, 0.0, {}}, 3);
  EXPECT_LT(support::max_abs(t.apply(x) - (-0.1) * x), 1e-13);
}

TEST(RankOne, Examples) {
  const AlgebraShape s({{2, 0.5}, {1, 2.0}});
  const Element y = random_element(s, {ElementKind::state, 0.0, {}}, 1);
  const SuperOperator ty = rank_one(y, Element::identity(s));
  const Element x = random_element(s, {ElementKind::state, 0.0, {}}, 2);
  EXPECT_LT(support::max_abs(ty.apply(x) - y), 1e-12);
  const Element z0 = random_element(s, {ElementKind::traceless, 0.0, {}}, 3);
  EXPECT_LT(support::max_abs(ty.apply(z0)), 1e-12);

  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const Element a = random_element(s, {ElementKind::self_adjoint, 0.0, {}}, rng);
    const Element z = random_element(s, {ElementKind::self_adjoint, 0.0, {}}, rng);
    const Element w = random_element(s, {ElementKind::self_adjoint, 0.0, {}}, rng);
    const SuperOperator t = rank_one(a, z);
    EXPECT_LT(support::max_abs(t.apply(w) - pairing(w, z).real() * a), 1e-12);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(t.transfer());
    EXPECT_LE(lu.rank(), 1);
  }
  EXPECT_THROW(rank_one(Element::matrix_unit(s, 0, 0, 1), Element::identity(s)), DomainError);
}

TEST(Compose, PowersAndComposition) {
  const AlgebraShape s = AlgebraShape::normalized(2);
  const SuperOperator t = from_depolarizing(s, 0.6);
  EXPECT_LT(transfer_gap(power(t, 1), t), 1e-15);
  EXPECT_LT(transfer_gap(power(t, 0), SuperOperator::identity(s)), 1e-15);
  EXPECT_LT(transfer_gap(power(t, 5), from_depolarizing(s, std::pow(0.6, 5))), 1e-14);

  const SuperOperator r = support::random_channel(AlgebraShape({{2, 1.0}, {1, 1.0}}), 2, 9);
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      EXPECT_LT(transfer_gap(power(r, m + n), compose(power(r, m), power(r, n))), 1e-10);
    }
  }
  EXPECT_THROW(power(t, -1), DomainError);
  EXPECT_THROW(compose(t, r), ShapeMismatch);
}

TEST(Compose, RankOneAfterStochastic) {
  const AlgebraShape s = AlgebraShape::single(3, 0.5);
  const Element y = random_element(s, {ElementKind::state, 0.0, {}}, 21);
  const SuperOperator ty = rank_one(y, Element::identity(s));
  const SuperOperator c = compose(ty, support::random_channel(s, 2, 22));
  const Element x = random_element(s, {ElementKind::state, 0.0, {}}, 23);
  EXPECT_LT(trace_norm(c.apply(x) - y), 1e-12);
}

TEST(SuperOperator, ComplexExtensionIsLinear) {
  const AlgebraShape s = AlgebraShape::single(2);
  const SuperOperator t = support::amplitude_damping(0.4);
  const Element x1 = random_element(s, {ElementKind::self_adjoint, 0.0, {}}, 1);
  const Element x2 = random_element(s, {ElementKind::self_adjoint, 0.0, {}}, 2);
  const Element x = x1 + Complex(0.0, 1.0) * x2;
  EXPECT_LT(support::max_abs(t.apply(x) - (t.apply(x1) + Complex(0.0, 1.0) * t.apply(x2))), 1e-13);
}

TEST(SuperOperator, DualPairing) {
  const AlgebraShape s({{2, 0.5}, {1, 3.0}});
  const SuperOperator t = support::random_channel(s, 2, 31);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Element a = random_element(s, {ElementKind::self_adjoint, 0.0, {}}, seed);
    const Element x = random_element(s, {ElementKind::self_adjoint, 0.0, {}}, seed + 100);
    EXPECT_NEAR(pairing(t.apply_dual(a), x).real(), pairing(a, t.apply(x)).real(), 1e-12);
  }
}

TEST(SuperOperator, KindTags) {
  EXPECT_EQ(support::amplitude_damping(0.1).kind(), MapKind::kraus);
  EXPECT_EQ(from_classical(Eigen::MatrixXd::Identity(2, 2)).kind(), MapKind::classical);
  EXPECT_EQ(parse_map_kind("rank_one"), MapKind::rank_one);
  EXPECT_FALSE(parse_map_kind("bogus").has_value());
  EXPECT_THROW(SuperOperator(AlgebraShape::single(2), Eigen::MatrixXd::Identity(3, 3)), ShapeMismatch);
}
