#include "ergomix/dobrushin.hpp"

#include <gtest/gtest.h>

#include "ergomix/errors.hpp"
#include "ergomix/oracle.hpp"
#include "support.hpp"

using namespace ergomix;

namespace {

OptimizerConfig quick() {
  OptimizerConfig c;
  c.oracle_cross_check = false;
  return c;
}

}  // namespace

TEST(InducedNorm, Examples) {
  const AlgebraShape s = AlgebraShape::normalized(2);
  EXPECT_NEAR(induced_l1_norm(SuperOperator::identity(s)).value, 1.0, 1e-12);
  EXPECT_NEAR(induced_l1_norm(support::random_channel(AlgebraShape({{2, 1.0}, {1, 1.0}}), 2, 5)).value, 1.0,
              1e-9);
  EXPECT_NEAR(induced_l1_norm(SuperOperator::identity(s).scaled(-2.5)).value, 2.5, 1e-12);
  EXPECT_NEAR(induced_l1_norm(support::amplitude_damping(0.3)).value, 1.0, 1e-9);
}

TEST(InducedNorm, MatchesQubitGrid) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const AlgebraShape s = AlgebraShape::single(2);
    const SuperOperator t = from_transfer(s, Eigen::MatrixXd::NullaryExpr(4, 4, [&] {
                                            return std::uniform_real_distribution<double>(-1, 1)(rng);
                                          }));
    EXPECT_NEAR(induced_l1_norm(t).value, oracle::induced_norm_grid_qubit(t), 1e-6);
  }
}

TEST(AlphaBar, ConstructorExamples) {
  const AlgebraShape s = AlgebraShape::normalized(2);
  const ErgodicityReport dep = dobrushin_alpha_bar(from_depolarizing(s, 0.5));
  EXPECT_NEAR(dep.alpha_bar, 0.5, 1e-9);
  EXPECT_NEAR(dep.alpha, 0.5, 1e-9);
  EXPECT_EQ(dep.stats.oracle, OracleAgreement::agree);
  EXPECT_TRUE(dep.stochastic);

  EXPECT_NEAR(dobrushin_alpha_bar(SuperOperator::identity(s)).alpha_bar, 1.0, 1e-12);
  const Element y = random_element(s, {ElementKind::state, 0.0, {}}, 4);
  const ErgodicityReport r1 = dobrushin_alpha_bar(rank_one(y, Element::identity(s)));
  EXPECT_LT(r1.alpha_bar, 1e-12);
  EXPECT_NEAR(r1.alpha, 1.0, 1e-9);

  Eigen::MatrixXd p(2, 2);
  p << 0.7, 0.3, 0.2, 0.8;
  EXPECT_NEAR(dobrushin_alpha_bar(from_classical(p)).alpha_bar, 0.5, 1e-9);
}

TEST(AlphaBar, FrozenOracleValues) {
  const ErgodicityReport amp = dobrushin_alpha_bar(support::amplitude_damping(0.3));
  EXPECT_NEAR(amp.alpha_bar, 0.836660026534, 1e-6);
  EXPECT_NEAR(amp.induced_norm, 1.0, 1e-9);
  const ErgodicityReport two = dobrushin_alpha_bar(support::two_block_channel());
  EXPECT_NEAR(two.alpha_bar, 0.720294057599, 1e-4);
  EXPECT_NE(two.stats.oracle, OracleAgreement::disagree);
}

TEST(AlphaBar, CertificateAttainsValue) {
  const SuperOperator t = support::random_channel(AlgebraShape::single(3), 2, 77);
  const ErgodicityReport r = dobrushin_alpha_bar(t, quick());
  EXPECT_NEAR(trace(r.u).real(), 1.0, 1e-10);
  EXPECT_NEAR(trace(r.v).real(), 1.0, 1e-10);
  EXPECT_TRUE(is_positive(r.u));
  EXPECT_TRUE(is_positive(r.v));
  EXPECT_NEAR(trace_norm(t.apply(r.u - r.v)) / trace_norm(r.u - r.v), r.alpha_bar, 1e-9);
}

TEST(AlphaBar, OracleAgreementOnRandomQubits) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SuperOperator t = support::random_channel(AlgebraShape::single(2), 2, seed);
    const double opt = dobrushin_alpha_bar(t, quick()).alpha_bar;
    EXPECT_NEAR(opt, oracle::alpha_bar_grid_qubit(t), 1e-4) << "seed " << seed;
  }
}

TEST(AlphaBar, NeverBelowSampling) {
  oracle::OracleConfig oc;
  oc.sample_count = 4000;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const SuperOperator t = support::random_channel(AlgebraShape({{2, 1.0}, {1, 1.0}}), 2, seed);
    oc.seed = seed;
    EXPECT_LE(oracle::alpha_bar_sampled(t, oc), dobrushin_alpha_bar(t, quick()).alpha_bar + 1e-6);
  }
}

TEST(AlphaBar, Deterministic) {
  const SuperOperator t = support::random_channel(AlgebraShape::single(3), 3, 1);
  EXPECT_EQ(dobrushin_alpha_bar(t, quick()).alpha_bar, dobrushin_alpha_bar(t, quick()).alpha_bar);
}

TEST(FundamentalInequality, HoldsOnRandomElements) {
  const SuperOperator t = support::two_block_channel();
  const ErgodicityReport r = dobrushin_alpha_bar(t, quick());
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const Element x = random_element(t.shape(), {ElementKind::self_adjoint, 0.0, {}}, rng);
    EXPECT_GE(check_fundamental_inequality(t, r, x).slack, -1e-9);
  }
}

TEST(FundamentalInequality, TightAtCertificateAndRejectsNonSelfAdjoint) {
  const SuperOperator t = support::amplitude_damping(0.3);
  const ErgodicityReport r = dobrushin_alpha_bar(t, quick());
  EXPECT_NEAR(check_fundamental_inequality(t, r, r.u - r.v).slack, 0.0, 1e-9);
  const Element x = Element::matrix_unit(t.shape(), 0, 0, 1);
  EXPECT_THROW(check_fundamental_inequality(t, r, x), DomainError);
}

TEST(MeanZeroSplit, Reconstructs) {
  const AlgebraShape s({{2, 0.5}, {2, 1.0}});
  Rng rng(6);
  for (int k = 0; k < 100; ++k) {
    const Element x = random_element(s, {ElementKind::state, 0.0, {}}, rng);
    const Element y = random_element(s, {ElementKind::state, 0.0, {}}, rng);
    const MeanZeroSplit m = mean_zero_split(x, y);
    EXPECT_LT(trace_norm(x - y - m.scale * (m.u - m.v)), 1e-10);
    EXPECT_NEAR(m.scale, trace_norm(x - y) / 2.0, 1e-12);
    EXPECT_NEAR(trace(m.u).real(), 1.0, 1e-10);
    EXPECT_TRUE(is_positive(m.v, 1e-10));
  }
  const Element x = random_element(s, {ElementKind::state, 0.0, {}}, 1);
  EXPECT_THROW(mean_zero_split(x, x), DomainError);
  EXPECT_THROW(mean_zero_split(x, 2.0 * x), DomainError);
}

TEST(PurePairEquality, EqualityForStochasticMaps) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PurePairEqualityResult r = pure_pair_equality_gap(support::random_channel(AlgebraShape::single(2), 2, seed), quick());
    EXPECT_TRUE(r.stochastic);
    EXPECT_LE(r.gap, 1e-4);
    EXPECT_GE(r.pure_pair_value, r.traceless_value - 1e-6);
  }
}

TEST(PurePairEquality, NonStochasticMapUsesTracelessSearch) {
  // A trace-changing map where pure pairs miss the sup over X.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 3) = 1.0;
  const SuperOperator t = from_transfer(AlgebraShape::single(2), m);
  const ErgodicityReport r = dobrushin_alpha_bar(t, quick());
  EXPECT_FALSE(r.stochastic);
  ASSERT_TRUE(r.traceless_search_value.has_value());
  EXPECT_GE(r.alpha_bar, *r.traceless_search_value - 1e-12);
}
