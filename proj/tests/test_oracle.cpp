#include "ergomix/oracle.hpp"

#include <gtest/gtest.h>

#include "ergomix/errors.hpp"
#include "support.hpp"

using namespace ergomix;

TEST(Oracle, TraceNormAgreesBetweenSvdAndEigen) {
  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    const Eigen::MatrixXcd g = ginibre(3, 3, rng);
    const Eigen::MatrixXcd h = g + g.adjoint();
    const Element x(AlgebraShape::single(3, 0.7), {h});
    EXPECT_NEAR(oracle::trace_norm_svd(x), oracle::trace_norm_eigen(h, 0.7), 1e-12);
  }
}

TEST(Oracle, QubitGridExamples) {
  const AlgebraShape s = AlgebraShape::normalized(2);
  oracle::OracleConfig c;
  c.grid_density = 60;
  EXPECT_NEAR(oracle::alpha_bar_grid_qubit(SuperOperator::identity(s), c), 1.0, 1e-9);
  EXPECT_NEAR(oracle::alpha_bar_grid_qubit(from_depolarizing(s, 0.4), c), 0.4, 1e-9);
  const Element y = random_element(s, {ElementKind::state, 0.0, {}}, 3);
  EXPECT_NEAR(oracle::alpha_bar_grid_qubit(rank_one(y, Element::identity(s)), c), 0.0, 1e-12);
  EXPECT_NEAR(oracle::induced_norm_grid_qubit(from_depolarizing(s, 0.4), c), 1.0, 1e-9);
  EXPECT_THROW(oracle::alpha_bar_grid_qubit(support::two_block_channel(), c), ShapeMismatch);
}

TEST(Oracle, AmplitudeDampingGrid) {
  // Frozen from the qubit grid: sqrt(1 - gamma) at gamma = 0.3.
  EXPECT_NEAR(oracle::alpha_bar_grid_qubit(support::amplitude_damping(0.3)), 0.836660026534, 1e-6);
}

TEST(Oracle, SampledIsLowerBound) {
  const AlgebraShape s = AlgebraShape::normalized(3);
  oracle::OracleConfig c;
  c.sample_count = 5000;
  const double v = oracle::alpha_bar_sampled(from_depolarizing(s, 0.7), c);
  EXPECT_LE(v, 0.7 + 1e-12);
  EXPECT_GT(v, 0.69);
  const SuperOperator zero(s, Eigen::MatrixXd::Zero(9, 9));
  EXPECT_EQ(oracle::alpha_bar_sampled(zero, c), 0.0);
}

TEST(Oracle, ClassicalExamples) {
  EXPECT_DOUBLE_EQ(oracle::classical_dobrushin(Eigen::MatrixXd::Identity(3, 3)), 1.0);
  Eigen::MatrixXd same(3, 3);
  same << 0.2, 0.3, 0.5, 0.2, 0.3, 0.5, 0.2, 0.3, 0.5;
  EXPECT_DOUBLE_EQ(oracle::classical_dobrushin(same), 0.0);
  Eigen::MatrixXd p(2, 2);
  p << 0.7, 0.3, 0.2, 0.8;
  EXPECT_NEAR(oracle::classical_dobrushin(p), 0.5, 1e-15);
  p << 0.7, 0.4, 0.2, 0.8;
  EXPECT_THROW(oracle::classical_dobrushin(p), DomainError);
}

TEST(Oracle, Deterministic) {
  const SuperOperator t = support::two_block_channel();
  oracle::OracleConfig c;
  c.sample_count = 2000;
  c.seed = 11;
  EXPECT_EQ(oracle::alpha_bar_random_search(t, c), oracle::alpha_bar_random_search(t, c));
  EXPECT_EQ(oracle::alpha_bar_sampled(t, c), oracle::alpha_bar_sampled(t, c));
}
