#pragma once

// Dobrushin coefficient of a linear map on L1(M_sa):
//
//   alpha_bar(T) = sup { ||T x||_1 / ||x||_1 : x in X, x != 0 },
//   X = { x self-adjoint : tau(x) = 0 },   alpha(T) = ||T|| - alpha_bar(T).
//
// Both sups are convex maximizations, so they are attained at extreme points
// of the respective unit balls: +-p / w_i for the self-adjoint ball and
// (p / w_i - q / w_j) / 2 with orthogonal rank-one p, q for the traceless
// ball. The optimizer searches those points by alternating ascent: with
// S = sign(T x) the linear lower bound tau(T*(S) x') is maximized exactly by
// extreme eigenvectors of T*(S), and ||T x'||_1 >= tau(T*(S) x'), so each step
// never decreases the objective.
//
// All values are lower bounds of the true sup.

#include <cstdint>
#include <optional>
#include <string>

#include "ergomix/algebra.hpp"
#include "ergomix/superop.hpp"

namespace ergomix {

struct OptimizerConfig {
  int restarts = 32;
  int max_iterations = 200;
  /// Stop an ascent once the relative improvement per step drops below this.
  double relative_tolerance = 1e-10;
  /// Random perturbations tried around the best point per radius level.
  int perturbation_trials = 16;
  std::uint64_t seed = 0;
  /// Compare against the brute-force oracle when real_dim() <= oracle_max_real_dim.
  bool oracle_cross_check = true;
  int oracle_max_real_dim = 16;
  double oracle_agreement_tolerance = 1e-4;
  /// Draws for the direct search over X used on non-stochastic maps and by
  /// pure_pair_equality_gap.
  int traceless_samples = 3000;
};

enum class OracleAgreement { not_run, agree, disagree };

std::string_view to_string(OracleAgreement a);

struct InducedNormResult {
  double value = 0.0;
  /// A signed pure state +-p / w_i attaining value.
  Element extreme_point;
};

struct OptimizerStats {
  int restarts = 0;
  int iterations = 0;
  /// Best local maximum minus the best one found by a different restart that
  /// lies more than 1e-9 below it (0 when every restart agrees).
  double best_second_gap = 0.0;
  OracleAgreement oracle = OracleAgreement::not_run;
  std::optional<double> oracle_value;
};

struct ErgodicityReport {
  double alpha_bar = 0.0;
  double alpha = 0.0;
  /// Stored as alpha_bar + alpha, so the identity holds exactly.
  double induced_norm = 0.0;
  /// States with ||T(u - v)||_1 / ||u - v||_1 = alpha_bar.
  Element u;
  Element v;
  OptimizerStats stats;
  std::string method;
  double tolerance = 1e-8;
  bool stochastic = false;
  /// Direct search over X; only computed for non-stochastic maps.
  std::optional<double> traceless_search_value;
};

InducedNormResult induced_l1_norm(const SuperOperator& t, const OptimizerConfig& config = {});

/// Best value of ||T(u - v)||_1 / 2 over orthogonal pure states, without the
/// oracle cross-check or report assembly. Returns the pair via u, v if given.
double pure_pair_alpha_bar(const SuperOperator& t, const OptimizerConfig& config = {},
                           Element* u = nullptr, Element* v = nullptr,
                           OptimizerStats* stats = nullptr);

/// Random sampling over X followed by shrinking-radius random search in
/// traceless coordinates. Never looks at extreme points.
double traceless_search_alpha_bar(const SuperOperator& t, int samples, std::uint64_t seed,
                                  Element* argmax = nullptr);

ErgodicityReport dobrushin_alpha_bar(const SuperOperator& t, const OptimizerConfig& config = {});

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

/// lhs = ||T x||_1, rhs = alpha_bar ||x||_1 + alpha |tau(x)|.
/// Throws DomainError for non-self-adjoint x.
InequalityCheck check_fundamental_inequality(const SuperOperator& t, const ErgodicityReport& report,
                                             const Element& x);
InequalityCheck check_fundamental_inequality(const SuperOperator& t, const Element& x);

struct MeanZeroSplit {
  Element u;
  Element v;
  double scale = 0.0;  ///< ||x - y||_1 / 2
};

/// x - y = (||x - y||_1 / 2)(u - v) with states u, v from the Jordan parts of
/// x - y. Throws DomainError if x = y or |tau(x - y)| > 1e-10.
MeanZeroSplit mean_zero_split(const Element& x, const Element& y);

struct PurePairEqualityResult {
  double pure_pair_value = 0.0;
  double traceless_value = 0.0;
  double gap = 0.0;
  /// The equality is only asserted for stochastic maps; false flags a map
  /// outside that hypothesis (the gap is still measured).
  bool stochastic = false;
};

PurePairEqualityResult pure_pair_equality_gap(const SuperOperator& t, const OptimizerConfig& config = {});

}  // namespace ergomix
