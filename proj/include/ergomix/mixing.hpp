#pragma once

// Asymptotic behaviour of T^n: the asymptotic Dobrushin coefficient
//
//   rho_bar(T) = sup_{u, v states} lim_n ||T^n (u - v)||_1 / ||u - v||_1,
//
// its zero-one law for stochastic maps, smoothing, the vanish-or-fixed-point
// dichotomy, and strong asymptotic stability.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergomix/algebra.hpp"
#include "ergomix/dobrushin.hpp"
#include "ergomix/superop.hpp"

namespace ergomix {

struct MixingConfig {
  /// Power used as the stand-in for n -> infinity in empirical estimates.
  int horizon = 200;
  int empirical_pairs = 64;
  /// Peripheral cutoff on |eigenvalue| of T restricted to X.
  double spectral_tolerance = 1e-9;
  /// Threshold below which an empirical estimate counts as 0.
  double vanish_tolerance = 1e-6;
  std::uint64_t seed = 0;
  OptimizerConfig optimizer = [] {
    OptimizerConfig c;
    c.oracle_cross_check = false;
    return c;
  }();
};

enum class RhoBarClass { zero, one, estimate };

std::string_view to_string(RhoBarClass c);

struct MixingReport {
  RhoBarClass rho_bar = RhoBarClass::estimate;
  /// "spectral" for stochastic maps, "empirical" otherwise.
  std::string method;
  /// Numeric value: 0 or 1 for classified maps, the empirical value otherwise.
  double rho_bar_value = 0.0;
  /// ||T^N|| at N = horizon.
  double lim_norm = 0.0;
  /// lim_norm - rho_bar_value.
  double rho = 0.0;
  /// |eigenvalues| of T on X, descending; only for maps that leave X invariant.
  std::vector<double> traceless_spectrum;
  /// sup over sampled pairs of ||T^N (u - v)||_1 / ||u - v||_1.
  double empirical_sup_of_limits = 0.0;
  /// alpha_bar(T^N), the limit of sups.
  double alpha_bar_of_power = 0.0;
  /// |empirical_sup_of_limits - alpha_bar_of_power| > 1e-3.
  bool orders_diverge = false;
  /// Spectral class and empirical estimate agree (<= 0.01 for zero, >= 0.99 for one).
  bool empirical_agrees = true;
  bool stochastic = false;
};

/// Never throws on non-stochastic input: such maps get an estimate only.
MixingReport classify_mixing(const SuperOperator& t, const MixingConfig& config = {});

struct AsymptoticCheck {
  double lhs = 0.0;  ///< ||T^N x||_1
  double rhs = 0.0;  ///< rho_bar ||x||_1 + rho |tau(x)|
  double slack = 0.0;
};

AsymptoticCheck asymptotic_inequality_check(const SuperOperator& t, const MixingReport& report,
                                            const Element& x, int horizon = 200);

struct SmoothingRow {
  double epsilon = 0.0;
  /// Largest delta such that tau(p T^n x) < epsilon whenever tau(p) < delta,
  /// for every n in the orbit. Empty when no projector reaches epsilon.
  std::optional<double> delta_max;
  /// A projector with tau(p) = delta_max and tau(p T^n x) >= epsilon.
  std::optional<Element> witness;
  int witness_step = -1;
  /// epsilon / C, a delta guaranteed by tau(p w) <= ||w||_inf tau(p).
  double delta_lower_bound = 0.0;
};

struct SmoothingResult {
  bool holds = true;
  /// sup_n ||T^n x||_inf over the orbit.
  double c = 0.0;
  int steps = 0;
  std::vector<SmoothingRow> table;
  /// Random projector contradicting a delta in the table, if one was found.
  std::optional<Element> counter_witness;
};

struct SmoothingConfig {
  int steps = 200;
  int random_projectors = 200;
  std::uint64_t seed = 0;
};

/// Works on a precomputed orbit x, T x, T^2 x, ... of positive elements.
SmoothingResult smoothing_from_orbit(const std::vector<Element>& orbit, const std::vector<double>& epsilons,
                                     const SmoothingConfig& config = {});

/// Throws DomainError unless x is positive and nonzero.
SmoothingResult smoothing_check(const SuperOperator& t, const Element& x, const std::vector<double>& epsilons,
                                const SmoothingConfig& config = {});

enum class DichotomyOutcome { vanishes, fixed_point };

std::string_view to_string(DichotomyOutcome o);

struct DichotomyResult {
  DichotomyOutcome outcome = DichotomyOutcome::vanishes;
  /// ||T^N y||_1 at N = horizon.
  double limit_norm = 0.0;
  /// Positive fixed element of unit trace norm (fixed_point outcome only).
  std::optional<Element> z;
  double residual = 0.0;
};

/// Throws DomainError unless y is positive and nonzero, and NumericalFailure
/// if the orbit persists while its Cesaro limit vanishes.
DichotomyResult dichotomy(const SuperOperator& t, const Element& y, int horizon = 500);

enum class StrongVerdict { strongly_stable, not_strongly_stable, inconsistent };

std::string_view to_string(StrongVerdict v);

struct StrongStabilityConfig {
  int horizon = 500;
  int samples = 100;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  MixingConfig mixing;
};

struct StrongStabilityReport {
  StrongVerdict verdict = StrongVerdict::not_strongly_stable;
  bool completely_mixing = false;
  /// "spectral" or "alpha_bar_of_power".
  std::string mixing_method;
  bool smoothing = false;
  /// Limit map T_y; absent y means the limit is T_0.
  std::optional<Element> limit_state;
  bool condition_ii = false;
  /// max over samples of ||T^N x - T_y x||_1.
  double max_error = 0.0;
};

StrongStabilityReport strong_stability(const SuperOperator& t, const StrongStabilityConfig& config = {});

}  // namespace ergomix
