#pragma once

// Uniform asymptotic stability of stochastic maps: T^n -> T_y in the induced
// norm, detected through a power with alpha_bar(T^n0) < 1.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ergomix/algebra.hpp"
#include "ergomix/dobrushin.hpp"
#include "ergomix/superop.hpp"

namespace ergomix {

struct StabilityConfig {
  int n_max = 8;
  double rho_min = 1e-3;
  int horizon = 50;
  /// The audit stops early once the distance falls below this.
  double stop_distance = 1e-10;
  double bound_slack = 1e-7;
  OptimizerConfig optimizer = [] {
    OptimizerConfig c;
    c.oracle_cross_check = false;
    return c;
  }();
};

enum class StabilityVerdict { uniformly_stable, undetermined };

std::string_view to_string(StabilityVerdict v);

struct FixedPointResult {
  Element state;
  /// Dimension of ker(T - I); 1 means the fixed state is unique.
  int fixed_space_dim = 0;
  bool unique = false;
  double residual = 0.0;  ///< ||T y - y||_1
};

struct AuditPoint {
  int n = 0;
  double distance = 0.0;
  double bound = 0.0;
};

struct ConvergenceAudit {
  std::vector<AuditPoint> trace;
  /// Steps with distance > bound + slack.
  std::vector<int> violations;
};

struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::undetermined;
  int n_max = 0;
  std::optional<int> n0;
  std::optional<double> gamma;
  /// (n, alpha_bar(T^n)) for every power examined, in the order tried.
  std::vector<std::pair<int, double>> tested;
  std::optional<FixedPointResult> fixed_point;
  ConvergenceAudit audit;
};

/// Projection onto ker(A - I) along the range of A - I, from SVD kernels of
/// A - I and A^T - I. For a power-bounded A this is the Cesaro limit of A^n.
/// kernel_dim receives the dimension of the fixed space.
Eigen::MatrixXd ergodic_projection(const Eigen::MatrixXd& a, int* kernel_dim = nullptr);

/// Cesaro limit of T^n applied to the maximally mixed state. Throws
/// DomainError for non-stochastic T and NumericalFailure when the result
/// misses ||T y - y||_1 < 1e-9 or positivity.
FixedPointResult fixed_point(const SuperOperator& t);

/// distance(n) = ||T^n - T_y|| (induced norm) against 2 gamma^floor(n / n0).
ConvergenceAudit convergence_audit(const SuperOperator& t, const Element& y, int n0, double gamma,
                                   const StabilityConfig& config = {});

/// Smallest n0 <= n_max with alpha_bar(T^n0) <= 1 - rho_min, tried on the
/// schedule 1, 2, 4, ... then scanned back. Throws DomainError for a
/// non-stochastic T.
StabilityReport detect_uniform_stability(const SuperOperator& t, const StabilityConfig& config = {});

}  // namespace ergomix
