#pragma once

// Finite truncations of the diagonal shift T(x) = s(E(x)) on Mat(d): E keeps
// the diagonal, s moves diagonal slot k to slot k + 1. Mass that would land
// on the last slot leaves the system, so T^(d-1) = 0 and an orbit started at
// e_11 survives exactly d - 1 steps (slots 1 .. d-1).

#include <optional>
#include <vector>

#include "ergomix/algebra.hpp"
#include "ergomix/mixing.hpp"
#include "ergomix/superop.hpp"

namespace ergomix::shift {

enum class TraceMode { unit_weights, normalized };

class TruncatedShift {
 public:
  /// Throws DomainError for d < 2.
  TruncatedShift(int d, TraceMode mode);

  int dim() const { return d_; }
  TraceMode mode() const { return mode_; }
  const AlgebraShape& shape() const { return shape_; }

  /// Native O(d^2) action; valid for every d.
  Element apply(const Element& x) const;
  /// Transfer-matrix form; side d^2, so meant for small d.
  SuperOperator superoperator() const;
  /// The pure state on the k-th basis vector (0-based): e_kk / w.
  Element basis_state(int k) const;

 private:
  int d_;
  TraceMode mode_;
  AlgebraShape shape_;
};

TruncatedShift build(int d, TraceMode mode);

struct ProfilePoint {
  int n = 0;
  double norm = 0.0;
};

/// ||T^n y||_1 for n = 0 .. d - 1.
std::vector<ProfilePoint> escape_profile(const TruncatedShift& t, const Element& y);

struct NoFixedPointCertificate {
  /// min ||T x - x||_1 over ||x||_1 = 1: equals 1 / ||(I - T)^-1||, with the
  /// inverse given by the finite Neumann series.
  double value = 0.0;
  /// ||T x - x||_1 at an explicit unit x attaining value.
  double attained = 0.0;
  /// Smallest m with T^m = 0, checked on every matrix unit.
  int nilpotency_index = 0;
  double spectral_radius = 0.0;
};

NoFixedPointCertificate no_fixed_point_certificate(const TruncatedShift& t);

struct DegenerationRow {
  int d = 0;
  double epsilon = 0.0;
  /// Empty when no projector carries epsilon (epsilon > 1).
  std::optional<double> delta_max;
};

/// Smoothing of the orbit of the pure state on e_1 under the normalized
/// truncation for every d and epsilon.
std::vector<DegenerationRow> smoothing_degeneration(const std::vector<int>& dims,
                                                    const std::vector<double>& epsilons);

}  // namespace ergomix::shift
