#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "ergomix/algebra.hpp"
#include "ergomix/superop.hpp"

namespace ergomix {

enum class Certainty { certified, refuted, unknown };

std::string_view to_string(Certainty c);

struct PositivityVerdict {
  Certainty status = Certainty::unknown;
  /// "choi" (completely positive), "co_choi" (T o transpose completely
  /// positive), or "sampling".
  std::string method;
  /// A positive x with T(x) not positive; present iff status == refuted.
  std::optional<Element> witness;
  int samples = 0;
};

struct MapPredicates {
  PositivityVerdict positive;
  /// Choi matrix positive semidefinite. Never inferred from positivity.
  bool completely_positive = false;
  bool stochastic = false;
  double stochastic_defect = 0.0;
  bool l1_contraction = false;
  double induced_norm = 0.0;
};

struct PredicateConfig {
  int positivity_samples = 2000;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
};

/// Choi matrix sum_{a,b in one block} E_ab (x) T(E_ab), side hilbert_dim()^2.
Eigen::MatrixXcd choi_matrix(const SuperOperator& t);
/// Same with the input leg transposed: the Choi matrix of T o transpose.
Eigen::MatrixXcd co_choi_matrix(const SuperOperator& t);

/// max |tau(T x) - tau(x)| over a fixed spanning family of states (pure
/// states on e_j, (e_j + e_k)/sqrt2, (e_j + i e_k)/sqrt2 in every block).
double stochastic_defect(const SuperOperator& t);

PositivityVerdict check_positivity(const SuperOperator& t, const PredicateConfig& config = {});

MapPredicates check_predicates(const SuperOperator& t, const PredicateConfig& config = {});

/// Cheap gate for stochastic-only operations: trace defect <= tol and
/// positivity not refuted by a Choi/co-Choi certificate or 200 samples.
bool is_stochastic(const SuperOperator& t, double tol = 1e-9);

}  // namespace ergomix
