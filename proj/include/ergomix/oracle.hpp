#pragma once

// Brute-force reference computations. Everything here is deliberately slow
// and shares no code with the optimizers in dobrushin.hpp: the trace norm is
// taken from a full SVD, and searches are grids or plain random sampling.

#include <cstdint>

#include <Eigen/Dense>

#include "ergomix/algebra.hpp"
#include "ergomix/superop.hpp"

namespace ergomix::oracle {

struct OracleConfig {
  /// Points per angular parameter of the Bloch-sphere grid.
  int grid_density = 180;
  /// Random draws for sampled oracles.
  int sample_count = 100000;
  /// Successive grid zooms around the best coarse cell (qubit grids), or
  /// shrinking-radius stages (random search).
  int refine_levels = 6;
  std::uint64_t seed = 0;
};

/// Trace norm from a dense SVD of every block.
double trace_norm_svd(const Element& x);

/// Sum of |eigenvalues| of a Hermitian matrix from a dense eigensolver,
/// weighted by w; the reference for trace_norm on self-adjoint inputs.
double trace_norm_eigen(const Eigen::MatrixXcd& hermitian, double weight);

/// Exhaustive Bloch-sphere grid over antipodal pure-state pairs on a single
/// two-dimensional block, followed by local grid zooms. Returns the max of
/// ||T(u - v)||_1 / ||u - v||_1. Throws ShapeMismatch for other shapes.
double alpha_bar_grid_qubit(const SuperOperator& t, const OracleConfig& config = {});

/// Same grid for the induced norm: max over pure states p of ||T(p)||_1 / ||p||_1.
double induced_norm_grid_qubit(const SuperOperator& t, const OracleConfig& config = {});

/// Plain random sampling over the traceless self-adjoint elements:
/// max ||T x||_1 / ||x||_1. A lower bound on the Dobrushin coefficient.
double alpha_bar_sampled(const SuperOperator& t, const OracleConfig& config = {});

/// Random sampling over pairs of pure states followed by shrinking-radius
/// random perturbation; usable on any shape.
double alpha_bar_random_search(const SuperOperator& t, const OracleConfig& config = {});

/// Classical coefficient max_{i,j} 1/2 sum_k |p_ik - p_jk| of a row-stochastic
/// matrix. Throws DomainError when a row does not sum to 1 within 1e-12.
double classical_dobrushin(const Eigen::MatrixXd& p);

/// Dispatch: the qubit grid for a single 2-dim block, the random search otherwise.
double alpha_bar_reference(const SuperOperator& t, const OracleConfig& config = {});

}  // namespace ergomix::oracle
