#include "ergomix/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ergomix/basis.hpp"
#include "ergomix/errors.hpp"
#include "ergomix/parallel.hpp"
#include "ergomix/predicates.hpp"
#include "ergomix/stability.hpp"

namespace ergomix {

namespace {

constexpr double kDivergence = 1e-3;
constexpr double kVanish = 1e-8;
constexpr double kFixedResidual = 1e-8;

// X is invariant iff tau o T vanishes on X iff A^T t is parallel to t.
bool leaves_traceless_invariant(const SuperOperator& t) {
  const Eigen::VectorXd id = identity_coordinates(t.shape());
  const Eigen::VectorXd image = t.transfer().transpose() * id;
  const Eigen::VectorXd off = image - id * (id.dot(image) / id.squaredNorm());
  return off.norm() <= 1e-9 * std::max(1.0, image.norm());
}

Element random_pair_difference(const AlgebraShape& s, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < s.block_count(); ++i) {
    for (std::size_t j = 0; j < s.block_count(); ++j) {
      if (i != j || s.block(i).dim >= 2) pairs.emplace_back(i, j);
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  const auto [bi, bj] = pairs[pick(rng)];
  Eigen::VectorXcd psi = random_unit_vector(s.block(bi).dim, rng);
  Eigen::VectorXcd phi = random_unit_vector(s.block(bj).dim, rng);
  if (bi == bj) {
    phi -= psi * psi.dot(phi);
    phi.normalize();
  }
  return Element::rank_one_projector(s, bi, psi) / s.block(bi).weight -
         Element::rank_one_projector(s, bj, phi) / s.block(bj).weight;
}

// Minimum of sum_i w_i k_i subject to sum_i w_i F_i(k_i) >= eps, where F_i(k)
// is the sum of the k largest eigenvalues of block i (Ky Fan), so no
// projector of smaller trace can carry eps of the mass.
struct KnapsackResult {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> ranks;
};

void knapsack(const std::vector<std::vector<double>>& prefix, const std::vector<double>& weights, double eps,
              std::size_t block, double cost, double mass, std::vector<int>& ranks, KnapsackResult& best) {
  if (cost >= best.cost) return;
  if (block == prefix.size()) {
    if (mass >= eps) best = {cost, ranks};
    return;
  }
  for (int k = 0; k < static_cast<int>(prefix[block].size()); ++k) {
    ranks[block] = k;
    knapsack(prefix, weights, eps, block + 1, cost + weights[block] * k, mass + weights[block] * prefix[block][k],
             ranks, best);
  }
  ranks[block] = 0;
}

}  // namespace

std::string_view to_string(RhoBarClass c) {
  switch (c) {
    case RhoBarClass::zero: return "zero";
    case RhoBarClass::one: return "one";
    case RhoBarClass::estimate: return "estimate";
  }
  return "estimate";
}

std::string_view to_string(DichotomyOutcome o) {
  return o == DichotomyOutcome::vanishes ? "vanishes" : "fixed_point";
}

std::string_view to_string(StrongVerdict v) {
  switch (v) {
    case StrongVerdict::strongly_stable: return "strongly_stable";
    case StrongVerdict::not_strongly_stable: return "not_strongly_stable";
    case StrongVerdict::inconsistent: return "inconsistent";
  }
  return "inconsistent";
}

MixingReport classify_mixing(const SuperOperator& t, const MixingConfig& config) {
  const auto& s = t.shape();
  MixingReport report;
  report.stochastic = is_stochastic(t);
  const SuperOperator tn = power(t, config.horizon);

  std::vector<Element> probes;
  if (leaves_traceless_invariant(t) && s.real_dim() > 1) {
    const Eigen::MatrixXd q = traceless_basis(s);
    const Eigen::MatrixXd ax = q.transpose() * t.transfer() * q;
    Eigen::EigenSolver<Eigen::MatrixXd> es(ax);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      const double modulus = std::abs(es.eigenvalues()(k));
      report.traceless_spectrum.push_back(modulus);
      if (modulus < 1.0 - config.spectral_tolerance) continue;
      // Peripheral directions: T^n acts on them as an isometry.
      const Eigen::VectorXcd w = q.cast<Complex>() * es.eigenvectors().col(k);
      for (const Eigen::VectorXd& part : {Eigen::VectorXd(w.real()), Eigen::VectorXd(w.imag())}) {
        if (part.norm() > 1e-8) probes.push_back(from_coordinates(s, part));
      }
    }
    std::sort(report.traceless_spectrum.begin(), report.traceless_spectrum.end(), std::greater<>());
  }

  if (s.real_dim() > 1) {
    Rng rng(derive_seed(config.seed, 0x3141));
    for (int k = 0; k < config.empirical_pairs; ++k) probes.push_back(random_pair_difference(s, rng));
  }
  std::vector<double> ratios(probes.size(), 0.0);
  parallel_for(probes.size(), [&](std::size_t k) {
    ratios[k] = trace_norm(tn.apply(probes[k])) / trace_norm(probes[k]);
  });
  report.empirical_sup_of_limits = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());

  OptimizerConfig oc = config.optimizer;
  oc.seed = derive_seed(config.seed, 0x2718);
  report.alpha_bar_of_power = pure_pair_alpha_bar(tn, oc);
  report.lim_norm = induced_l1_norm(tn, oc).value;
  report.orders_diverge = std::abs(report.empirical_sup_of_limits - report.alpha_bar_of_power) > kDivergence;

  if (report.stochastic) {
    report.method = "spectral";
    const double radius = report.traceless_spectrum.empty() ? 0.0 : report.traceless_spectrum.front();
    if (radius < 1.0 - config.spectral_tolerance) {
      report.rho_bar = RhoBarClass::zero;
      report.rho_bar_value = 0.0;
      report.empirical_agrees = report.empirical_sup_of_limits <= 0.01;
    } else {
      report.rho_bar = RhoBarClass::one;
      report.rho_bar_value = 1.0;
      report.empirical_agrees = report.empirical_sup_of_limits >= 0.99;
    }
  } else {
    report.method = "empirical";
    report.rho_bar = RhoBarClass::estimate;
    report.rho_bar_value = report.empirical_sup_of_limits;
  }
  report.rho = report.lim_norm - report.rho_bar_value;
  return report;
}

AsymptoticCheck asymptotic_inequality_check(const SuperOperator& t, const MixingReport& report,
                                            const Element& x, int horizon) {
  if (!is_self_adjoint(x)) throw DomainError("asymptotic inequality needs a self-adjoint x");
  AsymptoticCheck c;
  c.lhs = trace_norm(power(t, horizon).apply(x));
  c.rhs = report.rho_bar_value * trace_norm(x) + report.rho * std::abs(trace(x).real());
  c.slack = c.rhs - c.lhs;
  return c;
}

SmoothingResult smoothing_from_orbit(const std::vector<Element>& orbit, const std::vector<double>& epsilons,
                                     const SmoothingConfig& config) {
  SmoothingResult result;
  if (orbit.empty()) throw DomainError("smoothing needs a nonempty orbit");
  const AlgebraShape& s = orbit.front().shape();
  result.steps = static_cast<int>(orbit.size()) - 1;

  struct StepSpectrum {
    std::vector<Eigen::VectorXd> eigenvalues;  // descending, per block
    std::vector<Eigen::MatrixXcd> eigenvectors;
    std::vector<std::vector<double>> prefix;
  };
  std::vector<StepSpectrum> spectra(orbit.size());
  parallel_for(orbit.size(), [&](std::size_t n) {
    StepSpectrum& sp = spectra[n];
    for (std::size_t i = 0; i < s.block_count(); ++i) {
      const Eigen::MatrixXcd h = 0.5 * (orbit[n].block(i) + orbit[n].block(i).adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      const int d = static_cast<int>(h.rows());
      sp.eigenvalues.push_back(es.eigenvalues().reverse());
      sp.eigenvectors.push_back(es.eigenvectors().rowwise().reverse());
      std::vector<double> prefix(static_cast<std::size_t>(d) + 1, 0.0);
      for (int k = 0; k < d; ++k) prefix[k + 1] = prefix[k] + sp.eigenvalues.back()(k);
      sp.prefix.push_back(std::move(prefix));
    }
  });
  for (const auto& sp : spectra) {
    for (const auto& ev : sp.eigenvalues) result.c = std::max(result.c, ev.cwiseAbs().maxCoeff());
  }

  std::vector<double> weights;
  for (const auto& b : s.blocks()) weights.push_back(b.weight);

  for (double eps : epsilons) {
    SmoothingRow row;
    row.epsilon = eps;
    row.delta_lower_bound = result.c > 0.0 ? eps / result.c : std::numeric_limits<double>::infinity();
    KnapsackResult best;
    int best_step = -1;
    for (std::size_t n = 0; n < spectra.size(); ++n) {
      KnapsackResult here;
      std::vector<int> ranks(s.block_count(), 0);
      knapsack(spectra[n].prefix, weights, eps, 0, 0.0, 0.0, ranks, here);
      if (here.cost < best.cost) {
        best = here;
        best_step = static_cast<int>(n);
      }
    }
    if (best_step >= 0) {
      row.delta_max = best.cost;
      row.witness_step = best_step;
      Element p = Element::zero(s);
      for (std::size_t i = 0; i < s.block_count(); ++i) {
        const Eigen::MatrixXcd v = spectra[best_step].eigenvectors[i].leftCols(best.ranks[i]);
        p.block(i) = v * v.adjoint();
      }
      row.witness = std::move(p);
    }
    result.table.push_back(std::move(row));
  }

  // Cross-check with random projectors: none may carry epsilon with a trace
  // below the tabulated delta.
  Rng rng(config.seed);
  for (int k = 0; k < config.random_projectors && !result.counter_witness; ++k) {
    std::uniform_int_distribution<std::size_t> pick_block(0, s.block_count() - 1);
    const std::size_t b = pick_block(rng);
    const int d = s.block(b).dim;
    std::uniform_int_distribution<int> pick_rank(1, d);
    const int rank = pick_rank(rng);
    const Eigen::MatrixXcd v = random_unitary(d, rng).leftCols(rank);
    const double tau_p = s.block(b).weight * rank;
    double carried = 0.0;
    for (const Element& w : orbit) {
      carried = std::max(carried, s.block(b).weight * (v.adjoint() * w.block(b) * v).trace().real());
    }
    for (const auto& row : result.table) {
      if (row.delta_max && tau_p < *row.delta_max && carried >= row.epsilon) {
        Element p = Element::zero(s);
        p.block(b) = v * v.adjoint();
        result.counter_witness = std::move(p);
        result.holds = false;
        break;
      }
    }
  }
  return result;
}

SmoothingResult smoothing_check(const SuperOperator& t, const Element& x, const std::vector<double>& epsilons,
                                const SmoothingConfig& config) {
  if (!is_positive(x) || trace_norm(x) == 0.0) throw DomainError("smoothing needs a nonzero positive x");
  std::vector<Element> orbit{x};
  for (int n = 0; n < config.steps; ++n) orbit.push_back(t.apply(orbit.back()).real_part());
  return smoothing_from_orbit(orbit, epsilons, config);
}

DichotomyResult dichotomy(const SuperOperator& t, const Element& y, int horizon) {
  if (!is_positive(y) || trace_norm(y) == 0.0) throw DomainError("dichotomy needs a nonzero positive y");
  const auto& s = t.shape();
  DichotomyResult r;
  r.limit_norm = trace_norm(power(t, horizon).apply(y));
  if (r.limit_norm < kVanish) {
    r.outcome = DichotomyOutcome::vanishes;
    return r;
  }
  const Eigen::MatrixXd p = ergodic_projection(t.transfer());
  Element z = from_coordinates(s, Eigen::VectorXd(p * sa_coordinates(y)));
  const double nz = trace_norm(z);
  if (nz < 1e-10) {
    throw NumericalFailure("orbit persists but its Cesaro limit vanishes", r.limit_norm);
  }
  z = z / nz;
  r.residual = trace_norm(t.apply(z) - z);
  if (r.residual >= kFixedResidual) throw NumericalFailure("fixed element residual above 1e-8", r.residual);
  const double lowest = min_eigenvalue(z);
  if (lowest < -1e-9) throw NumericalFailure("Cesaro limit is not positive", -lowest);
  r.outcome = DichotomyOutcome::fixed_point;
  r.z = std::move(z);
  return r;
}

StrongStabilityReport strong_stability(const SuperOperator& t, const StrongStabilityConfig& config) {
  const auto& s = t.shape();
  StrongStabilityReport r;

  const MixingReport mixing = classify_mixing(t, config.mixing);
  if (mixing.stochastic) {
    r.completely_mixing = mixing.rho_bar == RhoBarClass::zero;
    r.mixing_method = "spectral";
  } else {
    r.completely_mixing = mixing.alpha_bar_of_power <= config.mixing.vanish_tolerance;
    r.mixing_method = "alpha_bar_of_power";
  }

  const Element h = Element::identity(s) / s.total_trace();
  SmoothingConfig sc;
  sc.steps = 50;
  sc.random_projectors = 50;
  sc.seed = derive_seed(config.seed, 0x5300);
  r.smoothing = smoothing_check(t, h, {0.1, 0.5}, sc).holds;

  const DichotomyResult limit = dichotomy(t, h, config.horizon);
  if (limit.outcome == DichotomyOutcome::fixed_point) r.limit_state = limit.z;

  const SuperOperator tn = power(t, config.horizon);
  Rng rng(derive_seed(config.seed, 0x5301));
  ElementRequest request;
  request.kind = ElementKind::self_adjoint;
  for (int k = 0; k < config.samples; ++k) {
    Element x = random_element(s, request, rng);
    x = x / trace_norm(x);
    Element target = Element::zero(s);
    if (r.limit_state) target = trace(x).real() * *r.limit_state;
    r.max_error = std::max(r.max_error, trace_norm(tn.apply(x) - target));
  }
  r.condition_ii = r.max_error < config.tolerance;

  const bool condition_i = r.completely_mixing && r.smoothing;
  if (condition_i && r.condition_ii) {
    r.verdict = StrongVerdict::strongly_stable;
  } else if (!condition_i && !r.condition_ii) {
    r.verdict = StrongVerdict::not_strongly_stable;
  } else {
    r.verdict = StrongVerdict::inconsistent;
  }
  return r;
}

}  // namespace ergomix
