#include "ergomix/dobrushin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ergomix/basis.hpp"
#include "ergomix/errors.hpp"
#include "ergomix/oracle.hpp"
#include "ergomix/parallel.hpp"
#include "ergomix/predicates.hpp"

namespace ergomix {

namespace {

using Vec = Eigen::VectorXcd;

constexpr double kCertificateTolerance = 1e-8;
constexpr double kDistinctOptimum = 1e-9;

Element hermitian(const Element& x) { return x.real_part(); }

// sign(y) = P+ - P- for self-adjoint y; zero eigenvalues map to 0.
Element sign_of(const Element& y) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t i = 0; i < y.block_count(); ++i) {
    const Eigen::MatrixXcd h = 0.5 * (y.block(i) + y.block(i).adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::VectorXd s(h.rows());
    for (int k = 0; k < h.rows(); ++k) {
      const double l = es.eigenvalues()(k);
      s(k) = std::abs(l) <= 1e-14 * scale ? 0.0 : (l > 0 ? 1.0 : -1.0);
    }
    blocks.push_back(es.eigenvectors() * s.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
  }
  return Element(y.shape(), std::move(blocks));
}

struct BlockSpectrum {
  double lo, hi;
  Vec lo_vec, hi_vec;
};

std::vector<BlockSpectrum> extreme_spectra(const Element& b) {
  std::vector<BlockSpectrum> out;
  for (std::size_t i = 0; i < b.block_count(); ++i) {
    const Eigen::MatrixXcd h = 0.5 * (b.block(i) + b.block(i).adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const int d = static_cast<int>(h.rows());
    out.push_back({es.eigenvalues()(0), es.eigenvalues()(d - 1), es.eigenvectors().col(0),
                   es.eigenvectors().col(d - 1)});
  }
  return out;
}

Vec random_vector(int d, Rng& rng) { return random_unit_vector(d, rng); }

// ---------------------------------------------------------------- pairs

struct PairPoint {
  std::size_t bi = 0, bj = 0;
  Vec psi, phi;
};

Element pair_difference(const AlgebraShape& s, const PairPoint& p) {
  return Element::rank_one_projector(s, p.bi, p.psi) / s.block(p.bi).weight -
         Element::rank_one_projector(s, p.bj, p.phi) / s.block(p.bj).weight;
}

double pair_objective(const SuperOperator& t, const PairPoint& p) {
  return trace_norm(t.apply(pair_difference(t.shape(), p))) / 2.0;
}

void make_orthonormal(PairPoint& p) {
  p.psi.normalize();
  if (p.bi == p.bj) {
    p.phi -= p.psi * p.psi.dot(p.phi);
    if (p.phi.norm() < 1e-10) {
      // Any vector orthogonal to psi.
      Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(p.psi.size(), p.psi.size());
      for (int k = 0; k < basis.cols(); ++k) {
        Vec c = basis.col(k) - p.psi * p.psi.dot(basis.col(k));
        if (c.norm() > 0.5) {
          p.phi = c;
          break;
        }
      }
    }
  }
  p.phi.normalize();
}

std::vector<std::pair<std::size_t, std::size_t>> admissible_pairs(const AlgebraShape& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < s.block_count(); ++i) {
    for (std::size_t j = 0; j < s.block_count(); ++j) {
      if (i != j || s.block(i).dim >= 2) out.emplace_back(i, j);
    }
  }
  return out;
}

struct AscentResult {
  double value = 0.0;
  PairPoint point;
  int iterations = 0;
};

AscentResult pair_ascent(const SuperOperator& t, PairPoint p, const OptimizerConfig& config) {
  const auto& s = t.shape();
  AscentResult r{pair_objective(t, p), p, 0};
  for (int it = 0; it < config.max_iterations; ++it) {
    ++r.iterations;
    const Element y = hermitian(t.apply(pair_difference(s, r.point)));
    const Element b = hermitian(t.apply_dual(sign_of(y)));
    const auto spec = extreme_spectra(b);
    double best = -std::numeric_limits<double>::infinity();
    PairPoint next;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      for (std::size_t j = 0; j < spec.size(); ++j) {
        if (i == j && s.block(i).dim < 2) continue;
        const double gain = spec[i].hi - spec[j].lo;
        if (gain > best) {
          best = gain;
          next = {i, j, spec[i].hi_vec, spec[j].lo_vec};
        }
      }
    }
    if (!(best > -std::numeric_limits<double>::infinity())) break;
    make_orthonormal(next);
    const double value = pair_objective(t, next);
    const double improvement = value - r.value;
    if (improvement <= config.relative_tolerance * std::max(1.0, std::abs(r.value))) {
      if (improvement > 0.0) {
        r.value = value;
        r.point = next;
      }
      break;
    }
    r.value = value;
    r.point = next;
  }
  return r;
}

AscentResult perturb_and_climb(const SuperOperator& t, AscentResult best, const OptimizerConfig& config,
                               Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  auto jitter = [&](Vec v, double radius) {
    for (int k = 0; k < v.size(); ++k) v(k) += radius * Complex(n01(rng), n01(rng));
    return v;
  };
  for (double radius = 0.1; radius > 1e-7; radius *= 0.1) {
    for (int trial = 0; trial < config.perturbation_trials; ++trial) {
      PairPoint q = best.point;
      q.psi = jitter(q.psi, radius);
      q.phi = jitter(q.phi, radius);
      make_orthonormal(q);
      AscentResult c = pair_ascent(t, q, config);
      best.iterations += c.iterations;
      if (c.value > best.value) {
        c.iterations = best.iterations;
        best = std::move(c);
      }
    }
  }
  return best;
}

double second_gap(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double top = *std::max_element(values.begin(), values.end());
  double second = top;
  for (double v : values) {
    if (v < top - kDistinctOptimum && (second == top || v > second)) second = v;
  }
  return top - second;
}

// ---------------------------------------------------------------- induced norm

struct SignedPoint {
  std::size_t block = 0;
  Vec psi;
  double sign = 1.0;
};

Element signed_state(const AlgebraShape& s, const SignedPoint& p) {
  return p.sign * (Element::rank_one_projector(s, p.block, p.psi) / s.block(p.block).weight);
}

struct InducedAscent {
  double value = 0.0;
  SignedPoint point;
};

InducedAscent induced_ascent(const SuperOperator& t, SignedPoint p, const OptimizerConfig& config) {
  const auto& s = t.shape();
  InducedAscent r{trace_norm(t.apply(signed_state(s, p))), p};
  for (int it = 0; it < config.max_iterations; ++it) {
    const Element y = hermitian(t.apply(signed_state(s, r.point)));
    const Element b = hermitian(t.apply_dual(sign_of(y)));
    const auto spec = extreme_spectra(b);
    double best = -1.0;
    SignedPoint next;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (spec[i].hi > best) {
        best = spec[i].hi;
        next = {i, spec[i].hi_vec, 1.0};
      }
      if (-spec[i].lo > best) {
        best = -spec[i].lo;
        next = {i, spec[i].lo_vec, -1.0};
      }
    }
    next.psi.normalize();
    const double value = trace_norm(t.apply(signed_state(s, next)));
    const double improvement = value - r.value;
    if (improvement <= config.relative_tolerance * std::max(1.0, std::abs(r.value))) {
      if (improvement > 0.0) r = {value, next};
      break;
    }
    r = {value, next};
  }
  return r;
}

// Nelder-Mead maximization; f must be scale-invariant or bounded.
template <typename F>
Eigen::VectorXd nelder_mead_max(F&& f, Eigen::VectorXd x0, double step, int max_evals, double& best) {
  const int m = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> pts{x0};
  std::vector<double> vals{f(x0)};
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd p = x0;
    p(k) += step;
    pts.push_back(p);
    vals.push_back(f(p));
  }
  int evals = m + 1;
  std::vector<int> order(m + 1);
  while (evals < max_evals) {
    for (int k = 0; k <= m; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });
    const int hi = order[0], lo = order[m], second_lo = order[m - 1];
    if (vals[hi] - vals[lo] <= 1e-15 * std::max(1.0, std::abs(vals[hi]))) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < m; ++k) centroid += pts[order[k]];
    centroid /= m;
    const Eigen::VectorXd reflected = centroid + (centroid - pts[lo]);
    const double fr = f(reflected);
    ++evals;
    if (fr > vals[hi]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[lo]);
      const double fe = f(expanded);
      ++evals;
      if (fe > fr) {
        pts[lo] = expanded;
        vals[lo] = fe;
      } else {
        pts[lo] = reflected;
        vals[lo] = fr;
      }
    } else if (fr > vals[second_lo]) {
      pts[lo] = reflected;
      vals[lo] = fr;
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (pts[lo] - centroid);
      const double fc = f(contracted);
      ++evals;
      if (fc > vals[lo]) {
        pts[lo] = contracted;
        vals[lo] = fc;
      } else {
        for (int k = 0; k <= m; ++k) {
          if (k == hi) continue;
          pts[k] = pts[hi] + 0.5 * (pts[k] - pts[hi]);
          vals[k] = f(pts[k]);
          ++evals;
        }
      }
    }
  }
  int arg = 0;
  for (int k = 1; k <= m; ++k) {
    if (vals[k] > vals[arg]) arg = k;
  }
  best = vals[arg];
  return pts[arg];
}

}  // namespace

std::string_view to_string(OracleAgreement a) {
  switch (a) {
    case OracleAgreement::not_run: return "not_run";
    case OracleAgreement::agree: return "agree";
    case OracleAgreement::disagree: return "disagree";
  }
  return "not_run";
}

InducedNormResult induced_l1_norm(const SuperOperator& t, const OptimizerConfig& config) {
  const auto& s = t.shape();
  const int restarts = std::max(1, config.restarts);
  std::vector<InducedAscent> results(static_cast<std::size_t>(restarts));
  parallel_for(results.size(), [&](std::size_t r) {
    Rng rng(derive_seed(config.seed, r));
    SignedPoint p;
    p.block = r % s.block_count();
    p.psi = random_vector(s.block(p.block).dim, rng);
    results[r] = induced_ascent(t, p, config);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].value > results[best].value) best = r;
  }
  InducedAscent top = results[best];
  // Local random refinement around the winner.
  Rng rng(derive_seed(config.seed, 0xA11CE));
  std::normal_distribution<double> n01(0.0, 1.0);
  for (double radius = 0.1; radius > 1e-7; radius *= 0.1) {
    for (int trial = 0; trial < config.perturbation_trials; ++trial) {
      SignedPoint q = top.point;
      for (int k = 0; k < q.psi.size(); ++k) q.psi(k) += radius * Complex(n01(rng), n01(rng));
      q.psi.normalize();
      const InducedAscent c = induced_ascent(t, q, config);
      if (c.value > top.value) top = c;
    }
  }
  return {top.value, signed_state(s, top.point)};
}

double pure_pair_alpha_bar(const SuperOperator& t, const OptimizerConfig& config, Element* u, Element* v,
                           OptimizerStats* stats) {
  const auto& s = t.shape();
  const auto pairs = admissible_pairs(s);
  if (pairs.empty()) {
    // M = C: X = {0} and the sup is over an empty set.
    if (u) *u = Element::identity(s) / s.total_trace();
    if (v) *v = Element::identity(s) / s.total_trace();
    if (stats) *stats = {};
    return 0.0;
  }
  const int restarts = std::max(1, config.restarts);
  std::vector<AscentResult> results(static_cast<std::size_t>(restarts));
  parallel_for(results.size(), [&](std::size_t r) {
    Rng rng(derive_seed(config.seed, r));
    PairPoint p;
    std::tie(p.bi, p.bj) = pairs[r % pairs.size()];
    p.psi = random_vector(s.block(p.bi).dim, rng);
    p.phi = random_vector(s.block(p.bj).dim, rng);
    make_orthonormal(p);
    results[r] = pair_ascent(t, p, config);
  });
  std::size_t best = 0;
  std::vector<double> values;
  int iterations = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    values.push_back(results[r].value);
    iterations += results[r].iterations;
    if (results[r].value > results[best].value) best = r;
  }
  Rng rng(derive_seed(config.seed, 0xBEEF));
  AscentResult top = results[best];
  const int before = top.iterations;
  top = perturb_and_climb(t, top, config, rng);
  iterations += top.iterations - before;

  if (u) *u = Element::rank_one_projector(s, top.point.bi, top.point.psi) / s.block(top.point.bi).weight;
  if (v) *v = Element::rank_one_projector(s, top.point.bj, top.point.phi) / s.block(top.point.bj).weight;
  if (stats) {
    stats->restarts = restarts;
    stats->iterations = iterations;
    stats->best_second_gap = second_gap(values);
  }
  return top.value;
}

double traceless_search_alpha_bar(const SuperOperator& t, int samples, std::uint64_t seed, Element* argmax) {
  const auto& s = t.shape();
  const Eigen::MatrixXd q = traceless_basis(s);
  const int m = static_cast<int>(q.cols());
  if (m == 0) {
    if (argmax) *argmax = Element::zero(s);
    return 0.0;
  }
  const Eigen::MatrixXd tq = t.transfer() * q;
  auto ratio = [&](const Eigen::VectorXd& g) {
    const double nx = trace_norm(from_coordinates(s, Eigen::VectorXd(q * g)));
    if (nx <= 0.0) return 0.0;
    return trace_norm(from_coordinates(s, Eigen::VectorXd(tq * g))) / nx;
  };

  Rng rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  auto gaussian = [&]() {
    Eigen::VectorXd g(m);
    for (int k = 0; k < m; ++k) g(k) = n01(rng);
    return g;
  };
  struct Cand {
    double value;
    Eigen::VectorXd g;
  };
  // The draws are split into groups and the best draw of each group is
  // refined, which keeps the refined starts spread out.
  constexpr int kGroups = 8;
  const int per_group = std::max(1, samples / kGroups);
  std::vector<Cand> top;
  for (int group = 0; group < kGroups; ++group) {
    Cand c{-1.0, Eigen::VectorXd()};
    for (int k = 0; k < per_group; ++k) {
      Eigen::VectorXd g = gaussian().normalized();
      const double r = ratio(g);
      if (r > c.value) c = {r, std::move(g)};
    }
    top.push_back(std::move(c));
  }
  constexpr int kPatience = 60;
  for (auto& c : top) {
    double radius = 0.3;
    while (radius > 1e-6) {
      bool improved = false;
      for (int trial = 0; trial < kPatience; ++trial) {
        Eigen::VectorXd g = (c.g + radius * gaussian()).normalized();
        const double r = ratio(g);
        if (r > c.value) {
          c = {r, std::move(g)};
          improved = true;
        }
      }
      if (!improved) radius *= 0.5;
    }
    // Simplex polish from shrinking initial sizes.
    for (double step = 0.05; step > 1e-7; step *= 0.1) {
      for (int round = 0; round < 4; ++round) {
        double value = 0.0;
        Eigen::VectorXd g = nelder_mead_max(ratio, c.g, step, 200 * m, value).normalized();
        value = ratio(g);
        if (!(value > c.value)) break;
        c = {value, std::move(g)};
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < top.size(); ++k) {
    if (top[k].value > top[best].value) best = k;
  }
  if (argmax) *argmax = from_coordinates(s, Eigen::VectorXd(q * top[best].g));
  return top[best].value;
}

ErgodicityReport dobrushin_alpha_bar(const SuperOperator& t, const OptimizerConfig& config) {
  const auto& s = t.shape();
  Element u = Element::zero(s);
  Element v = Element::zero(s);
  OptimizerStats stats;
  double alpha_bar = pure_pair_alpha_bar(t, config, &u, &v, &stats);
  std::string method = "pure_pair_ascent";

  const bool stochastic = is_stochastic(t);
  std::optional<double> traceless_value;
  if (!stochastic) {
    Element x = Element::zero(s);
    traceless_value =
        traceless_search_alpha_bar(t, config.traceless_samples, derive_seed(config.seed, 0x7ACE), &x);
    if (*traceless_value > alpha_bar) {
      const MeanZeroSplit split = mean_zero_split(x, Element::zero(s));
      u = split.u;
      v = split.v;
      alpha_bar = trace_norm(t.apply(u - v)) / trace_norm(u - v);
      method = "traceless_search";
    }
  }

  if (config.oracle_cross_check && s.real_dim() <= config.oracle_max_real_dim && s.real_dim() > 1) {
    oracle::OracleConfig oc;
    oc.seed = derive_seed(config.seed, 0x0AC1E);
    oc.grid_density = 90;
    oc.sample_count = 2000;
    oc.refine_levels = 5;
    const double reference = oracle::alpha_bar_reference(t, oc);
    stats.oracle_value = reference;
    stats.oracle = std::abs(reference - alpha_bar) < config.oracle_agreement_tolerance
                       ? OracleAgreement::agree
                       : OracleAgreement::disagree;
  }

  const double induced = std::max(induced_l1_norm(t, config).value, alpha_bar);
  const double alpha = induced - alpha_bar;
  return ErgodicityReport{
      .alpha_bar = alpha_bar,
      .alpha = alpha,
      .induced_norm = alpha_bar + alpha,
      .u = std::move(u),
      .v = std::move(v),
      .stats = stats,
      .method = std::move(method),
      .tolerance = kCertificateTolerance,
      .stochastic = stochastic,
      .traceless_search_value = traceless_value,
  };
}

InequalityCheck check_fundamental_inequality(const SuperOperator& t, const ErgodicityReport& report,
                                             const Element& x) {
  if (!is_self_adjoint(x)) throw DomainError("fundamental inequality needs a self-adjoint x");
  InequalityCheck c;
  c.lhs = trace_norm(t.apply(x));
  c.rhs = report.alpha_bar * trace_norm(x) + report.alpha * std::abs(trace(x).real());
  c.slack = c.rhs - c.lhs;
  return c;
}

InequalityCheck check_fundamental_inequality(const SuperOperator& t, const Element& x) {
  return check_fundamental_inequality(t, dobrushin_alpha_bar(t), x);
}

MeanZeroSplit mean_zero_split(const Element& x, const Element& y) {
  if (!(x.shape() == y.shape())) throw ShapeMismatch("x and y live on different algebras");
  const Element diff = (x - y).real_part();
  if (!is_self_adjoint(x - y)) throw DomainError("x - y must be self-adjoint");
  if (std::abs(trace(diff)) > 1e-10) throw DomainError("tau(x - y) must vanish");
  const double norm = trace_norm(diff);
  if (norm == 0.0) throw DomainError("x and y coincide");
  const JordanParts parts = jordan_decompose(diff);
  const double tp = trace(parts.positive).real();
  const double tn = trace(parts.negative).real();
  return {parts.positive / tp, parts.negative / tn, norm / 2.0};
}

PurePairEqualityResult pure_pair_equality_gap(const SuperOperator& t, const OptimizerConfig& config) {
  PurePairEqualityResult r;
  r.stochastic = is_stochastic(t);
  r.pure_pair_value = pure_pair_alpha_bar(t, config);
  r.traceless_value =
      traceless_search_alpha_bar(t, config.traceless_samples, derive_seed(config.seed, 0x7ACE));
  r.gap = std::abs(r.pure_pair_value - r.traceless_value);
  return r;
}

}  // namespace ergomix
