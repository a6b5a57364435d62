#include "ergomix/predicates.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ergomix/dobrushin.hpp"

namespace ergomix {

namespace {

constexpr double kContractionSlack = 1e-8;

template <bool Transposed>
Eigen::MatrixXcd choi_impl(const SuperOperator& t) {
  const auto& s = t.shape();
  const int n = s.hilbert_dim();
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (std::size_t b = 0; b < s.block_count(); ++b) {
    const int o = s.block_offset(b);
    const int d = s.block(b).dim;
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        const Eigen::MatrixXcd image = t.apply(Element::matrix_unit(s, b, r, c)).dense();
        const int row = Transposed ? o + c : o + r;
        const int col = Transposed ? o + r : o + c;
        j.block(row * n, col * n, n, n) += image;
      }
    }
  }
  return j;
}

bool psd(const Eigen::MatrixXcd& m, double tol) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

std::vector<Element> spanning_states(const AlgebraShape& s) {
  std::vector<Element> out;
  for (std::size_t b = 0; b < s.block_count(); ++b) {
    const int d = s.block(b).dim;
    const double w = s.block(b).weight;
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
      e(j) = 1.0;
      out.push_back(Element::rank_one_projector(s, b, e) / w);
      for (int k = j + 1; k < d; ++k) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(j) = 1.0;
        v(k) = 1.0;
        out.push_back(Element::rank_one_projector(s, b, v) / w);
        v(k) = Complex(0.0, 1.0);
        out.push_back(Element::rank_one_projector(s, b, v) / w);
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Certainty c) {
  switch (c) {
    case Certainty::certified: return "certified";
    case Certainty::refuted: return "refuted";
    case Certainty::unknown: return "unknown";
  }
  return "unknown";
}

Eigen::MatrixXcd choi_matrix(const SuperOperator& t) { return choi_impl<false>(t); }

Eigen::MatrixXcd co_choi_matrix(const SuperOperator& t) { return choi_impl<true>(t); }

double stochastic_defect(const SuperOperator& t) {
  double worst = 0.0;
  for (const Element& x : spanning_states(t.shape())) {
    worst = std::max(worst, std::abs(trace(t.apply(x)) - trace(x)));
  }
  return worst;
}

PositivityVerdict check_positivity(const SuperOperator& t, const PredicateConfig& config) {
  PositivityVerdict verdict;
  if (psd(choi_matrix(t), config.tolerance)) {
    verdict.status = Certainty::certified;
    verdict.method = "choi";
    return verdict;
  }
  if (psd(co_choi_matrix(t), config.tolerance)) {
    verdict.status = Certainty::certified;
    verdict.method = "co_choi";
    return verdict;
  }
  // Pure states are the extreme rays of the positive cone, so sampling them
  // is enough; the fixed spanning family goes first.
  verdict.method = "sampling";
  const auto& s = t.shape();
  auto refutes = [&](const Element& x) {
    const Element y = t.apply(x);
    const double scale = std::max(1.0, operator_norm(y));
    return min_eigenvalue(y.real_part()) < -config.tolerance * scale ||
           !is_self_adjoint(y, config.tolerance * scale);
  };
  for (const Element& x : spanning_states(s)) {
    ++verdict.samples;
    if (refutes(x)) {
      verdict.status = Certainty::refuted;
      verdict.witness = x;
      return verdict;
    }
  }
  Rng rng(config.seed);
  ElementRequest request;
  request.kind = ElementKind::pure_state;
  for (int k = 0; k < config.positivity_samples; ++k) {
    const Element x = random_element(s, request, rng);
    ++verdict.samples;
    if (refutes(x)) {
      verdict.status = Certainty::refuted;
      verdict.witness = x;
      return verdict;
    }
  }
  verdict.status = Certainty::unknown;
  return verdict;
}

MapPredicates check_predicates(const SuperOperator& t, const PredicateConfig& config) {
  MapPredicates p;
  p.positive = check_positivity(t, config);
  p.completely_positive = p.positive.method == "choi";
  p.stochastic_defect = stochastic_defect(t);
  p.stochastic = p.stochastic_defect <= config.tolerance && p.positive.status != Certainty::refuted;
  OptimizerConfig oc;
  oc.seed = config.seed;
  p.induced_norm = induced_l1_norm(t, oc).value;
  p.l1_contraction = p.induced_norm <= 1.0 + kContractionSlack;
  return p;
}

bool is_stochastic(const SuperOperator& t, double tol) {
  if (stochastic_defect(t) > tol) return false;
  PredicateConfig config;
  config.positivity_samples = 200;
  config.tolerance = tol;
  return check_positivity(t, config).status != Certainty::refuted;
}

}  // namespace ergomix
