#include "ergomix/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ergomix/errors.hpp"

namespace ergomix::oracle {

namespace {

using Vec = Eigen::VectorXcd;

void require_qubit(const SuperOperator& t) {
  const auto& s = t.shape();
  if (s.block_count() != 1 || s.block(0).dim != 2) {
    throw ShapeMismatch("qubit grid oracle needs a single 2-dimensional block");
  }
}

Element outer(const AlgebraShape& shape, std::size_t block, const Vec& psi) {
  Element e = Element::zero(shape);
  e.block(block) = psi * psi.adjoint();
  return e;
}

Vec bloch_vector(double theta, double phi) {
  Vec v(2);
  v(0) = std::cos(theta / 2.0);
  v(1) = std::polar(1.0, phi) * std::sin(theta / 2.0);
  return v;
}

Vec bloch_antipode(double theta, double phi) {
  Vec v(2);
  v(0) = -std::polar(1.0, -phi) * std::sin(theta / 2.0);
  v(1) = std::cos(theta / 2.0);
  return v;
}

// Maximizes f over the sphere: full grid, then repeated local zooms around the
// best few grid points.
template <typename F>
double sphere_grid_max(F&& f, const OracleConfig& config) {
  const int g = std::max(config.grid_density, 8);
  const double pi = std::numbers::pi;
  struct Hit {
    double value, theta, phi;
  };
  std::vector<Hit> hits;
  hits.reserve(static_cast<std::size_t>(g) * g);
  const double dtheta = pi / (g - 1);
  const double dphi = 2.0 * pi / g;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double th = i * dtheta;
      const double ph = j * dphi;
      hits.push_back({f(th, ph), th, ph});
    }
  }
  const std::size_t keep = std::min<std::size_t>(4, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + keep, hits.end(),
                    [](const Hit& a, const Hit& b) { return a.value > b.value; });
  double best = hits.front().value;
  constexpr int kLocal = 21;
  for (std::size_t h = 0; h < keep; ++h) {
    Hit centre = hits[h];
    double wt = 2.0 * dtheta;
    double wp = 2.0 * dphi;
    for (int level = 0; level < config.refine_levels; ++level) {
      Hit local = centre;
      for (int a = 0; a < kLocal; ++a) {
        for (int b = 0; b < kLocal; ++b) {
          const double th = std::clamp(centre.theta - wt + 2.0 * wt * a / (kLocal - 1), 0.0, pi);
          const double ph = centre.phi - wp + 2.0 * wp * b / (kLocal - 1);
          const double v = f(th, ph);
          if (v > local.value) local = {v, th, ph};
        }
      }
      centre = local;
      wt /= 5.0;
      wp /= 5.0;
    }
    best = std::max(best, centre.value);
  }
  return best;
}

Vec gaussian_vector(int d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(d);
  for (int k = 0; k < d; ++k) {
    const double re = n(rng);
    const double im = n(rng);
    v(k) = Complex(re, im);
  }
  return v;
}

struct Pair {
  std::size_t bi = 0, bj = 0;
  Vec psi, phi;
};

void orthonormalize(Pair& p) {
  p.psi.normalize();
  if (p.bi == p.bj) p.phi -= p.psi * p.psi.dot(p.phi);
  const double n = p.phi.norm();
  if (n < 1e-12) {
    p.phi = Vec::Zero(p.phi.size());
    p.phi((p.psi.cwiseAbs().maxCoeff() == std::abs(p.psi(0))) ? 1 : 0) = 1.0;
    if (p.bi == p.bj) p.phi -= p.psi * p.psi.dot(p.phi);
  }
  p.phi.normalize();
}

double pair_value(const SuperOperator& t, const Pair& p) {
  const auto& s = t.shape();
  const Element x = outer(s, p.bi, p.psi) / s.block(p.bi).weight -
                    outer(s, p.bj, p.phi) / s.block(p.bj).weight;
  return trace_norm_svd(t.apply(x)) / 2.0;
}

}  // namespace

double trace_norm_svd(const Element& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.block_count(); ++i) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x.block(i));
    s += x.shape().block(i).weight * svd.singularValues().sum();
  }
  return s;
}

double trace_norm_eigen(const Eigen::MatrixXcd& hermitian, double weight) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hermitian);
  return weight * es.eigenvalues().cwiseAbs().sum();
}

double alpha_bar_grid_qubit(const SuperOperator& t, const OracleConfig& config) {
  require_qubit(t);
  const auto& s = t.shape();
  const double w = s.block(0).weight;
  auto f = [&](double th, double ph) {
    const Element x = (outer(s, 0, bloch_vector(th, ph)) - outer(s, 0, bloch_antipode(th, ph))) / w;
    return trace_norm_svd(t.apply(x)) / 2.0;
  };
  return sphere_grid_max(f, config);
}

double induced_norm_grid_qubit(const SuperOperator& t, const OracleConfig& config) {
  require_qubit(t);
  const auto& s = t.shape();
  const double w = s.block(0).weight;
  auto f = [&](double th, double ph) {
    return trace_norm_svd(t.apply(outer(s, 0, bloch_vector(th, ph)) / w));
  };
  return sphere_grid_max(f, config);
}

double alpha_bar_sampled(const SuperOperator& t, const OracleConfig& config) {
  const auto& s = t.shape();
  Rng rng(config.seed);
  double best = 0.0;
  for (int k = 0; k < config.sample_count; ++k) {
    Element x = Element::zero(s);
    for (std::size_t i = 0; i < s.block_count(); ++i) {
      const int d = s.block(i).dim;
      Eigen::MatrixXcd g(d, d);
      for (int c = 0; c < d; ++c) g.col(c) = gaussian_vector(d, rng);
      x.block(i) = g + g.adjoint();
    }
    const double tr = trace(x).real() / s.total_trace();
    x -= tr * Element::identity(s);
    const double nx = trace_norm_svd(x);
    if (nx < 1e-12) continue;
    best = std::max(best, trace_norm_svd(t.apply(x)) / nx);
  }
  return best;
}

double alpha_bar_random_search(const SuperOperator& t, const OracleConfig& config) {
  const auto& s = t.shape();
  std::vector<std::pair<std::size_t, std::size_t>> block_pairs;
  for (std::size_t i = 0; i < s.block_count(); ++i) {
    for (std::size_t j = 0; j < s.block_count(); ++j) {
      if (i != j || s.block(i).dim >= 2) block_pairs.emplace_back(i, j);
    }
  }
  if (block_pairs.empty()) return 0.0;  // M = C, so X = {0}

  Rng rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, block_pairs.size() - 1);
  struct Scored {
    double value;
    Pair pair;
  };
  constexpr std::size_t kKeep = 4;
  std::vector<Scored> top;
  auto offer = [&](Scored c) {
    top.push_back(std::move(c));
    std::sort(top.begin(), top.end(), [](const Scored& a, const Scored& b) { return a.value > b.value; });
    if (top.size() > kKeep) top.pop_back();
  };
  const int draws = std::max(config.sample_count, static_cast<int>(block_pairs.size()));
  for (int k = 0; k < draws; ++k) {
    Pair p;
    // Visit every block pair once before sampling pairs at random.
    std::tie(p.bi, p.bj) = k < static_cast<int>(block_pairs.size()) ? block_pairs[k] : block_pairs[pick(rng)];
    p.psi = gaussian_vector(s.block(p.bi).dim, rng);
    p.phi = gaussian_vector(s.block(p.bj).dim, rng);
    orthonormalize(p);
    const double v = pair_value(t, p);
    if (top.size() < kKeep || v > top.back().value) offer({v, p});
  }

  std::normal_distribution<double> n01(0.0, 1.0);
  double best = top.front().value;
  constexpr int kPatience = 80;
  for (auto& cand : top) {
    double radius = 0.3;
    for (int stage = 0; stage < 12 * config.refine_levels && radius > 1e-8; ++stage) {
      bool improved = false;
      for (int trial = 0; trial < kPatience; ++trial) {
        Pair q = cand.pair;
        q.psi += radius * gaussian_vector(static_cast<int>(q.psi.size()), rng);
        q.phi += radius * gaussian_vector(static_cast<int>(q.phi.size()), rng);
        orthonormalize(q);
        const double v = pair_value(t, q);
        if (v > cand.value) {
          cand = {v, std::move(q)};
          improved = true;
        }
      }
      if (!improved) radius *= 0.5;
    }
    best = std::max(best, cand.value);
  }
  return best;
}

double classical_dobrushin(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  if (p.cols() != n) throw ShapeMismatch("classical matrix must be square");
  for (int i = 0; i < n; ++i) {
    if (std::abs(p.row(i).sum() - 1.0) > 1e-12) throw DomainError("row does not sum to 1");
  }
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::max(best, 0.5 * (p.row(i) - p.row(j)).cwiseAbs().sum());
    }
  }
  return best;
}

double alpha_bar_reference(const SuperOperator& t, const OracleConfig& config) {
  const auto& s = t.shape();
  if (s.block_count() == 1 && s.block(0).dim == 2) return alpha_bar_grid_qubit(t, config);
  return alpha_bar_random_search(t, config);
}

}  // namespace ergomix::oracle
