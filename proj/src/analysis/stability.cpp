#include "ergomix/stability.hpp"

#include <algorithm>
#include <cmath>

#include "ergomix/basis.hpp"
#include "ergomix/errors.hpp"
#include "ergomix/predicates.hpp"

namespace ergomix {

namespace {

constexpr double kKernelTolerance = 1e-8;
constexpr double kFixedPointResidual = 1e-9;

Eigen::MatrixXd rank_one_transfer(const Element& y) {
  return sa_coordinates(y) * identity_coordinates(y.shape()).transpose();
}

}  // namespace

std::string_view to_string(StabilityVerdict v) {
  return v == StabilityVerdict::uniformly_stable ? "uniformly_stable" : "undetermined";
}

Eigen::MatrixXd ergodic_projection(const Eigen::MatrixXd& a, int* kernel_dim) {
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXd shifted = a - Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kKernelTolerance * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int k = 0;
  while (k < sv.size() && sv(sv.size() - 1 - k) <= cutoff) ++k;
  if (kernel_dim) *kernel_dim = k;
  if (k == 0) return Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd r = svd.matrixV().rightCols(k);
  const Eigen::MatrixXd l = svd.matrixU().rightCols(k);
  return r * (l.transpose() * r).inverse() * l.transpose();
}

FixedPointResult fixed_point(const SuperOperator& t) {
  if (!is_stochastic(t)) throw DomainError("fixed_point needs a stochastic map");
  const auto& s = t.shape();
  int dim = 0;
  const Eigen::MatrixXd p = ergodic_projection(t.transfer(), &dim);
  const Element mixed = Element::identity(s) / s.total_trace();
  Element y = from_coordinates(s, Eigen::VectorXd(p * sa_coordinates(mixed)));
  const double tr = trace(y).real();
  if (!(tr > 1e-12)) throw NumericalFailure("fixed-point projection lost the trace", std::abs(1.0 - tr));
  y = y / tr;
  const double residual = trace_norm(t.apply(y) - y);
  if (residual >= kFixedPointResidual) {
    throw NumericalFailure("fixed point residual above 1e-9", residual);
  }
  const double lowest = min_eigenvalue(y);
  if (lowest < -kFixedPointResidual) {
    throw NumericalFailure("fixed point is not positive", -lowest);
  }
  return {std::move(y), dim, dim == 1, residual};
}

ConvergenceAudit convergence_audit(const SuperOperator& t, const Element& y, int n0, double gamma,
                                   const StabilityConfig& config) {
  if (n0 < 1) throw DomainError("n0 must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in [0, 1)");
  const auto& s = t.shape();
  const Eigen::MatrixXd ty = rank_one_transfer(y);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(s.real_dim(), s.real_dim());
  ConvergenceAudit audit;
  for (int n = 0; n <= config.horizon; ++n) {
    if (n > 0) power = t.transfer() * power;
    const SuperOperator diff(s, power - ty);
    OptimizerConfig oc = config.optimizer;
    oc.seed = derive_seed(config.optimizer.seed, static_cast<std::uint64_t>(n));
    const double distance = induced_l1_norm(diff, oc).value;
    const double bound = 2.0 * std::pow(gamma, n / n0);
    audit.trace.push_back({n, distance, bound});
    if (distance > bound + config.bound_slack) audit.violations.push_back(n);
    if (distance < config.stop_distance) break;
  }
  return audit;
}

StabilityReport detect_uniform_stability(const SuperOperator& t, const StabilityConfig& config) {
  if (config.n_max < 1) throw DomainError("n_max must be >= 1");
  if (!(config.rho_min > 0.0)) throw DomainError("rho_min must be positive");
  if (!is_stochastic(t)) throw DomainError("uniform stability is only decided for stochastic maps");

  StabilityReport report;
  report.n_max = config.n_max;
  const double threshold = 1.0 - config.rho_min;
  auto alpha_bar_of_power = [&](int n) {
    OptimizerConfig oc = config.optimizer;
    oc.seed = derive_seed(config.optimizer.seed, 0x5000 + static_cast<std::uint64_t>(n));
    const double a = pure_pair_alpha_bar(power(t, n), oc);
    report.tested.emplace_back(n, a);
    return a;
  };

  std::vector<int> schedule;
  for (int n = 1; n <= config.n_max; n *= 2) schedule.push_back(n);
  if (schedule.back() != config.n_max) schedule.push_back(config.n_max);

  int previous = 0;
  for (int n : schedule) {
    double a = alpha_bar_of_power(n);
    if (a <= threshold) {
      // alpha_bar(T^n) is non-increasing in n, so the first success below n
      // is the smallest admissible n0.
      int n0 = n;
      for (int m = previous + 1; m < n; ++m) {
        const double am = alpha_bar_of_power(m);
        if (am <= threshold) {
          n0 = m;
          a = am;
          break;
        }
      }
      report.verdict = StabilityVerdict::uniformly_stable;
      report.n0 = n0;
      report.gamma = a;
      break;
    }
    previous = n;
  }

  if (report.verdict == StabilityVerdict::uniformly_stable) {
    report.fixed_point = fixed_point(t);
    report.audit = convergence_audit(t, report.fixed_point->state, *report.n0, *report.gamma, config);
  }
  return report;
}

}  // namespace ergomix
