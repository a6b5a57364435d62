#include "ergomix/cli/oracle_suite.hpp"

#include <algorithm>
#include <cmath>

#include "ergomix/dobrushin.hpp"
#include "ergomix/oracle.hpp"
#include "ergomix/parallel.hpp"
#include "ergomix/shift_demo.hpp"

namespace ergomix::cli {

namespace {

enum class InducedOracle { none, qubit_grid, exact_one };

struct Family {
  Family(std::string n, std::function<SuperOperator(Rng&, int)> m, InducedOracle i = InducedOracle::none,
         std::optional<int> cap = std::nullopt)
      : name(std::move(n)), make(std::move(m)), induced(i), max_instances(cap) {}

  std::string name;
  std::function<SuperOperator(Rng&, int)> make;
  InducedOracle induced = InducedOracle::none;
  /// Cap on instances for families with few distinct members.
  std::optional<int> max_instances;
};

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Eigen::MatrixXd random_stochastic_rows(int n, Rng& rng) {
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(i, j) = -std::log(uniform(rng, 1e-12, 1.0));
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

std::vector<Family> families() {
  std::vector<Family> f;
  f.push_back({"kraus_qubit",
               [](Rng& rng, int k) { return random_kraus_channel(AlgebraShape::single(2), 1 + k % 3, rng); },
               InducedOracle::qubit_grid});
  f.push_back({"kraus_qutrit",
               [](Rng& rng, int k) { return random_kraus_channel(AlgebraShape::single(3), 2 + k % 2, rng); },
               InducedOracle::exact_one});
  f.push_back({"kraus_two_block",
               [](Rng& rng, int k) {
                 return random_kraus_channel(AlgebraShape({{2, 1.0}, {1, 1.0}}), 1 + k % 3, rng);
               },
               InducedOracle::exact_one});
  f.push_back({"kraus_weighted_pair",
               [](Rng& rng, int k) {
                 return random_kraus_channel(AlgebraShape({{2, 0.5}, {2, 1.5}}), 2 + k % 2, rng);
               },
               InducedOracle::exact_one});
  f.push_back({"depolarizing",
               [](Rng& rng, int k) {
                 const int d = 2 + k % 2;
                 return from_depolarizing(AlgebraShape::normalized(d), uniform(rng, -0.5, 1.0));
               }});
  f.push_back({"unitary",
               [](Rng& rng, int k) { return random_unitary_channel(AlgebraShape::single(2 + k % 2), rng); },
               InducedOracle::exact_one});
  f.push_back({"classical",
               [](Rng& rng, int k) { return from_classical(random_stochastic_rows(2 + k % 3, rng)); },
               InducedOracle::exact_one});
  f.push_back({"rank_one",
               [](Rng& rng, int k) {
                 const AlgebraShape s = k % 2 == 0 ? AlgebraShape::single(2, 0.7) : AlgebraShape({{2, 1.0}, {1, 2.0}});
                 ElementRequest state;
                 state.kind = ElementKind::state;
                 ElementRequest sa;
                 sa.kind = ElementKind::self_adjoint;
                 return rank_one(random_element(s, state, rng), random_element(s, sa, rng));
               }});
  f.push_back({"transfer_qubit",
               [](Rng& rng, int) {
                 Eigen::MatrixXd m(4, 4);
                 for (int i = 0; i < 4; ++i) {
                   for (int j = 0; j < 4; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
                 }
                 return from_transfer(AlgebraShape::single(2), m);
               },
               InducedOracle::qubit_grid});
  f.push_back({"shift_demo",
               [](Rng&, int k) {
                 const auto mode = (k / 3) % 2 == 0 ? shift::TraceMode::unit_weights : shift::TraceMode::normalized;
                 return shift::build(2 + k % 3, mode).superoperator();
               },
               InducedOracle::none, 6});
  return f;
}

SuiteCase make_case(const std::string& family, int k, const std::string& quantity, const std::string& oracle,
                    double estimate, double reference, double tolerance, bool one_sided) {
  SuiteCase c;
  c.family = family;
  c.instance = k;
  c.quantity = quantity;
  c.oracle = oracle;
  c.estimate = estimate;
  c.reference = reference;
  c.tolerance = tolerance;
  c.gap = one_sided ? std::max(0.0, reference - estimate) : std::abs(estimate - reference);
  c.pass = one_sided ? c.gap <= tolerance : c.gap < tolerance;
  return c;
}

struct Collector {
  SuiteResult result;
  double worst_ratio = -1.0;

  void add(std::vector<SuiteCase> cases) {
    if (cases.empty()) return;
    FamilySummary s;
    s.family = cases.front().family;
    s.quantity = cases.front().quantity;
    s.oracle = cases.front().oracle;
    s.tolerance = cases.front().tolerance;
    for (auto& c : cases) {
      ++s.cases;
      if (s.oracle.find(c.oracle) == std::string::npos) s.oracle += "+" + c.oracle;
      s.max_gap = std::max(s.max_gap, c.gap);
      if (!c.pass) {
        ++s.failures;
        result.pass = false;
      }
      const double ratio = c.gap / c.tolerance + (c.pass ? 0.0 : 1e300);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        result.worst = std::move(c);
      }
    }
    result.families.push_back(std::move(s));
  }
};

}  // namespace

SuiteEstimators default_estimators(std::uint64_t seed) {
  OptimizerConfig oc;
  oc.seed = seed;
  oc.oracle_cross_check = false;
  return {[oc](const SuperOperator& t) { return dobrushin_alpha_bar(t, oc).alpha_bar; },
          [oc](const SuperOperator& t) { return induced_l1_norm(t, oc).value; }};
}

SuiteResult run_oracle_suite(const SuiteConfig& config, const SuiteEstimators& estimators) {
  Collector out;
  const auto fams = families();
  for (std::size_t fi = 0; fi < fams.size(); ++fi) {
    const Family& fam = fams[fi];
    const int n = std::min(config.instances, fam.max_instances.value_or(config.instances));
    std::vector<SuiteCase> alpha(n), induced(n), lower(n);
    std::vector<char> has_induced(n, 0), has_lower(n, 0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
      const int k = static_cast<int>(idx);
      Rng rng(derive_seed(config.seed, fi * 100000 + idx));
      const SuperOperator t = fam.make(rng, k);
      oracle::OracleConfig oc;
      oc.seed = derive_seed(config.seed, fi * 100000 + idx + 50000);
      const double a = estimators.alpha_bar(t);
      const bool qubit = t.shape().block_count() == 1 && t.shape().block(0).dim == 2;
      alpha[idx] = make_case(fam.name, k, "alpha_bar", qubit ? "qubit_grid" : "random_search", a,
                             oracle::alpha_bar_reference(t, oc), config.agreement_tolerance, false);
      alpha[idx].spec = to_spec(t);
      const InducedOracle io = fam.induced == InducedOracle::qubit_grid && !qubit ? InducedOracle::none : fam.induced;
      if (io != InducedOracle::none) {
        const double ref = io == InducedOracle::qubit_grid ? oracle::induced_norm_grid_qubit(t, oc) : 1.0;
        induced[idx] = make_case(fam.name, k, "induced_norm",
                                 io == InducedOracle::qubit_grid ? "qubit_grid" : "positive_trace_preserving",
                                 estimators.induced_norm(t), ref, config.agreement_tolerance, false);
        induced[idx].spec = alpha[idx].spec;
        has_induced[idx] = 1;
      }
      if (k < config.lower_bound_instances) {
        oracle::OracleConfig sc = oc;
        sc.sample_count = 20000;
        lower[idx] = make_case(fam.name, k, "alpha_bar_lower_bound", "sampled_traceless", a,
                               oracle::alpha_bar_sampled(t, sc), config.lower_bound_slack, true);
        lower[idx].spec = alpha[idx].spec;
        has_lower[idx] = 1;
      }
    });
    out.add(std::move(alpha));
    std::vector<SuiteCase> ind, low;
    for (int k = 0; k < n; ++k) {
      if (has_induced[k]) ind.push_back(std::move(induced[k]));
      if (has_lower[k]) low.push_back(std::move(lower[k]));
    }
    out.add(std::move(ind));
    out.add(std::move(low));
  }

  // Classical consistency against the closed-form coefficient.
  std::vector<SuiteCase> classical(config.classical_chains);
  parallel_for(static_cast<std::size_t>(config.classical_chains), [&](std::size_t idx) {
    const int k = static_cast<int>(idx);
    Eigen::MatrixXd p;
    if (k == 0) {
      p.resize(2, 2);
      p << 0.7, 0.3, 0.2, 0.8;
    } else {
      Rng rng(derive_seed(config.seed, 900000 + idx));
      p = random_stochastic_rows(2 + k % 5, rng);
    }
    const SuperOperator t = from_classical(p);
    classical[idx] = make_case("classical_chain", k, "alpha_bar", "classical_dobrushin", estimators.alpha_bar(t),
                               oracle::classical_dobrushin(p), config.classical_tolerance, false);
    classical[idx].spec = to_spec(t);
  });
  out.add(std::move(classical));
  return out.result;
}

Json to_json(const SuiteResult& r, const SuiteConfig& config) {
  Json fams = Json::array();
  for (const FamilySummary& f : r.families) {
    fams.push_back({{"family", f.family},
                    {"quantity", f.quantity},
                    {"oracle", f.oracle},
                    {"cases", f.cases},
                    {"failures", f.failures},
                    {"max_gap", f.max_gap},
                    {"tolerance", f.tolerance},
                    {"pass", f.failures == 0}});
  }
  Json worst = nullptr;
  if (r.worst) {
    const SuiteCase& c = *r.worst;
    worst = {{"family", c.family},     {"instance", c.instance}, {"quantity", c.quantity},
             {"oracle", c.oracle},     {"estimate", c.estimate}, {"reference", c.reference},
             {"gap", c.gap},           {"tolerance", c.tolerance}, {"pass", c.pass},
             {"spec", c.spec}};
  }
  return {{"schema", kOracleCheckSchema},
          {"seed", config.seed},
          {"instances", config.instances},
          {"pass", r.pass},
          {"families", fams},
          {"worst", worst}};
}

}  // namespace ergomix::cli
