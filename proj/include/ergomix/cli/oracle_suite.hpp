#pragma once
// Agreement suite between the optimizers and the brute-force oracles, run by
// `ergomix oracle-check`. The estimators under test are injectable so that a
// deliberately broken one can be shown to fail the suite.
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergomix/cli/channel_spec.hpp"
#include "ergomix/superop.hpp"

namespace ergomix::cli {

inline constexpr const char* kOracleCheckSchema = "ergomix.oracle_check/1";

struct SuiteEstimators {
  std::function<double(const SuperOperator&)> alpha_bar;
  std::function<double(const SuperOperator&)> induced_norm;
};

/// The library optimizers with the given seed and no internal cross-check.
SuiteEstimators default_estimators(std::uint64_t seed);

struct SuiteConfig {
  std::uint64_t seed = 0;
  /// Seeded instances per constructor family.
  int instances = 50;
  int classical_chains = 100;
  /// Instances per family that also get the sampled lower-bound check.
  int lower_bound_instances = 5;
  double agreement_tolerance = 1e-4;
  double classical_tolerance = 1e-6;
  double lower_bound_slack = 1e-6;
};

struct SuiteCase {
  std::string family;
  int instance = 0;
  std::string quantity;
  std::string oracle;
  double estimate = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  /// estimate - reference for one-sided checks is reported as a deficit.
  double gap = 0.0;
  bool pass = true;
  Json spec;
};

struct FamilySummary {
  std::string family;
  std::string quantity;
  std::string oracle;
  int cases = 0;
  int failures = 0;
  double max_gap = 0.0;
  double tolerance = 0.0;
};

struct SuiteResult {
  bool pass = true;
  std::vector<FamilySummary> families;
  /// Largest gap relative to its tolerance.
  std::optional<SuiteCase> worst;
};

SuiteResult run_oracle_suite(const SuiteConfig& config, const SuiteEstimators& estimators);

Json to_json(const SuiteResult& r, const SuiteConfig& config);

}  // namespace ergomix::cli
