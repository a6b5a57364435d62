#pragma once
// The `ergomix` command line. Exit codes: 0 ok, 1 check failure, 2 input
// error, 3 numerical failure.
#include <ostream>
#include <string>
#include <vector>

#include "ergomix/cli/oracle_suite.hpp"

namespace ergomix::cli {

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kInputError = 2, kNumericalFailure = 3 };

struct AppHooks {
  /// Replaces the estimators checked by oracle-check; empty means the library ones.
  std::function<SuiteEstimators(std::uint64_t seed)> estimators;
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const AppHooks& hooks = {});

}  // namespace ergomix::cli
