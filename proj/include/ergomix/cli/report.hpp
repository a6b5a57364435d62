#pragma once
// JSON forms of the analysis results (see schema/report.v1.json). Every
// numeric claim is an object { value, tolerance, method }.
#include <string>

#include "ergomix/cli/channel_spec.hpp"
#include "ergomix/dobrushin.hpp"
#include "ergomix/mixing.hpp"
#include "ergomix/predicates.hpp"
#include "ergomix/stability.hpp"

namespace ergomix::cli {

inline constexpr const char* kReportSchema = "ergomix.report/1";

Json claim(double value, double tolerance, const std::string& method);

Json to_json(const MapPredicates& p, double tolerance);
Json to_json(const ErgodicityReport& r);
Json to_json(const StabilityReport& r, const StabilityConfig& config);
Json to_json(const MixingReport& r, const MixingConfig& config);
Json to_json(const StrongStabilityReport& r, const StrongStabilityConfig& config);

}  // namespace ergomix::cli
