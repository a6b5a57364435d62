#include "ergomix/cli/report.hpp"

namespace ergomix::cli {

namespace {

// Slack used by the contraction predicate; mirrors predicates.cpp.
constexpr double kContractionSlack = 1e-8;
constexpr double kFixedPointResidual = 1e-9;
constexpr double kAlphaBarTolerance = 1e-8;

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json claim(double value, double tolerance, const std::string& method) {
  return {{"value", value}, {"tolerance", tolerance}, {"method", method}};
}

Json to_json(const MapPredicates& p, double tolerance) {
  Json positive = {{"status", std::string(to_string(p.positive.status))},
                   {"method", p.positive.method},
                   {"tolerance", tolerance},
                   {"samples", p.positive.samples},
                   {"witness", p.positive.witness ? to_json(*p.positive.witness) : Json(nullptr)}};
  return {{"positive", positive},
          {"completely_positive", {{"value", p.completely_positive}, {"tolerance", tolerance}, {"method", "choi"}}},
          {"stochastic", p.stochastic},
          {"stochastic_defect", claim(p.stochastic_defect, tolerance, "spanning_states")},
          {"induced_norm", claim(p.induced_norm, kContractionSlack, "pure_state_ascent")},
          {"l1_contraction", {{"value", p.l1_contraction}, {"tolerance", kContractionSlack}, {"method", "induced_norm"}}}};
}

Json to_json(const ErgodicityReport& r) {
  Json oracle = {{"status", std::string(to_string(r.stats.oracle))},
                 {"value", optional_json(r.stats.oracle_value)},
                 {"tolerance", OptimizerConfig{}.oracle_agreement_tolerance},
                 {"method", "oracle_reference"}};
  return {{"alpha_bar", claim(r.alpha_bar, r.tolerance, r.method)},
          {"alpha", claim(r.alpha, r.tolerance, "induced_norm_minus_alpha_bar")},
          {"induced_norm", claim(r.induced_norm, r.tolerance, "pure_state_ascent")},
          {"stochastic", r.stochastic},
          {"traceless_search",
           r.traceless_search_value ? claim(*r.traceless_search_value, r.tolerance, "traceless_search") : Json(nullptr)},
          {"certificate", {{"u", to_json(r.u)}, {"v", to_json(r.v)}}},
          {"optimizer",
           {{"restarts", r.stats.restarts},
            {"iterations", r.stats.iterations},
            {"best_second_gap", r.stats.best_second_gap},
            {"oracle", oracle}}}};
}

Json to_json(const StabilityReport& r, const StabilityConfig& config) {
  Json tested = Json::array();
  for (const auto& [n, a] : r.tested) tested.push_back({{"n", n}, {"alpha_bar", a}});
  Json fixed = nullptr;
  if (r.fixed_point) {
    fixed = {{"state", to_json(r.fixed_point->state)},
             {"fixed_space_dim", r.fixed_point->fixed_space_dim},
             {"unique", r.fixed_point->unique},
             {"residual", claim(r.fixed_point->residual, kFixedPointResidual, "ergodic_projection")}};
  }
  Json points = Json::array();
  for (const AuditPoint& p : r.audit.trace) {
    points.push_back({{"n", p.n}, {"distance", p.distance}, {"bound", p.bound}});
  }
  return {{"verdict", std::string(to_string(r.verdict))},
          {"n_max", r.n_max},
          {"rho_min", config.rho_min},
          {"n0", optional_json(r.n0)},
          {"gamma", r.gamma ? claim(*r.gamma, kAlphaBarTolerance, "alpha_bar_of_power") : Json(nullptr)},
          {"tested", tested},
          {"fixed_point", fixed},
          {"audit",
           {{"horizon", config.horizon},
            {"slack", config.bound_slack},
            {"method", "induced_norm_of_difference"},
            {"points", points},
            {"violations", r.audit.violations}}}};
}

Json to_json(const MixingReport& r, const MixingConfig& config) {
  const double tol = r.method == "spectral" ? config.spectral_tolerance : config.vanish_tolerance;
  return {{"rho_bar_class", std::string(to_string(r.rho_bar))},
          {"rho_bar", claim(r.rho_bar_value, tol, r.method)},
          {"lim_norm", claim(r.lim_norm, config.vanish_tolerance, "induced_norm_at_horizon")},
          {"rho", claim(r.rho, config.vanish_tolerance, "lim_norm_minus_rho_bar")},
          {"traceless_spectrum", r.traceless_spectrum},
          {"stochastic", r.stochastic},
          {"empirical",
           {{"horizon", config.horizon},
            {"pairs", config.empirical_pairs},
            {"sup_of_limits", r.empirical_sup_of_limits},
            {"alpha_bar_of_power", r.alpha_bar_of_power},
            {"orders_diverge", r.orders_diverge},
            {"agrees", r.empirical_agrees}}}};
}

Json to_json(const StrongStabilityReport& r, const StrongStabilityConfig& config) {
  return {{"verdict", std::string(to_string(r.verdict))},
          {"completely_mixing", r.completely_mixing},
          {"mixing_method", r.mixing_method},
          {"smoothing", r.smoothing},
          {"limit_state", r.limit_state ? to_json(*r.limit_state) : Json(nullptr)},
          {"condition_ii", r.condition_ii},
          {"max_error", claim(r.max_error, config.tolerance, "sampled_orbits")},
          {"horizon", config.horizon},
          {"samples", config.samples}};
}

}  // namespace ergomix::cli
