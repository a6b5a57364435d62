#include "ergomix/cli/app.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "ergomix/cli/report.hpp"
#include "ergomix/errors.hpp"
#include "ergomix/shift_demo.hpp"

#ifndef ERGOMIX_VERSION
#define ERGOMIX_VERSION "0.0.0"
#endif

namespace ergomix::cli {

namespace {

inline constexpr const char* kShiftDemoSchema = "ergomix.shift_demo/1";
const std::vector<std::string> kPhases{"predicates", "dobrushin", "stability", "mixing"};

struct AnalyzeOptions {
  std::string spec_path;
  std::string out_path;
  std::vector<std::string> only;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int nmax = 8;
  int horizon = 200;
  bool timings = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* nmax_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
};

struct ShiftOptions {
  std::vector<int> dims;
  std::vector<double> epsilons{0.5};
  std::string csv_dir;
  std::string out_path;
};

struct OracleOptions {
  std::uint64_t seed = 0;
  int instances = 50;
  std::string out_path;
};

class ToleranceGuard {
 public:
  explicit ToleranceGuard(double tol) : previous_(default_tolerance()) { set_default_tolerance(tol); }
  ~ToleranceGuard() { set_default_tolerance(previous_); }
  ToleranceGuard(const ToleranceGuard&) = delete;
  ToleranceGuard& operator=(const ToleranceGuard&) = delete;

 private:
  double previous_;
};

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json tool_json() { return {{"name", "ergomix"}, {"version", ERGOMIX_VERSION}}; }

void emit(const Json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SpecError("", "cannot open output file " + path);
  f << text;
}

void add_analysis_options(CLI::App* cmd, AnalyzeOptions& o, bool with_only) {
  cmd->add_option("spec", o.spec_path, "Channel spec JSON file ('-' for stdin)")->required();
  cmd->add_option("--out,-o", o.out_path, "Write the report here instead of stdout");
  if (with_only) {
    cmd->add_option("--only", o.only, "Comma-separated phases to run")
        ->delimiter(',')
        ->check(CLI::IsMember(kPhases));
  }
  o.seed_opt = cmd->add_option("--seed", o.seed, "Master seed (default: spec analysis.seed or 0)");
  o.tol_opt = cmd->add_option("--tol", o.tol, "Predicate tolerance")->check(CLI::PositiveNumber);
  o.nmax_opt = cmd->add_option("--nmax", o.nmax, "Largest power tried for uniform stability")->check(CLI::Range(1, 4096));
  o.horizon_opt = cmd->add_option("--horizon", o.horizon, "Power standing in for n -> infinity")->check(CLI::Range(1, 100000));
  cmd->add_flag("--timings", o.timings, "Add wall-clock time per phase (makes output run-dependent)");
}

ChannelSpec load_spec(const std::string& path) {
  if (path == "-") return read_channel_spec(std::cin);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SpecError("", "cannot open spec file " + path);
  return read_channel_spec(f);
}

int run_analysis(AnalyzeOptions o, std::vector<std::string> phases, std::ostream& out) {
  const ChannelSpec spec = load_spec(o.spec_path);
  const SuperOperator& t = spec.map;
  const std::uint64_t seed = o.seed_opt->count() ? o.seed : spec.analysis.seed.value_or(0);
  const double tol = o.tol_opt->count() ? o.tol : spec.analysis.tolerance.value_or(1e-9);
  const int nmax = o.nmax_opt->count() ? o.nmax : spec.analysis.n_max.value_or(8);
  const int horizon = o.horizon_opt->count() ? o.horizon : spec.analysis.horizon.value_or(200);
  const ToleranceGuard guard(tol);

  auto wants = [&](const std::string& p) { return std::find(phases.begin(), phases.end(), p) != phases.end(); };

  Json doc;
  doc["schema"] = kReportSchema;
  doc["tool"] = tool_json();
  doc["seed"] = seed;
  doc["spec"] = spec.source;
  doc["phases"] = phases;
  Json timings = Json::object();
  std::vector<std::string> failures;

  auto timed = [&](const std::string& name, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto end = std::chrono::steady_clock::now();
    timings[name] = std::chrono::duration<double, std::milli>(end - start).count();
  };

  OptimizerConfig optimizer;
  optimizer.seed = seed;

  if (wants("predicates")) {
    timed("predicates", [&] {
      PredicateConfig pc;
      pc.seed = seed;
      pc.tolerance = tol;
      doc["predicates"] = to_json(check_predicates(t, pc), tol);
    });
  }
  if (wants("dobrushin")) {
    timed("dobrushin", [&] {
      const ErgodicityReport r = dobrushin_alpha_bar(t, optimizer);
      if (r.stats.oracle == OracleAgreement::disagree) failures.push_back("dobrushin: optimizer and oracle disagree");
      doc["ergodicity"] = to_json(r);
    });
  }
  const bool stochastic = is_stochastic(t, tol);
  if (wants("stability")) {
    timed("stability", [&] {
      StabilityConfig sc;
      sc.n_max = nmax;
      sc.horizon = spec.analysis.audit_horizon.value_or(sc.horizon);
      sc.optimizer.seed = seed;
      if (!stochastic) {
        doc["stability"] = {{"skipped", "map is not stochastic"}};
        return;
      }
      const StabilityReport r = detect_uniform_stability(t, sc);
      if (!r.audit.violations.empty()) failures.push_back("stability: geometric bound violated");
      doc["stability"] = to_json(r, sc);
    });
  }
  if (wants("mixing")) {
    timed("mixing", [&] {
      MixingConfig mc;
      mc.horizon = horizon;
      mc.seed = seed;
      mc.optimizer.seed = seed;
      const MixingReport m = classify_mixing(t, mc);
      if (!m.empirical_agrees) failures.push_back("mixing: empirical estimate contradicts the spectral class");
      doc["mixing"] = to_json(m, mc);
      if (!(induced_l1_norm(t, optimizer).value <= 1.0 + 1e-8)) {
        doc["strong_stability"] = {{"skipped", "map is not an L1 contraction"}};
        return;
      }
      StrongStabilityConfig ssc;
      ssc.seed = seed;
      ssc.mixing = mc;
      const StrongStabilityReport s = strong_stability(t, ssc);
      if (s.verdict == StrongVerdict::inconsistent) failures.push_back("strong_stability: conditions (i) and (ii) disagree");
      doc["strong_stability"] = to_json(s, ssc);
    });
  }
  doc["checks"] = {{"passed", failures.empty()}, {"failures", failures}};
  if (o.timings) doc["timings_ms"] = timings;
  emit(doc, o.out_path, out);
  return failures.empty() ? kOk : kCheckFailure;
}

int run_shift_demo(const ShiftOptions& o, std::ostream& out) {
  if (o.dims.empty()) throw SpecError("/dims", "at least one dimension is required");
  for (int d : o.dims) {
    if (d < 2) throw SpecError("/dims", "every dimension must be >= 2");
  }
  std::ostringstream profile_csv, degeneration_csv;
  profile_csv << "d,n,norm\n";
  degeneration_csv << "d,epsilon,delta_max\n";

  Json profiles = Json::array();
  Json certificates = Json::array();
  for (int d : o.dims) {
    const shift::TruncatedShift t = shift::build(d, shift::TraceMode::unit_weights);
    Json norms = Json::array();
    for (const shift::ProfilePoint& p : shift::escape_profile(t, t.basis_state(0))) {
      norms.push_back(p.norm);
      profile_csv << d << ',' << p.n << ',' << shortest(p.norm) << '\n';
    }
    profiles.push_back({{"d", d}, {"trace_mode", "unit_weights"}, {"initial_state", "e_11"}, {"norms", norms}});
    const shift::NoFixedPointCertificate c = shift::no_fixed_point_certificate(t);
    certificates.push_back({{"d", d},
                            {"value", claim(c.value, 1e-12, "neumann_series")},
                            {"attained", c.attained},
                            {"nilpotency_index", c.nilpotency_index},
                            {"spectral_radius", claim(c.spectral_radius, 0.0, "nilpotency")}});
  }
  Json degeneration = Json::array();
  for (const shift::DegenerationRow& r : shift::smoothing_degeneration(o.dims, o.epsilons)) {
    degeneration.push_back({{"d", r.d},
                            {"epsilon", r.epsilon},
                            {"delta_max", r.delta_max ? Json(*r.delta_max) : Json(nullptr)},
                            {"witness_bound", 1.0 / r.d},
                            {"trace_mode", "normalized"},
                            {"method", "ky_fan_knapsack"}});
    degeneration_csv << r.d << ',' << shortest(r.epsilon) << ',' << (r.delta_max ? shortest(*r.delta_max) : "")
                     << '\n';
  }

  Json doc = {{"schema", kShiftDemoSchema},
              {"tool", tool_json()},
              {"dims", o.dims},
              {"epsilons", o.epsilons},
              {"profiles", profiles},
              {"certificates", certificates},
              {"degeneration", degeneration}};
  if (!o.csv_dir.empty()) {
    std::filesystem::create_directories(o.csv_dir);
    const auto dir = std::filesystem::path(o.csv_dir);
    std::ofstream(dir / "escape_profile.csv", std::ios::binary) << profile_csv.str();
    std::ofstream(dir / "degeneration.csv", std::ios::binary) << degeneration_csv.str();
    doc["csv"] = {(dir / "escape_profile.csv").string(), (dir / "degeneration.csv").string()};
  }
  emit(doc, o.out_path, out);
  return kOk;
}

int run_oracle_check(const OracleOptions& o, const AppHooks& hooks, std::ostream& out) {
  SuiteConfig config;
  config.seed = o.seed;
  config.instances = o.instances;
  const SuiteEstimators est = hooks.estimators ? hooks.estimators(o.seed) : default_estimators(o.seed);
  const SuiteResult r = run_oracle_suite(config, est);
  Json doc = to_json(r, config);
  doc["tool"] = tool_json();
  emit(doc, o.out_path, out);
  return r.pass ? kOk : kCheckFailure;
}

Json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const AppHooks& hooks) {
  CLI::App app{"Dobrushin ergodicity coefficients and stability of maps on finite von Neumann algebras", "ergomix"};
  app.set_version_flag("--version", ERGOMIX_VERSION);
  app.require_subcommand(1);

  AnalyzeOptions analyze_opts, dob_opts, stab_opts, mix_opts;
  auto* analyze = app.add_subcommand("analyze", "Run predicates, dobrushin, stability and mixing");
  add_analysis_options(analyze, analyze_opts, true);
  auto* dob = app.add_subcommand("dobrushin", "Dobrushin coefficient only");
  add_analysis_options(dob, dob_opts, false);
  auto* stab = app.add_subcommand("stability", "Uniform asymptotic stability only");
  add_analysis_options(stab, stab_opts, false);
  auto* mix = app.add_subcommand("mixing", "Asymptotic coefficient and strong stability only");
  add_analysis_options(mix, mix_opts, false);

  ShiftOptions shift_opts;
  auto* shift_cmd = app.add_subcommand("shift-demo", "Truncated shift family: escape profile and smoothing degeneration");
  shift_cmd->add_option("--dims,-d", shift_opts.dims, "Comma-separated truncation dimensions")->delimiter(',');
  shift_cmd->add_option("--epsilon", shift_opts.epsilons, "Comma-separated smoothing levels")->delimiter(',');
  shift_cmd->add_option("--csv", shift_opts.csv_dir, "Directory for escape_profile.csv and degeneration.csv");
  shift_cmd->add_option("--out,-o", shift_opts.out_path, "Write the JSON summary here instead of stdout");

  OracleOptions oracle_opts;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Optimizer versus brute-force oracle agreement suite");
  oracle_cmd->add_option("--seed", oracle_opts.seed, "Master seed");
  oracle_cmd->add_option("--instances", oracle_opts.instances, "Seeded instances per family")->check(CLI::Range(1, 10000));
  oracle_cmd->add_option("--out,-o", oracle_opts.out_path, "Write the result here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*analyze) {
      auto phases = analyze_opts.only.empty() ? kPhases : analyze_opts.only;
      std::vector<std::string> ordered;
      for (const auto& p : kPhases) {
        if (std::find(phases.begin(), phases.end(), p) != phases.end()) ordered.push_back(p);
      }
      return run_analysis(analyze_opts, ordered, out);
    }
    if (*dob) return run_analysis(dob_opts, {"dobrushin"}, out);
    if (*stab) return run_analysis(stab_opts, {"stability"}, out);
    if (*mix) return run_analysis(mix_opts, {"mixing"}, out);
    if (*shift_cmd) return run_shift_demo(shift_opts, out);
    if (*oracle_cmd) return run_oracle_check(oracle_opts, hooks, out);
  } catch (const SpecError& e) {
    Json j = error_json("input", e.what());
    j["error"]["pointer"] = e.pointer();
    err << j.dump(2) << "\n";
    return kInputError;
  } catch (const NumericalFailure& e) {
    Json j = error_json("numerical_failure", e.what());
    j["error"]["residual"] = e.residual();
    err << j.dump(2) << "\n";
    return kNumericalFailure;
  } catch (const DomainError& e) {
    err << error_json("input", e.what()).dump(2) << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace ergomix::cli
