// Command-line driver: validate scenarios, analyze stability, run the
// continuity-method solver, evaluate the Bogomolov inequality, and self-test
// the calculus kernel.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ymh/config.hpp"
#include "ymh/selftest.hpp"

using namespace ymh;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  int grid = 0;         // override
  double eps_min = 0;   // override
  bool csv = false;
  int jobs = 1;
};

void apply_overrides(ScenarioConfig& cfg, const Options& opt) {
  if (opt.grid > 0) cfg.grid = opt.grid;
  if (opt.eps_min > 0) cfg.solver.eps_min = opt.eps_min;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ConfigError, "cannot write " + path);
  out << text;
}

void emit_report(const ScenarioConfig& cfg, const json& payload, double seconds) {
  json full{{"report", payload}, {"timing", {{"wall_time_sec", seconds}}}};
  std::cout << full.dump(2) << std::endl;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/" + cfg.name + "_report.json", full.dump(2));
  }
}

int cmd_validate(const ScenarioConfig& cfg) {
  bool ok = true;
  auto line = [&](bool pass, const std::string& what) {
    std::cout << (pass ? "[ok]   " : "[fail] ") << what << "\n";
    ok = ok && pass;
  };
  try {
    AffineTorus torus = build_torus(cfg);
    line(true, "torus valid (dim " + std::to_string(cfg.dim) + ", grid " +
                   std::to_string(cfg.grid) + ")");
    double gd = gauduchon_defect(torus);
    line(gd < 1e-8, "gauduchon_defect = " + std::to_string(gd));
    if (cfg.dim >= 2) {
      double ad = astheno_defect(torus);
      line(ad < 1e-8 || cfg.dim == 2, "astheno_defect = " + std::to_string(ad));
    }
    FlatHiggsBundle bundle = build_bundle(cfg);
    line(true, "bundle valid (rank " + std::to_string(cfg.rank) + ")");
    for (double t : {0.0, 1.0}) {
      double d = family_curvature_defect(bundle, t);
      line(d < 1e-10,
           "family_curvature_defect(t=" + std::to_string(t) + ") = " +
               std::to_string(d));
    }
    (void)build_h_init(cfg);
    line(true, "h_init valid");
  } catch (const Error& e) {
    line(false, e.what());
  }
  return ok ? 0 : 1;
}

json analysis_payload(const ScenarioConfig& cfg, const AffineTorus& torus,
                      const FlatHiggsBundle& bundle) {
  MetricField h = MetricField::identity(torus.shape(), bundle.rank());
  StabilityReport stab = stability_verdict(bundle, torus);
  auto simple = is_simple(bundle);
  return json{{"scenario", cfg.raw},
              {"gamma", einstein_factor(bundle, torus)},
              {"degree", degree(bundle, torus, h)},
              {"slope", slope(bundle, torus, h)},
              {"simple", simple.simple},
              {"commutant_dim", simple.commutant_dim},
              {"gauduchon_defect", gauduchon_defect(torus)},
              {"stability", stability_to_json(stab)}};
}

int cmd_analyze(const ScenarioConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  AffineTorus torus = build_torus(cfg);
  FlatHiggsBundle bundle = build_bundle(cfg);
  json payload = analysis_payload(cfg, torus, bundle);
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "verdict: " << payload["stability"]["verdict"].get<std::string>()
            << "  slope: " << payload["slope"].get<double>()
            << "  gamma: " << payload["gamma"].get<double>() << "\n";
  emit_report(cfg, payload, dt);
  return 0;
}

int cmd_solve(const ScenarioConfig& cfg, bool csv) {
  auto t0 = std::chrono::steady_clock::now();
  AffineTorus torus = build_torus(cfg);
  FlatHiggsBundle bundle = build_bundle(cfg);
  MetricField h_init = build_h_init(cfg);

  SolverTrace trace = continuity_solve(bundle, torus, cfg.solver, &h_init);
  json payload = analysis_payload(cfg, torus, bundle);
  payload["solver"] = trace_to_json(trace);

  if (trace.status == SolverStatus::blowup) {
    try {
      DestabilizerReport d = extract_destabilizer(bundle, torus, trace);
      payload["destabilizer"] = destabilizer_to_json(d);
    } catch (const Error& e) {
      payload["destabilizer"] = json{{"error", e.what()}};
    }
  } else if (trace.status == SolverStatus::converged) {
    // slope-defect decomposition for each enumerated invariant subbundle,
    // asserting the Chern-Weil identity only for a certified metric
    bool certified = trace.kh_residual < 1e-6;
    MetricField h_final(matmul(GridField(trace.h0), trace.f), 0.0);
    json defects = json::array();
    for (const auto& basis : invariant_subspaces(bundle)) {
      auto r = slope_defect(bundle, torus, h_final, basis, certified);
      defects.push_back({{"rank", static_cast<int>(basis.cols())},
                         {"mu_gap", r.mu_gap},
                         {"a_norm2", r.a_norm2},
                         {"phi_tilde_norm2", r.phi_tilde_norm2},
                         {"identity_residual", r.identity_residual}});
    }
    payload["slope_defects"] = defects;
  }

  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "status: " << solver_status_name(trace.status)
            << "  final_residual: " << trace.final_residual
            << "  kh_residual: " << trace.kh_residual << "\n";

  if (csv && !cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream tele(cfg.out_dir + "/" + cfg.name + "_telemetry.csv");
    write_csv_telemetry(tele, trace);
    MetricField h_final(matmul(GridField(trace.h0), trace.f), 0.0);
    std::ofstream kcsv(cfg.out_dir + "/" + cfg.name + "_mean_curvature.csv");
    write_grid_csv(kcsv, mean_curvature(bundle, torus, h_final));
  }
  emit_report(cfg, payload, dt);
  return 0;
}

int cmd_bogomolov(const ScenarioConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  AffineTorus torus = build_torus(cfg);
  FlatHiggsBundle bundle = build_bundle(cfg);
  MetricField h = build_h_init(cfg);
  json payload = {{"scenario", cfg.raw},
                  {"astheno_defect", astheno_defect(torus)},
                  {"bogomolov", bogomolov_integral(bundle, torus, h)}};
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "bogomolov: " << payload["bogomolov"].get<double>() << "\n";
  emit_report(cfg, payload, dt);
  return 0;
}

int cmd_selftest() {
  IdentitySuiteResult r = run_identity_suite(16, 5, 20240901);
  print_suite(std::cout, r);
  return r.pass() ? 0 : 1;
}

int run_scenario(const json& scenario, const std::string& verb, const Options& opt) {
  ScenarioConfig cfg = parse_scenario(scenario);
  apply_overrides(cfg, opt);
  if (verb == "validate") return cmd_validate(cfg);
  if (verb == "analyze") return cmd_analyze(cfg);
  if (verb == "solve") return cmd_solve(cfg, opt.csv);
  if (verb == "bogomolov") return cmd_bogomolov(cfg);
  fail(ErrorCode::ConfigError, "unknown command " + verb);
}

int run_batch(const std::string& verb, const Options& opt) {
  std::ifstream in(opt.config_path);
  if (!in) {
    std::cerr << "cannot open config " << opt.config_path << "\n";
    return 1;
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    std::cerr << "json parse error: " << e.what() << "\n";
    return 1;
  }
  std::vector<json> scenarios = split_batch(j);
  if (scenarios.size() == 1 || opt.jobs <= 1) {
    int rc = 0;
    for (const auto& s : scenarios) rc = std::max(rc, run_scenario(s, verb, opt));
    return rc;
  }

  // independent scenarios in parallel worker processes
  int rc = 0;
  std::size_t next = 0;
  int active = 0;
  while (next < scenarios.size() || active > 0) {
    while (next < scenarios.size() && active < opt.jobs) {
      pid_t pid = fork();
      if (pid == 0) _exit(run_scenario(scenarios[next], verb, opt));
      if (pid < 0) {
        std::cerr << "fork failed\n";
        return 1;
      }
      ++next;
      ++active;
    }
    int status = 0;
    if (waitpid(-1, &status, 0) > 0) {
      --active;
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) rc = 1;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flat Higgs bundles over affine tori: stability analysis and "
               "Yang-Mills-Higgs metrics by the continuity method"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", opt.config_path, "scenario or batch JSON file")
          ->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--grid", opt.grid, "grid resolution override");
    sub->add_option("--eps-min", opt.eps_min, "smallest eps of the schedule");
    sub->add_option("--jobs", opt.jobs, "parallel scenario processes");
    sub->add_flag("--csv", opt.csv, "write CSV telemetry and field exports");
  };

  add_common(app.add_subcommand("validate", "check scenario invariants"), true);
  add_common(app.add_subcommand("analyze", "degree, slope, stability verdict"), true);
  add_common(app.add_subcommand("solve", "run the continuity method"), true);
  add_common(app.add_subcommand("bogomolov", "Chern-Weil inequality on T^n, n >= 2"),
             true);
  app.add_subcommand("selftest", "calculus and Chern identity suites at N=16");

  CLI11_PARSE(app, argc, argv);
  std::string verb = app.get_subcommands().front()->get_name();

  try {
    if (verb == "selftest") return cmd_selftest();
    return run_batch(verb, opt);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
