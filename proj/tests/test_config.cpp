#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support/scenarios.hpp"
#include "ymh/config.hpp"

using namespace ymh;
using nlohmann::json;

#ifndef YMH_CONFIG_DIR
#define YMH_CONFIG_DIR "configs"
#endif

namespace {
std::string config_path(const std::string& name) {
  return std::string(YMH_CONFIG_DIR) + "/" + name;
}
}  // namespace

TEST_CASE("jordan config parses and builds") {
  ScenarioConfig cfg = load_scenario(config_path("jordan.json"));
  CHECK(cfg.name == "jordan");
  CHECK(cfg.dim == 2);
  CHECK(cfg.grid == 32);
  CHECK(cfg.rank == 2);
  CHECK(cfg.solver.eps_min == 1e-4);
  CHECK((cfg.higgs[0] - corpus::jordan_block()).norm() < 1e-14);
  CHECK_NOTHROW(build_torus(cfg));
  CHECK_NOTHROW(build_bundle(cfg));
  CHECK_NOTHROW(build_h_init(cfg));
}

TEST_CASE("line bundle config uses the Gauduchon family and exp-sin h_init") {
  ScenarioConfig cfg = load_scenario(config_path("line_bundle.json"));
  AffineTorus torus = build_torus(cfg);
  CHECK_FALSE(torus.metric_is_constant());
  CHECK(gauduchon_defect(torus) < 1e-10);
  MetricField h = build_h_init(cfg);
  CHECK(h.rank() == 1);
  CHECK(std::abs(h.field().values()(0, 0) - 1.0) < 1e-12);  // e^{sin 0} = 1
}

TEST_CASE("complex matrices parse from [re, im] pairs and plain numbers") {
  json j = json::parse(R"([[1, [0, -2]], [[3.5, 0.25], 4]])");
  Eigen::MatrixXcd m = parse_complex_matrix(j, "test");
  CHECK(m(0, 0) == Complex(1, 0));
  CHECK(m(0, 1) == Complex(0, -2));
  CHECK(m(1, 0) == Complex(3.5, 0.25));
  CHECK(m(1, 1) == Complex(4, 0));
  // round trip
  Eigen::MatrixXcd back = parse_complex_matrix(complex_matrix_to_json(m), "rt");
  CHECK((m - back).norm() == 0.0);
}

TEST_CASE("parse errors carry field context") {
  json j = json::parse(R"({"torus": {"dim": 2, "grid": 32}})");
  try {
    parse_scenario(j);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("bundle") != std::string::npos);
  }
  json bad = json::parse(R"({"torus": {"dim": 2}, "bundle": {}})");
  try {
    parse_scenario(bad);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("grid") != std::string::npos);
  }
}

TEST_CASE("bad configs are rejected by the named invariant") {
  ScenarioConfig odd = load_scenario(config_path("bad_odd_grid.json"));
  try {
    build_torus(odd);
    FAIL("expected BadGrid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadGrid);
  }
  ScenarioConfig nc = load_scenario(config_path("bad_noncommuting_higgs.json"));
  try {
    build_bundle(nc);
    FAIL("expected HiggsWedgeNonzero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HiggsWedgeNonzero);
  }
}

TEST_CASE("batch files split into scenarios") {
  std::ifstream in(config_path("batch_t2.json"));
  json j;
  in >> j;
  auto scenarios = split_batch(j);
  CHECK(scenarios.size() == 3);
  CHECK(parse_scenario(scenarios[0]).name == "jordan");
}

TEST_CASE("reports are deterministic and re-parse") {
  ScenarioConfig cfg = load_scenario(config_path("diagonal.json"));
  AffineTorus torus = build_torus(cfg);
  FlatHiggsBundle bundle = build_bundle(cfg);
  json a = stability_to_json(stability_verdict(bundle, torus));
  json b = stability_to_json(stability_verdict(bundle, torus));
  CHECK(a.dump() == b.dump());
  json parsed = json::parse(a.dump());
  CHECK(parsed["verdict"] == "polystable");
  CHECK(parsed["witnesses"].size() == 2);
}

TEST_CASE("solver trace serialization round-trips") {
  SolverTrace trace;
  trace.status = SolverStatus::blowup;
  trace.gamma = 0.25;
  trace.steps.push_back({0.5, 3, 1e-12, 1.5, 2e-9});
  trace.eta_trace_integrals.push_back(3e-6);
  json j = trace_to_json(trace);
  json parsed = json::parse(j.dump());
  CHECK(parsed["status"] == "blowup");
  CHECK(parsed["steps"][0]["m_eps"] == 1.5);
  CHECK(parsed["gamma"] == 0.25);
}

TEST_CASE("telemetry CSV has the documented columns") {
  SolverTrace trace;
  trace.steps.push_back({1.0, 2, 1e-11, 0.5, 1e-8});
  trace.steps.push_back({0.5, 1, 1e-12, 0.6, 1e-9});
  std::ostringstream os;
  write_csv_telemetry(os, trace);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "eps,newton_iters,residual_inf,m_eps,det_defect");
  int lines = 0;
  std::string line;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 2);
}

TEST_CASE("grid CSV export") {
  GridShape shape{2, 4};
  GridField f = identity_field(shape, 1);
  std::ostringstream os;
  write_grid_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 1 + shape.points());
}
