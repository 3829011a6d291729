#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ymh/bundle.hpp"
#include "ymh/geometry.hpp"
#include "ymh/hermitian.hpp"
#include "ymh/solver.hpp"
#include "ymh/stability.hpp"

namespace ymh {

/// Parsed scenario: torus + bundle + solver options + initial metric.
/// Matrices of complex numbers are nested arrays of [re, im] pairs; metrics
/// and initial metrics are constant matrices or named analytic families.
struct ScenarioConfig {
  std::string name = "scenario";
  int dim = 2;
  int grid = 32;
  double nu = 1.0;
  nlohmann::json metric;  // {"kind": "constant"|"conformal_exp_sin"|"diag_sincos", ...}
  int rank = 1;
  std::vector<Eigen::MatrixXcd> monodromy;
  std::vector<Eigen::MatrixXcd> higgs;
  SolverOptions solver;
  nlohmann::json h_init;  // {"kind": "identity"|"constant"|"conformal_exp_sin"}
  std::string out_dir;
  nlohmann::json raw;     // scenario echo for reports
};

ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);

/// A batch file is {"scenarios": [ ... ]} or a plain array.
std::vector<nlohmann::json> split_batch(const nlohmann::json& j);

AffineTorus build_torus(const ScenarioConfig& config);
FlatHiggsBundle build_bundle(const ScenarioConfig& config);
MetricField build_h_init(const ScenarioConfig& config);

Eigen::MatrixXcd parse_complex_matrix(const nlohmann::json& j,
                                      const std::string& context);
nlohmann::json complex_matrix_to_json(const Eigen::MatrixXcd& m);

/// Deterministic report fragments (wall time is segregated by the caller).
nlohmann::json stability_to_json(const StabilityReport& report);
nlohmann::json trace_to_json(const SolverTrace& trace);
nlohmann::json destabilizer_to_json(const DestabilizerReport& report);

void write_csv_telemetry(std::ostream& os, const SolverTrace& trace);
void write_grid_csv(std::ostream& os, const GridField& field);

}  // namespace ymh
