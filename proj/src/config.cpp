#include "ymh/config.hpp"

#include <fstream>

namespace ymh {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& context, const std::string& what) {
  fail(ErrorCode::ConfigError, context + ": " + what);
}

const json& require(const json& j, const std::string& key,
                    const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) config_fail(context, "missing field '" + key + "'");
  return *it;
}

double number_at(const json& j, const std::string& key, const std::string& context,
                 std::optional<double> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    config_fail(context, "missing number '" + key + "'");
  }
  if (!it->is_number()) config_fail(context + "." + key, "expected a number");
  return it->get<double>();
}

}  // namespace

Eigen::MatrixXcd parse_complex_matrix(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty()) config_fail(context, "expected a matrix (array of rows)");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      config_fail(context, "ragged matrix rows");
    for (int c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                 e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        config_fail(context + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                    "expected a number or an [re, im] pair");
      }
    }
  }
  return m;
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

ScenarioConfig parse_scenario(const json& j) {
  ScenarioConfig cfg;
  cfg.raw = j;
  cfg.name = j.value("name", "scenario");

  const json& torus = require(j, "torus", "config");
  cfg.dim = static_cast<int>(number_at(torus, "dim", "torus"));
  cfg.grid = static_cast<int>(number_at(torus, "grid", "torus"));
  cfg.nu = number_at(torus, "nu", "torus", 1.0);
  cfg.metric = torus.value("metric", json{{"kind", "constant"}});

  const json& bundle = require(j, "bundle", "config");
  cfg.rank = static_cast<int>(number_at(bundle, "rank", "bundle"));
  const json& mono = require(bundle, "monodromy", "bundle");
  const json& higgs = require(bundle, "higgs", "bundle");
  if (!mono.is_array() || !higgs.is_array())
    config_fail("bundle", "monodromy and higgs must be arrays over the axes");
  if (static_cast<int>(mono.size()) != cfg.dim ||
      static_cast<int>(higgs.size()) != cfg.dim)
    config_fail("bundle", "need one monodromy and one higgs matrix per axis");
  for (int k = 0; k < cfg.dim; ++k) {
    cfg.monodromy.push_back(
        parse_complex_matrix(mono[k], "bundle.monodromy[" + std::to_string(k) + "]"));
    cfg.higgs.push_back(
        parse_complex_matrix(higgs[k], "bundle.higgs[" + std::to_string(k) + "]"));
  }

  if (j.contains("solver")) {
    const json& s = j["solver"];
    cfg.solver.eps_start = number_at(s, "eps_start", "solver", cfg.solver.eps_start);
    cfg.solver.eps_min = number_at(s, "eps_min", "solver", cfg.solver.eps_min);
    cfg.solver.eps_ratio = number_at(s, "eps_ratio", "solver", cfg.solver.eps_ratio);
    cfg.solver.newton_tol = number_at(s, "newton_tol", "solver", cfg.solver.newton_tol);
    cfg.solver.newton_max_iter = static_cast<int>(
        number_at(s, "newton_max_iter", "solver", cfg.solver.newton_max_iter));
    cfg.solver.blowup_threshold = number_at(s, "blowup_threshold", "solver",
                                            cfg.solver.blowup_threshold);
    if (s.contains("det_renormalize")) {
      if (!s["det_renormalize"].is_boolean())
        config_fail("solver.det_renormalize", "expected a boolean");
      cfg.solver.det_renormalize = s["det_renormalize"].get<bool>();
    }
  }
  cfg.h_init = j.value("h_init", json{{"kind", "identity"}});
  if (j.contains("output")) cfg.out_dir = j["output"].value("dir", "");
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, std::string("json parse error: ") + e.what());
  }
  return parse_scenario(j);
}

std::vector<json> split_batch(const json& j) {
  if (j.is_array()) return std::vector<json>(j.begin(), j.end());
  if (j.contains("scenarios") && j["scenarios"].is_array())
    return std::vector<json>(j["scenarios"].begin(), j["scenarios"].end());
  return {j};
}

AffineTorus build_torus(const ScenarioConfig& cfg) {
  GridShape shape{cfg.dim, cfg.grid};
  if (cfg.dim < 1) fail(ErrorCode::BadGrid, "torus.dim must be >= 1");
  if (cfg.grid < 4 || cfg.grid % 2 != 0)
    fail(ErrorCode::BadGrid, "torus.grid must be even and >= 4");
  const std::string kind = cfg.metric.value("kind", "constant");
  if (kind == "constant") {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(cfg.dim, cfg.dim);
    if (cfg.metric.contains("matrix"))
      g = parse_complex_matrix(cfg.metric["matrix"], "torus.metric.matrix").real();
    return make_torus(cfg.dim, cfg.grid, g, cfg.nu);
  }
  if (kind == "conformal_exp_sin") {
    const int axis = static_cast<int>(number_at(cfg.metric, "axis", "torus.metric", 0));
    const double amp = number_at(cfg.metric, "amplitude", "torus.metric", 1.0);
    GridField g(shape, cfg.dim);
    for (std::int64_t x = 0; x < shape.points(); ++x)
      g.mat(x) = std::exp(amp * std::sin(2 * M_PI * shape.coord(x, axis))) *
                 Eigen::MatrixXcd::Identity(cfg.dim, cfg.dim);
    return make_torus(cfg.dim, cfg.grid, g, cfg.nu);
  }
  if (kind == "diag_sincos") {
    // diag(1 + a sin 2 pi x^1, 1 + b cos 2 pi x^2, 1, ...); affine Gauduchon
    // on T^2 since the mixed second derivatives cancel axis-wise
    std::vector<double> amp{0.5, 0.5};
    if (cfg.metric.contains("amplitudes"))
      amp = cfg.metric["amplitudes"].get<std::vector<double>>();
    GridField g(shape, cfg.dim);
    for (std::int64_t x = 0; x < shape.points(); ++x) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(cfg.dim, cfg.dim);
      if (cfg.dim >= 1 && amp.size() >= 1)
        m(0, 0) = 1.0 + amp[0] * std::sin(2 * M_PI * shape.coord(x, 0));
      if (cfg.dim >= 2 && amp.size() >= 2)
        m(1, 1) = 1.0 + amp[1] * std::cos(2 * M_PI * shape.coord(x, 1));
      g.mat(x) = m;
    }
    return make_torus(cfg.dim, cfg.grid, g, cfg.nu);
  }
  fail(ErrorCode::ConfigError, "unknown metric kind '" + kind + "'");
}

FlatHiggsBundle build_bundle(const ScenarioConfig& cfg) {
  return make_bundle(cfg.rank, cfg.monodromy, cfg.higgs);
}

MetricField build_h_init(const ScenarioConfig& cfg) {
  GridShape shape{cfg.dim, cfg.grid};
  const std::string kind = cfg.h_init.value("kind", "identity");
  if (kind == "identity") return MetricField::identity(shape, cfg.rank);
  if (kind == "constant") {
    Eigen::MatrixXcd h =
        parse_complex_matrix(require(cfg.h_init, "matrix", "h_init"), "h_init.matrix");
    return MetricField(GridField::constant(shape, h));
  }
  if (kind == "conformal_exp_sin") {
    const int axis = static_cast<int>(number_at(cfg.h_init, "axis", "h_init", 0));
    const double amp = number_at(cfg.h_init, "amplitude", "h_init", 1.0);
    GridField h(shape, cfg.rank);
    for (std::int64_t x = 0; x < shape.points(); ++x)
      h.mat(x) = std::exp(amp * std::sin(2 * M_PI * shape.coord(x, axis))) *
                 Eigen::MatrixXcd::Identity(cfg.rank, cfg.rank);
    return MetricField(h);
  }
  fail(ErrorCode::ConfigError, "unknown h_init kind '" + kind + "'");
}

json stability_to_json(const StabilityReport& report) {
  json witnesses = json::array();
  for (const auto& w : report.witnesses)
    witnesses.push_back({{"basis", complex_matrix_to_json(w.basis)},
                         {"rank", w.rank},
                         {"slope", w.slope}});
  return {{"verdict", verdict_name(report.verdict)},
          {"mu_E", report.mu_E},
          {"simultaneously_diagonalizable", report.simultaneously_diagonalizable},
          {"witnesses", witnesses}};
}

json trace_to_json(const SolverTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps)
    steps.push_back({{"eps", s.eps},
                     {"newton_iters", s.newton_iters},
                     {"residual", s.residual},
                     {"m_eps", s.m_eps},
                     {"det_defect", s.det_defect}});
  return {{"status", solver_status_name(trace.status)},
          {"gamma", trace.gamma},
          {"final_residual", trace.final_residual},
          {"kh_residual", trace.kh_residual},
          {"m_extrapolated", trace.m_extrapolated},
          {"blowup_eps", trace.blowup_eps},
          {"steps", steps},
          {"eta_trace_integrals", trace.eta_trace_integrals},
          {"diagnostics", trace.diagnostics}};
}

json destabilizer_to_json(const DestabilizerReport& report) {
  return {{"basis", complex_matrix_to_json(report.basis)},
          {"rank", report.rank},
          {"mu_F", report.mu_F},
          {"mu_E", report.mu_E},
          {"idempotent_residual", report.idempotent_residual},
          {"selfadjoint_residual", report.selfadjoint_residual},
          {"dbar_residual", report.dbar_residual},
          {"higgs_residual", report.higgs_residual},
          {"basis_invariance", report.basis_invariance}};
}

void write_csv_telemetry(std::ostream& os, const SolverTrace& trace) {
  os << "eps,newton_iters,residual_inf,m_eps,det_defect\n";
  for (const auto& s : trace.steps)
    os << s.eps << "," << s.newton_iters << "," << s.residual << "," << s.m_eps
       << "," << s.det_defect << "\n";
}

void write_grid_csv(std::ostream& os, const GridField& field) {
  const GridShape& shape = field.shape();
  for (int k = 0; k < shape.dim; ++k) os << "x" << k << ",";
  for (int a = 0; a < field.rows(); ++a)
    for (int b = 0; b < field.rows(); ++b)
      os << "re_" << a << b << ",im_" << a << b
         << (a == field.rows() - 1 && b == field.rows() - 1 ? "" : ",");
  os << "\n";
  for (std::int64_t x = 0; x < field.points(); ++x) {
    for (int k = 0; k < shape.dim; ++k) os << shape.coord(x, k) << ",";
    auto m = field.mat(x);
    for (int a = 0; a < field.rows(); ++a)
      for (int b = 0; b < field.rows(); ++b)
        os << m(a, b).real() << "," << m(a, b).imag()
           << (a == field.rows() - 1 && b == field.rows() - 1 ? "" : ",");
    os << "\n";
  }
}

}  // namespace ymh
