#include "ymh/bundle.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ymh/matfun.hpp"

namespace ymh {

namespace {

double comm_norm(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a * b - b * a).norm();
}

double pair_scale(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return std::max({1.0, a.norm(), b.norm()});
}

}  // namespace

bool FlatHiggsBundle::monodromy_is_trivial() const {
  for (const auto& rho : monodromy_)
    if (!rho.isIdentity(1e-14)) return false;
  return true;
}

FlatHiggsBundle FlatHiggsBundle::unchecked(int rank,
                                           std::vector<Eigen::MatrixXcd> monodromy,
                                           std::vector<Eigen::MatrixXcd> higgs,
                                           std::vector<Eigen::MatrixXcd> logs) {
  FlatHiggsBundle b;
  b.rank_ = rank;
  b.monodromy_ = std::move(monodromy);
  b.higgs_ = std::move(higgs);
  b.logs_ = std::move(logs);
  return b;
}

FlatHiggsBundle make_bundle(int rank, const std::vector<Eigen::MatrixXcd>& monodromy,
                            const std::vector<Eigen::MatrixXcd>& higgs) {
  if (rank < 1) fail(ErrorCode::RankMismatch, "rank must be >= 1");
  if (monodromy.size() != higgs.size())
    fail(ErrorCode::RankMismatch, "monodromy/higgs axis counts differ");
  for (const auto& m : monodromy)
    if (m.rows() != rank || m.cols() != rank || !m.allFinite())
      fail(ErrorCode::RankMismatch, "monodromy matrix has wrong shape or NaNs");
  for (const auto& m : higgs)
    if (m.rows() != rank || m.cols() != rank || !m.allFinite())
      fail(ErrorCode::RankMismatch, "higgs matrix has wrong shape or NaNs");

  const double tol = 1e-10;
  const int n = static_cast<int>(monodromy.size());
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l)
      if (comm_norm(monodromy[k], monodromy[l]) >
          tol * pair_scale(monodromy[k], monodromy[l]))
        fail(ErrorCode::NonCommutingMonodromy, "[rho_k, rho_l] != 0");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (comm_norm(higgs[i], higgs[j]) > tol * pair_scale(higgs[i], higgs[j]))
        fail(ErrorCode::HiggsWedgeNonzero, "[phi_i, phi_j] != 0");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (comm_norm(monodromy[k], higgs[i]) >
          tol * pair_scale(monodromy[k], higgs[i]))
        fail(ErrorCode::HiggsNotFlat,
             "higgs field not equivariant under the monodromy");

  std::vector<Eigen::MatrixXcd> logs;
  logs.reserve(n);
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXcd L = principal_log(monodromy[k]);
    if ((L.exp() - monodromy[k]).norm() > 1e-12 * pair_scale(monodromy[k], L))
      fail(ErrorCode::NoPrincipalLog, "exp(log rho) does not reproduce rho");
    logs.push_back(std::move(L));
  }

  FlatHiggsBundle b;
  b.rank_ = rank;
  b.monodromy_ = monodromy;
  b.higgs_ = higgs;
  b.logs_ = std::move(logs);
  return b;
}

double family_curvature_defect(const FlatHiggsBundle& bundle, double t) {
  const int n = bundle.dim();
  const auto& L = bundle.logs();
  const auto& phi = bundle.higgs();
  double defect = 0;
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      Eigen::MatrixXcd dnabla =
          (L[k] * phi[l] - phi[l] * L[k]) - (L[l] * phi[k] - phi[k] * L[l]);
      Eigen::MatrixXcd wedge2 = phi[k] * phi[l] - phi[l] * phi[k];
      defect = std::max(defect, (t * dnabla + t * t * wedge2).norm());
    }
  }
  return defect;
}

FlatHiggsBundle endo_bundle(const FlatHiggsBundle& bundle) {
  const int r = bundle.rank();
  std::vector<Eigen::MatrixXcd> mono, higgs;
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r, r);
  for (int k = 0; k < bundle.dim(); ++k) {
    const Eigen::MatrixXcd& rho = bundle.monodromy()[k];
    Eigen::MatrixXcd rho_inv_t = rho.inverse().transpose();
    mono.push_back(Eigen::kroneckerProduct(rho_inv_t, rho));
    const Eigen::MatrixXcd& p = bundle.higgs()[k];
    higgs.push_back(Eigen::kroneckerProduct(id, p) -
                    Eigen::kroneckerProduct(p.transpose(), id));
  }
  return make_bundle(r * r, mono, higgs);
}

SimplicityReport is_simple(const FlatHiggsBundle& bundle) {
  const int r = bundle.rank();
  std::vector<Eigen::MatrixXcd> gens = bundle.monodromy();
  gens.insert(gens.end(), bundle.higgs().begin(), bundle.higgs().end());

  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r, r);
  Eigen::MatrixXcd stacked(static_cast<int>(gens.size()) * r * r, r * r);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    double s = std::max(1.0, gens[g].norm());
    Eigen::MatrixXcd sylv = (Eigen::kroneckerProduct(id, gens[g]) -
                             Eigen::kroneckerProduct(gens[g].transpose(), id)) /
                            s;
    stacked.middleRows(static_cast<int>(g) * r * r, r * r) = sylv;
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double tol = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 1.0);
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) ++null_dim;

  SimplicityReport report;
  report.commutant_dim = null_dim;
  report.simple = (null_dim == 1);
  if (!report.simple && null_dim > 0) {
    // pick the null vector furthest from the identity line
    double best = -1;
    for (int i = r * r - null_dim; i < r * r; ++i) {
      Eigen::MatrixXcd x =
          Eigen::Map<const Eigen::MatrixXcd>(svd.matrixV().col(i).data(), r, r);
      Eigen::MatrixXcd traceless = x - (x.trace() / static_cast<double>(r)) * id;
      if (traceless.norm() > best) {
        best = traceless.norm();
        report.witness = traceless / traceless.norm();
      }
    }
  }
  return report;
}

}  // namespace ymh
