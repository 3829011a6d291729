#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support/scenarios.hpp"
#include "ymh/fourier.hpp"
#include "ymh/hermitian.hpp"
#include "ymh/matfun.hpp"
#include "ymh/random_fields.hpp"

using namespace ymh;
using Eigen::MatrixXcd;

namespace {

const GridShape kShape{2, 32};

MetricField conformal_metric(GridShape shape, int rank, double amp = 1.0) {
  GridField h(shape, rank);
  for (std::int64_t x = 0; x < shape.points(); ++x)
    h.mat(x) = std::exp(amp * std::sin(2 * M_PI * shape.coord(x, 0))) *
               MatrixXcd::Identity(rank, rank);
  return MetricField(h);
}

}  // namespace

TEST_CASE("MetricField validates Hermitian positivity") {
  GridField bad(kShape, 2);
  for (std::int64_t x = 0; x < kShape.points(); ++x) {
    MatrixXcd m(2, 2);
    m << 1, 1, 0, 1;  // not Hermitian
    bad.mat(x) = m;
  }
  CHECK_THROWS_AS(MetricField{bad}, Error);

  GridField neg(kShape, 2);
  for (std::int64_t x = 0; x < kShape.points(); ++x) {
    MatrixXcd m(2, 2);
    m << 1, 0, 0, -2;
    neg.mat(x) = m;
  }
  CHECK_THROWS_AS(MetricField{neg}, Error);
}

TEST_CASE("higgs adjoint examples") {
  auto torus = corpus::flat_t2();
  MetricField id = MetricField::identity(kShape, 2);

  // Hermitian phi is fixed by the identity metric
  MatrixXcd sx(2, 2);
  sx << 0, 1, 1, 0;
  auto b1 = make_bundle(2, {corpus::id2(), corpus::id2()}, {sx, corpus::zero2()});
  PQField a1 = higgs_adjoint(b1, id);
  CHECK((a1.coeff(0, 0).mat(0) - sx).norm() < 1e-14);

  // plain adjoint for H = I
  auto jb = corpus::jordan_bundle();
  PQField a2 = higgs_adjoint(jb, id);
  CHECK((a2.coeff(0, 0).mat(0) - corpus::jordan_block().adjoint()).norm() < 1e-14);

  // twisted by H = diag(2,1): H^{-1} phi^dagger H = [[0,0],[2,0]]
  MatrixXcd hconst(2, 2);
  hconst << 2, 0, 0, 1;
  MetricField h(GridField::constant(kShape, hconst));
  PQField a3 = higgs_adjoint(jb, h);
  MatrixXcd expect(2, 2);
  expect << 0, 0, 2, 0;
  CHECK((a3.coeff(0, 0).mat(0) - expect).norm() < 1e-14);
}

TEST_CASE("extended connection form of a line bundle metric e^u is du/2") {
  auto torus = corpus::flat_t2();
  MatrixXcd one(1, 1), z(1, 1);
  one << 1;
  z << 0;
  auto lb = make_bundle(1, {one, one}, {z, z});
  MetricField h = conformal_metric(kShape, 1);
  PQField theta = extended_connection_form(lb, torus, h);
  for (std::int64_t x = 0; x < kShape.points(); ++x) {
    double du = 2 * M_PI * std::cos(2 * M_PI * kShape.coord(x, 0));
    CHECK(std::abs(theta.coeff(0, 0).values()(0, x) - 0.5 * du) < 1e-10);
    CHECK(std::abs(theta.coeff(1, 0).values()(0, x)) < 1e-12);
  }
}

TEST_CASE("unitary monodromy with H = I gives a constant flat connection form") {
  auto torus = corpus::flat_t2();
  auto ub = corpus::unitary_bundle();
  MetricField id = MetricField::identity(kShape, 2);
  PQField theta = extended_connection_form(ub, torus, id);
  for (int k = 0; k < 2; ++k) {
    GridField c = theta.coeff(k, 0);
    CHECK((c.values().colwise() - c.values().col(0)).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK(dbar(theta).sup_abs() < 1e-13);
  // and the curvature vanishes
  auto curv = extended_curvature(ub, torus, id);
  CHECK(curv.part11.sup_abs() < 1e-13);
  CHECK(curv.part20.sup_abs() < 1e-13);
  CHECK(curv.part02.sup_abs() < 1e-13);
}

TEST_CASE("trivial monodromy connection form is H^{-1} del H") {
  auto torus = corpus::flat_t2();
  auto tb = corpus::trivial_bundle();
  MetricField h(random_smooth_spd(kShape, 2, 31, SmoothSpec{2, 0.3, 0.8}));
  PQField theta = extended_connection_form(tb, torus, h);
  GridField hinv = h.field().inversewise();
  for (int k = 0; k < 2; ++k) {
    GridField dh = spectral_derivative(h.field(), k);
    GridField expect = matmul(hinv, dh);
    expect *= Complex(0.5);
    CHECK((theta.coeff(k, 0) - expect).sup_norm() < 1e-8);
  }
}

TEST_CASE("Jordan scenario curvature and mean curvature at H = I") {
  auto torus = corpus::flat_t2();
  auto jb = corpus::jordan_bundle();
  MetricField id = MetricField::identity(kShape, 2);
  auto curv = extended_curvature(jb, torus, id);
  MatrixXcd expect(2, 2);
  expect << 1, 0, 0, -1;
  CHECK((curv.part11.coeff(0, 0).mat(0) - expect).norm() < 1e-14);
  GridField k = mean_curvature(jb, torus, id);
  for (std::int64_t x = 0; x < kShape.points(); ++x)
    CHECK((k.mat(x) - expect).norm() < 1e-13);
}

TEST_CASE("line bundle mean curvature matches the analytic Laplacian") {
  auto torus = corpus::flat_t2();
  MatrixXcd one(1, 1), z(1, 1);
  one << 1;
  z << 0;
  auto lb = make_bundle(1, {one, one}, {z, z});
  MetricField h = conformal_metric(kShape, 1);
  GridField k = mean_curvature(lb, torus, h);
  // K = -(1/4) Lap u with u = sin(2 pi x^1): K = pi^2 sin(2 pi x^1)
  for (std::int64_t x = 0; x < kShape.points(); ++x) {
    double expect = M_PI * M_PI * std::sin(2 * M_PI * kShape.coord(x, 0));
    CHECK(std::abs(k.values()(0, x) - expect) < 1e-9);
  }
}

TEST_CASE("first Chern form is independent of the Higgs field") {
  auto torus = corpus::flat_t2();
  MetricField h(random_smooth_spd(kShape, 2, 77, SmoothSpec{2, 0.3, 0.8}));
  auto with_higgs = corpus::diagonal_bundle();
  auto without = corpus::trivial_bundle();
  PQField c1a = first_chern_form(with_higgs, torus, h);
  PQField c1b = first_chern_form(without, torus, h);
  CHECK((c1a - c1b).sup_abs() < 1e-12);
}

TEST_CASE("tr [phi, phi*] vanishes pointwise") {
  auto torus = corpus::flat_t2();
  auto jb = corpus::jordan_bundle();
  MetricField h(random_smooth_spd(kShape, 2, 13, SmoothSpec{2, 0.3, 0.8}));
  PQField phi = higgs_form(jb, kShape);
  PQField phis = higgs_adjoint(jb, h);
  PQField comm = wedge(phi, phis) + wedge(phis, phi);
  CHECK(trace_fiber(comm).sup_abs() < 1e-12);
}

TEST_CASE("degree vanishes and is metric independent") {
  auto torus = corpus::flat_t2();
  std::mt19937_64 rng(2);
  for (const auto& bundle :
       {corpus::jordan_bundle(), corpus::unitary_bundle(), corpus::unipotent_bundle()}) {
    MetricField h1(random_smooth_spd(kShape, 2, rng(), SmoothSpec{2, 0.3, 0.8}));
    MetricField h2(random_smooth_spd(kShape, 2, rng(), SmoothSpec{2, 0.3, 0.8}));
    double d1 = degree(bundle, torus, h1);
    double d2 = degree(bundle, torus, h2);
    CHECK(std::abs(d1 - d2) < 1e-8);
    CHECK(std::abs(d1) < 1e-8);
  }
  // line bundle with oscillating metric on the nonflat Gauduchon torus
  auto torus_g = corpus::gauduchon_t2();
  auto lb = corpus::line_bundle();
  MetricField hosc = conformal_metric(kShape, 1);
  CHECK(std::abs(degree(lb, torus_g, hosc)) < 1e-9);
}

TEST_CASE("chern identity (tr K) omega^n = n c1 ^ omega^{n-1}") {
  std::mt19937_64 rng(8);
  for (const auto& torus : {corpus::flat_t2(), corpus::gauduchon_t2()}) {
    PQField om = omega_form(torus);
    PQField omn = wedge_power(om, 2);
    auto jb = corpus::jordan_bundle();
    for (int s = 0; s < 5; ++s) {
      MetricField h(random_smooth_spd(kShape, 2, rng(), SmoothSpec{2, 0.3, 0.8}));
      GridField k = mean_curvature(jb, torus, h);
      PQField lhs = wedge(as_pq(k.tracewise()), omn);
      PQField rhs = Complex(2.0) * wedge(first_chern_form(jb, torus, h), om);
      CHECK((lhs - rhs).sup_abs() < 1e-8);
    }
  }
}

TEST_CASE("mean curvature transformation law for the trace") {
  // tr K[H0 f] - tr K[H0] + tr_g del dbar log det f = 0
  auto torus = corpus::gauduchon_t2();
  auto jb = corpus::jordan_bundle();
  std::mt19937_64 rng(3);
  MetricField h0(random_smooth_spd(kShape, 2, rng(), SmoothSpec{2, 0.25, 0.9}));
  GridField f = random_smooth_spd(kShape, 2, rng(), SmoothSpec{2, 0.25, 0.9});

  GridField hf = matmul(h0.field(), f);
  for (std::int64_t x = 0; x < hf.points(); ++x) {
    MatrixXcd m = hf.mat(x);
    hf.mat(x) = 0.5 * (m + m.adjoint());
  }
  GridField k1 = mean_curvature(jb, torus, MetricField(hf, 0.0)).tracewise();
  GridField k0 = mean_curvature(jb, torus, h0).tracewise();

  GridField logdet(kShape, 1);
  for (std::int64_t x = 0; x < kShape.points(); ++x)
    logdet.values()(0, x) = std::log(f.mat(x).determinant().real());
  GridField lap = contract_g(torus, del(dbar(as_pq(logdet))));

  CHECK((k1 - k0 + lap).sup_abs() < 1e-8);
}

TEST_CASE("einstein factor") {
  auto torus = corpus::flat_t2();
  CHECK(std::abs(einstein_factor(corpus::line_bundle(), torus)) < 1e-10);
  CHECK(std::abs(einstein_factor(corpus::jordan_bundle(), torus)) < 1e-10);
  // formula instance: mu = 1, n = 2, volume V => gamma = 2 / V
  CHECK(einstein_factor_from(2, 1.0, 4.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(einstein_factor_from(2, 1.0, 0.0), Error);
}

TEST_CASE("bogomolov integral on T^4") {
  auto t4 = corpus::flat_t4();
  GridShape s4{4, 8};
  MetricField id = MetricField::identity(s4, 2);

  CHECK(std::abs(bogomolov_integral(corpus::t4_unitary_bundle(), t4, id)) < 1e-12);
  double v1 = bogomolov_integral(corpus::t4_diagonal_bundle(), t4, id);
  CHECK(v1 >= -1e-8);

  MetricField h2(random_smooth_spd(s4, 2, 17, SmoothSpec{1, 0.01, 0.5}));
  double v2 = bogomolov_integral(corpus::t4_diagonal_bundle(), t4, h2);
  CHECK(std::abs(v1 - v2) < 1e-8);

  // non-astheno metric is rejected
  auto bad = corpus::conformal_t2(8, 4);
  CHECK_THROWS_AS(
      (void)bogomolov_integral(corpus::t4_diagonal_bundle(), bad, id), Error);
}

TEST_CASE("bogomolov density is nonnegative on model extended curvature") {
  // Omega11 = A dz^1 (x) dzbar^1 - A dz^2 (x) dzbar^2 with A Hermitian
  // traceless is the shape of a trace-free Yang-Mills-Higgs curvature
  // (K = tr_g Omega = 0, Omega_kl^* = Omega_lk); the Chern-Weil density must
  // integrate nonnegative. This pins the sign convention.
  MatrixXcd a(2, 2);
  a << 1, 0, 0, -1;
  for (int n : {2, 4}) {
    GridShape shape{n, 8};
    auto torus = make_torus(n, 8, Eigen::MatrixXd::Identity(n, n), 1.0);
    CurvatureBundle curv;
    curv.part20 = PQField(shape, 2, 0, 2);
    curv.part02 = PQField(shape, 0, 2, 2);
    curv.part11 = PQField(shape, 1, 1, 2);
    curv.part11.coeff(0, 0) = GridField::constant(shape, a);
    curv.part11.coeff(1, 1) = GridField::constant(shape, -a);
    CHECK(bogomolov_density_integral(torus, curv, 2) > 1.0);
  }
}

TEST_CASE("joint null sections of phi are parallel for gamma = 0 metrics") {
  // fully trivial bundle, constant metric: every constant section s has
  // del^h s = theta s = 0 and phi*(s) = 0
  auto torus = corpus::flat_t2();
  auto tb = corpus::trivial_bundle();
  MetricField id = MetricField::identity(kShape, 2);
  PQField theta = extended_connection_form(tb, torus, id);
  PQField phis = higgs_adjoint(tb, id);
  CHECK(theta.sup_abs() < 1e-6);
  CHECK(phis.sup_abs() < 1e-6);
}
