#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support/scenarios.hpp"
#include "ymh/calculus.hpp"
#include "ymh/random_fields.hpp"
#include "ymh/selftest.hpp"

using namespace ymh;

namespace {
const GridShape kShape{2, 32};
}

TEST_CASE("del of sin(2 pi x^1) is pi cos(2 pi x^1) dz^1") {
  GridField s(kShape, 1);
  for (std::int64_t x = 0; x < kShape.points(); ++x)
    s.values()(0, x) = std::sin(2 * M_PI * kShape.coord(x, 0));
  PQField d = del(as_pq(s));
  REQUIRE(d.p() == 1);
  for (std::int64_t x = 0; x < kShape.points(); ++x) {
    CHECK(std::abs(d.coeff(0, 0).values()(0, x) -
                   M_PI * std::cos(2 * M_PI * kShape.coord(x, 0))) < 1e-12);
    CHECK(std::abs(d.coeff(1, 0).values()(0, x)) < 1e-12);
  }
}

TEST_CASE("derivatives of constant fields vanish identically") {
  PQField c(kShape, 0, 0, 2);
  c.coeff(0, 0) = GridField::constant(kShape, Eigen::MatrixXcd::Identity(2, 2) * 3.7);
  CHECK(del(c).sup_abs() == 0.0);
  CHECK(dbar(c).sup_abs() == 0.0);
}

TEST_CASE("dbar sign on a (1,0) field") {
  // dbar(f(x^2) dz^1) = (-1) (1/2) d_2 f dz^1 (x) dzbar^2
  GridField s(kShape, 1);
  for (std::int64_t x = 0; x < kShape.points(); ++x)
    s.values()(0, x) = std::sin(2 * M_PI * kShape.coord(x, 1));
  PQField f(kShape, 1, 0, 1);
  f.coeff(0, 0) = s;
  PQField d = dbar(f);
  for (std::int64_t x = 0; x < kShape.points(); ++x)
    CHECK(std::abs(d.coeff_by_mask(1u, 2u).values()(0, x) +
                   M_PI * std::cos(2 * M_PI * kShape.coord(x, 1))) < 1e-12);
}

TEST_CASE("d composed with itself vanishes on random smooth fields") {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 10; ++s) {
    PQField a00 = random_smooth_pq(kShape, 0, 0, 2, rng());
    PQField a11 = random_smooth_pq(kShape, 1, 1, 2, rng());
    CHECK(del(del(a00)).sup_abs() < 1e-10);
    CHECK(dbar(dbar(a00)).sup_abs() < 1e-10);
    CHECK((del(dbar(a11)) + dbar(del(a11))).sup_abs() < 1e-10);
  }
}

TEST_CASE("wedge paper example (dz1 x dzbar1) ^ (dz2 x dzbar2)") {
  PQField a(kShape, 1, 1, 1), b(kShape, 1, 1, 1);
  a.coeff_by_mask(1u, 1u) = GridField::constant(kShape, Eigen::MatrixXcd::Ones(1, 1));
  b.coeff_by_mask(2u, 2u) = GridField::constant(kShape, Eigen::MatrixXcd::Ones(1, 1));
  PQField w = wedge(a, b);
  // (-1)^{q1 p2} = -1 on the slot (dz1^dz2, dzbar1^dzbar2)
  CHECK(w.coeff_by_mask(3u, 3u).values()(0, 0) == Complex(-1.0, 0.0));
}

TEST_CASE("wedge with a (0,0) field is the pointwise product") {
  std::mt19937_64 rng(3);
  PQField a = random_smooth_pq(kShape, 0, 0, 2, rng());
  PQField b = random_smooth_pq(kShape, 1, 1, 2, rng());
  PQField w = wedge(a, b);
  GridField expect = matmul(a.coeff(0, 0), b.coeff(0, 1));
  CHECK((w.coeff(0, 1) - expect).sup_abs() < 1e-14);
}

TEST_CASE("omega ^ omega matches the dense alternating oracle") {
  auto torus = corpus::flat_t2();
  PQField om = omega_form(torus);
  PQField got = wedge(om, om);
  PQField want = wedge_dense_oracle(om, om);
  CHECK((got - want).sup_abs() == 0.0);
  // known value: coefficient -2 on the top slot for g = I
  CHECK(got.coeff(0, 0).values()(0, 0) == Complex(-2.0, 0.0));
}

TEST_CASE("Leibniz rule for del on mixed-degree products") {
  std::mt19937_64 rng(17);
  for (int s = 0; s < 5; ++s) {
    PQField a = random_smooth_pq(kShape, 1, 0, 2, rng());
    PQField b = random_smooth_pq(kShape, 0, 1, 2, rng());
    PQField lhs = del(wedge(a, b));
    PQField rhs = wedge(del(a), b) - wedge(a, del(b));  // (-1)^{p_a+q_a} = -1
    CHECK((lhs - rhs).sup_abs() < 1e-9);
  }
}

TEST_CASE("graded commutativity for scalar-valued fields") {
  std::mt19937_64 rng(23);
  PQField a = random_smooth_pq(kShape, 1, 0, 1, rng());
  PQField b = random_smooth_pq(kShape, 0, 1, 1, rng());
  // both odd: a ^ b = -b ^ a
  CHECK((wedge(a, b) + wedge(b, a)).sup_abs() < 1e-12);
}

TEST_CASE("contract_g of omega is the dimension") {
  auto torus = corpus::gauduchon_t2();
  GridField c = contract_g(torus, omega_form(torus));
  for (std::int64_t x = 0; x < c.points(); ++x)
    CHECK(std::abs(c.values()(0, x) - 2.0) < 1e-12);
}

TEST_CASE("contract_g against diag(2,1) uses the inverse metric") {
  Eigen::MatrixXd g(2, 2);
  g << 2, 0, 0, 1;
  auto torus = make_torus(2, 8, g, 1.0);
  PQField a(torus.shape(), 1, 1, 1);
  Eigen::MatrixXcd c11(1, 1), c22(1, 1);
  c11 << 3.0;
  c22 << 5.0;
  a.coeff(0, 0) = GridField::constant(torus.shape(), c11);
  a.coeff(1, 1) = GridField::constant(torus.shape(), c22);
  GridField out = contract_g(torus, a);
  CHECK(std::abs(out.values()(0, 0) - Complex(0.5 * 3.0 + 5.0)) < 1e-14);
}

TEST_CASE("degree errors") {
  auto torus = corpus::flat_t2(8);
  PQField top(torus.shape(), 2, 2, 1);
  CHECK_THROWS_AS((void)del(top), Error);
  CHECK_THROWS_AS((void)dbar(top), Error);
  CHECK_THROWS_AS((void)wedge(top, top), Error);
  PQField a(torus.shape(), 1, 0, 1);
  CHECK_THROWS_AS((void)contract_g(torus, a), Error);
  try {
    (void)del(top);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TopDegree);
  }
  try {
    (void)wedge(top, top);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeOverflow);
  }
}

TEST_CASE("identity suite passes at reduced size") {
  auto r = run_identity_suite(16, 3, 2024);
  CHECK(r.pass());
}

TEST_CASE("flipped conventions are detected by the suite") {
  Conventions w, d, v;
  w.flip_wedge = true;
  d.flip_dbar = true;
  v.flip_division = true;
  CHECK_FALSE(run_identity_suite(16, 2, 7, w).pass());
  CHECK_FALSE(run_identity_suite(16, 2, 7, d).pass());
  CHECK_FALSE(run_identity_suite(16, 2, 7, v).pass());
}
