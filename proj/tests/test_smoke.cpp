#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ymh/geometry.hpp"

TEST_CASE("torus builds") {
  auto torus = ymh::make_torus(2, 8, Eigen::MatrixXd::Identity(2, 2), 1.0);
  CHECK(torus.dim() == 2);
}
