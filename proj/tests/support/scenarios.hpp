#pragma once

// Shared corpus of test scenarios: the bundles and tori the suites and the
// acceptance criteria run against.

#include <Eigen/Dense>

#include "ymh/bundle.hpp"
#include "ymh/geometry.hpp"

namespace corpus {

using Eigen::MatrixXcd;

inline MatrixXcd rot(double t) {
  MatrixXcd m(2, 2);
  m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return m;
}

inline MatrixXcd id2() { return MatrixXcd::Identity(2, 2); }
inline MatrixXcd zero2() { return MatrixXcd::Zero(2, 2); }

inline MatrixXcd jordan_block() {
  MatrixXcd j(2, 2);
  j << 0, 1, 0, 0;
  return j;
}

inline MatrixXcd diag12() {
  MatrixXcd d(2, 2);
  d << 1, 0, 0, 2;
  return d;
}

inline MatrixXcd unipotent() {
  MatrixXcd u(2, 2);
  u << 1, 1, 0, 1;
  return u;
}

inline ymh::AffineTorus flat_t2(int grid = 32) {
  return ymh::make_torus(2, grid, Eigen::MatrixXd::Identity(2, 2), 1.0);
}

/// diag(1 + a sin 2 pi x^1, 1 + b cos 2 pi x^2): affine Gauduchon on T^2.
inline ymh::AffineTorus gauduchon_t2(int grid = 32, double a = 0.5, double b = 0.5) {
  ymh::GridShape shape{2, grid};
  ymh::GridField g(shape, 2);
  for (std::int64_t x = 0; x < shape.points(); ++x) {
    MatrixXcd m = MatrixXcd::Identity(2, 2);
    m(0, 0) = 1.0 + a * std::sin(2 * M_PI * shape.coord(x, 0));
    m(1, 1) = 1.0 + b * std::cos(2 * M_PI * shape.coord(x, 1));
    g.mat(x) = m;
  }
  return ymh::make_torus(2, grid, g, 1.0);
}

/// Conformal e^{sin 2 pi x^1} I: not Gauduchon (positive defect).
inline ymh::AffineTorus conformal_t2(int grid = 32, int dim = 2) {
  ymh::GridShape shape{dim, grid};
  ymh::GridField g(shape, dim);
  for (std::int64_t x = 0; x < shape.points(); ++x)
    g.mat(x) = std::exp(std::sin(2 * M_PI * shape.coord(x, 0))) *
               MatrixXcd::Identity(dim, dim);
  return ymh::make_torus(dim, grid, g, 1.0);
}

inline ymh::AffineTorus flat_t4(int grid = 8) {
  return ymh::make_torus(4, grid, Eigen::MatrixXd::Identity(4, 4), 1.0);
}

/// rank 2, trivial monodromy, phi_1 the nilpotent Jordan block:
/// semistable but not polystable; no Yang-Mills-Higgs metric.
inline ymh::FlatHiggsBundle jordan_bundle() {
  return ymh::make_bundle(2, {id2(), id2()}, {jordan_block(), zero2()});
}

/// rank 2, trivial monodromy, phi_1 = diag(1,2): polystable sum of lines.
inline ymh::FlatHiggsBundle diagonal_bundle() {
  return ymh::make_bundle(2, {id2(), id2()}, {diag12(), zero2()});
}

/// rank 2, commuting rotations, no Higgs field: flat unitary, polystable.
inline ymh::FlatHiggsBundle unitary_bundle() {
  return ymh::make_bundle(2, {rot(0.7), rot(0.3)}, {zero2(), zero2()});
}

/// rank 2, unipotent monodromy, no Higgs field: semistable, not polystable.
inline ymh::FlatHiggsBundle unipotent_bundle() {
  return ymh::make_bundle(2, {unipotent(), id2()}, {zero2(), zero2()});
}

/// fully trivial rank 2 bundle.
inline ymh::FlatHiggsBundle trivial_bundle() {
  return ymh::make_bundle(2, {id2(), id2()}, {zero2(), zero2()});
}

/// rank 1 with real monodromy (2, 1) and scalar Higgs field.
inline ymh::FlatHiggsBundle line_bundle() {
  MatrixXcd two(1, 1), one(1, 1), p1(1, 1), p2(1, 1);
  two << 2.0;
  one << 1.0;
  p1 << 0.3;
  p2 << -0.1;
  return ymh::make_bundle(1, {two, one}, {p1, p2});
}

inline ymh::FlatHiggsBundle t4_diagonal_bundle() {
  return ymh::make_bundle(2, {id2(), id2(), id2(), id2()},
                          {diag12(), zero2(), zero2(), zero2()});
}

inline ymh::FlatHiggsBundle t4_unitary_bundle() {
  return ymh::make_bundle(2, {rot(0.7), rot(0.3), id2(), id2()},
                          {zero2(), zero2(), zero2(), zero2()});
}

}  // namespace corpus
