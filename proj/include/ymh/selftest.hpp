#pragma once

#include <cstdint>
#include <iosfwd>

#include "ymh/calculus.hpp"

namespace ymh {

/// Defect magnitudes of the calculus and Chern identities on random
/// band-limited fields; used by the self-test command and by mutation tests
/// that flip one sign convention and expect a failure.
struct IdentitySuiteResult {
  double d2 = 0;              // sup |del del a|
  double dbar2 = 0;           // sup |dbar dbar a|
  double mixed = 0;           // sup |del dbar a + dbar del a|
  double leibniz = 0;         // graded Leibniz rule for del and dbar
  double operator_values = 0; // del/dbar on analytic test fields
  double wedge_sign = 0;      // vs dense alternating-tensor oracle, constants
  double division_sign = 0;   // integrate(nu (x) top) vs (-1)^{n(n-1)/2}
  double graded_comm = 0;     // scalar wedge graded commutativity
  double chern_identity = 0;  // (tr K) omega^n - n c1 ^ omega^{n-1}
  double degree_pairs = 0;    // max |deg(H1) - deg(H2)| over random pairs

  bool pass() const {
    return d2 < 1e-10 && dbar2 < 1e-10 && mixed < 1e-10 && leibniz < 1e-9 &&
           operator_values < 1e-10 && wedge_sign == 0.0 &&
           division_sign < 1e-12 && graded_comm < 1e-9 &&
           chern_identity < 1e-8 && degree_pairs < 1e-8;
  }
};

/// Runs the identity suite at the given resolution with `samples` random
/// fields per bidegree. The conventions parameter exists for mutation tests.
IdentitySuiteResult run_identity_suite(int grid, int samples, std::uint64_t seed,
                                       const Conventions& conventions = {});

/// Independent wedge oracle: dense totally antisymmetric tensors multiplied
/// by explicit alternation over permutations (constant coefficients).
PQField wedge_dense_oracle(const PQField& a, const PQField& b);

void print_suite(std::ostream& os, const IdentitySuiteResult& r);

}  // namespace ymh
