#include <iostream>
#include "ymh/selftest.hpp"
int main() {
  auto r = ymh::run_identity_suite(16, 3, 42);
  ymh::print_suite(std::cout, r);
  return r.pass() ? 0 : 1;
}
