// Acceptance suite: one PASS/FAIL line per criterion; non-zero exit on any failure.

#include <iostream>

#include "pdim/acceptance.hpp"

int main() {
  pdim::acceptance::Suite suite(std::cout);
  return suite.run_all() ? 0 : 1;
}
