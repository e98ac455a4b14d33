// Estimates lambda_c for F_2 with the uniform generator measure and compares
// it with the exact tree threshold.

#include <cstdio>

#include "pdim/percolation.hpp"

int main() {
  using namespace pdim;
  const FreeGroup f2(2);
  const auto mu = uniform_on_generators(f2);
  PercConfig cfg;
  cfg.escape_radius = 30;
  cfg.trials = 5000;
  cfg.seed = 1;
  const auto est = lambda_c_estimate(GroupKernel<FreeGroup>(mu), cfg);
  const double exact = tree_oracle_lambda_c(2);
  std::printf("F_2 exact     %.6f\n", exact);
  if (est.lambda_hat) {
    std::printf("F_2 estimate  %.6f  CI [%.6f, %.6f]  rel.err %+.2f%%\n", *est.lambda_hat, est.ci.low, est.ci.high,
                100.0 * (*est.lambda_hat - exact) / exact);
  } else {
    std::printf("F_2 estimate  capped: %s\n", est.cap_reason.c_str());
  }
}
