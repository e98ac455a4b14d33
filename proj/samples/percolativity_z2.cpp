// lambda_c of the uniform measure on B(n) in Z^2 for n = 1, 2, 4.

#include <cstdio>

#include "pdim/dimension.hpp"

int main() {
  using namespace pdim;
  PercConfig cfg;
  cfg.escape_radius = 48;
  cfg.trials = 1000;
  cfg.seed = 8;
  const auto rep = percolativity_sweep(Lattice(2), {1, 2, 4}, cfg);
  for (const auto& p : rep.points) {
    if (p.has_lambda()) {
      std::printf("%-16s lambda_hat %.4f  CI [%.4f, %.4f]  delta %.4g\n", p.measure.c_str(), p.lambda(), p.ci().low, p.ci().high,
                  p.delta_atom);
    } else {
      std::printf("%-16s capped\n", p.measure.c_str());
    }
  }
  for (const auto& v : rep.verdicts) std::printf("%-12s %s  %s\n", v.name.c_str(), v.holds ? "holds" : "fails", v.detail.c_str());
}
