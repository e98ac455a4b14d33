// Exact weighted self-avoiding-walk tables and the walk bound on lambda_c.

#include <cstdio>

#include "pdim/saw.hpp"

int main() {
  using namespace pdim;
  const Lattice z2(2);
  const auto t = sigma_table(uniform_on_generators(z2), 8);
  for (const auto& e : t.entries) std::printf("Z^2 n=%d sigma_n=%s\n", e.n, to_string(*e.exact).c_str());
  const auto nu = nu_upper(t, 8);
  std::printf("nu_upper %.6f (best %.6f at n=%d), so lambda_c >= %.6f\n", nu.value, nu.best, nu.best_n, 1.0 / nu.best);
  const auto numu = check_numu(uniform_on_ball(z2, 2), 6);
  std::printf("uniform-ball:2 identity sigma_n |S|^n = c_n: %s\n", numu.pass() ? "holds" : "fails");
}
