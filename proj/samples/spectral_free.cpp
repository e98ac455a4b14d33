// Return probabilities and spectral radius of simple random walk on F_k.

#include <cmath>
#include <cstdio>

#include "pdim/spectral.hpp"

int main() {
  using namespace pdim;
  for (int k : {2, 3, 4}) {
    const auto t = radial_return_probabilities(k, 200);
    const auto rho = rho_estimate(t);
    const double exact = std::sqrt(2.0 * k - 1.0) / k;
    const auto kv = kesten_inequality_check(2 * static_cast<std::size_t>(k), rho.rho);
    std::printf("F_%d  p_200 %.4e  rho_hat %.6f  exact %.6f  1/|S| %.4f <= rho^2 %.4f : %s\n", k, t.p[200], rho.rho, exact,
                kv.lhs, kv.rhs, kv.pass ? "yes" : "no");
  }
  const auto ch = cheeger_report(FreeGroup(2), 6);
  std::printf("F_2 balls: min |dF|/|F| %.4f, bounds raw %.4f normalized %.4f\n", ch.iota_upper, ch.bound_raw, ch.bound_normalized);
}
