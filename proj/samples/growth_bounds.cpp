// Ball growth fits and the exact ball-growth certificate.

#include <cstdio>

#include "pdim/dimension.hpp"

int main() {
  using namespace pdim;
  std::printf("Z^2:  %s\n", growth_fit(Lattice(2), {2, 4, 8, 16}).statement.c_str());
  std::printf("Z^3:  %s\n", growth_fit(Lattice(3), {2, 4, 8, 16}).statement.c_str());
  std::printf("H_3:  %s\n", growth_fit(Heisenberg(), {2, 4, 8, 16}).statement.c_str());
  std::printf("F_2:  %s\n", growth_fit(FreeGroup(2), {1, 2, 4, 8}).statement.c_str());
  const auto c = lb_certificate(Lattice(2), {1, 2, 4, 8, 16, 32}, 2);
  std::printf("Z^2 certificate s=2 b=%.4f\n", c.b);
  for (const auto& r : c.rows) {
    std::printf("  n=%-3lld |B(n)|=%-6llu b_min=%s member=%s\n", static_cast<long long>(r.n), static_cast<unsigned long long>(r.ball_size),
                to_string(r.b_min).c_str(), r.member ? "yes" : "no");
  }
}
