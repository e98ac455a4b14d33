#pragma once

// Reference values computed by routes that share no code with the estimators:
// closed forms, fixed-point iterations, and small brute-force enumerations.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace pdim::oracle {

// Root of a continuous increasing f on [lo, hi] by plain bisection.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Critical intensity for F_k, uniform on 2k generators: mean offspring
// (2k-1)(1 - exp(-lambda/2k)) equals 1.
inline double tree_lambda_c(int k) {
  const double m = 2.0 * k;
  return bisect_root([&](double l) { return (m - 1.0) * (1.0 - std::exp(-l / m)) - 1.0; }, 0.0, 100.0);
}

// Galton-Watson tree on F_k: probability that the root's cluster reaches
// generation L, with Binomial(2k, p) children at the root and
// Binomial(2k-1, p) elsewhere, p = 1 - exp(-lambda/2k).
inline double tree_reach_probability(int k, double lambda, int L) {
  const double m = 2.0 * k;
  const double p = 1.0 - std::exp(-lambda / m);
  // q = P(a non-root subtree fails to reach depth j below its root)
  double q = 0.0;  // depth 0 is reached immediately
  for (int j = 1; j < L; ++j) q = std::pow(1.0 - p + p * q, m - 1.0);
  return 1.0 - std::pow(1.0 - p + p * q, m);
}

// Erdos-Renyi giant component: positive root of z = 1 - exp(-c z), c > 1.
inline double er_giant_fraction(double c) {
  return bisect_root([&](double z) { return z - (1.0 - std::exp(-c * z)); }, 1e-6, 1.0);
}

// Z^1 nearest-neighbour: cluster of 0 reaches |x| >= L iff one of the two
// independent rays of L open edges is fully open.
inline double z1_escape_probability(double p, int L) { return 1.0 - std::pow(1.0 - std::pow(p, L), 2); }

inline double unique_path_probability(double p, int k) { return std::pow(p, k); }

// Spectral radius of simple random walk on the 2k-regular tree.
inline double free_group_rho(int k) { return std::sqrt(2.0 * k - 1.0) / k; }

inline std::uint64_t z2_ball_size(std::int64_t n) { return static_cast<std::uint64_t>(2 * n * n + 2 * n + 1); }

inline std::uint64_t free_sphere_size(int k, int m) {
  if (m == 0) return 1;
  std::uint64_t s = 2 * static_cast<std::uint64_t>(k);
  for (int i = 1; i < m; ++i) s *= 2 * static_cast<std::uint64_t>(k) - 1;
  return s;
}

// Self-avoiding walks on Z^2 from the origin by brute force over coordinate pairs.
inline std::vector<std::uint64_t> z2_saw_counts(int n_max) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(n_max) + 1, 0);
  std::set<std::pair<int, int>> visited{{0, 0}};
  const std::array<std::pair<int, int>, 4> dirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  std::function<void(int, int, int)> walk = [&](int x, int y, int len) {
    ++c[static_cast<std::size_t>(len)];
    if (len == n_max) return;
    for (const auto& [dx, dy] : dirs) {
      const std::pair<int, int> next{x + dx, y + dy};
      if (visited.contains(next)) continue;
      visited.insert(next);
      walk(next.first, next.second, len + 1);
      visited.erase(next);
    }
  };
  walk(0, 0, 0);
  return c;
}

// Bond percolation on the (n+1) x n box of Z^2: fraction of samples with an
// open left-right crossing. Own RNG and flood fill.
inline double z2_crossing_frequency(double p, int n, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution open(p);
  const int W = n + 1, H = n;
  int hits = 0;
  std::vector<int> parent(static_cast<std::size_t>(W * H));
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  auto join = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
  for (int s = 0; s < samples; ++s) {
    std::iota(parent.begin(), parent.end(), 0);
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const int v = y * W + x;
        if (x + 1 < W && open(rng)) join(v, v + 1);
        if (y + 1 < H && open(rng)) join(v, v + W);
      }
    }
    std::set<int> left;
    for (int y = 0; y < H; ++y) left.insert(find(y * W));
    bool crossed = false;
    for (int y = 0; y < H && !crossed; ++y) crossed = left.contains(find(y * W + W - 1));
    hits += crossed ? 1 : 0;
  }
  return static_cast<double>(hits) / samples;
}

}  // namespace pdim::oracle
