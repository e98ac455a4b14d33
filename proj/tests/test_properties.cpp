#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "pdim/percolation.hpp"
#include "pdim/saw.hpp"
#include "pdim/union_find.hpp"

using namespace pdim;

// Property: on one sample, the cluster at a larger lambda contains the cluster at a smaller one.
TEST(Properties, ClustersGrowWithLambda) {
  const FreeGroup f(2);
  const auto mu = poly_decay(f, 2.0, 2);
  const GroupKernel<FreeGroup> k(mu);
  ClusterExplorer<GroupKernel<FreeGroup>> small(k), large(k);
  ClusterExplorer<GroupKernel<FreeGroup>>::Options opt;
  opt.radius_limit = 6;
  opt.cap = 100000;
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const double l1 = std::uniform_real_distribution<double>(0.2, 3.0)(rng);
    const double l2 = l1 + std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    const std::uint64_t key = stream_key(11, static_cast<std::uint64_t>(trial));
    small.explore(l1, key, opt);
    large.explore(l2, key, opt);
    std::set<std::string> big;
    for (const auto& v : large.members()) big.insert(f.format(v));
    for (const auto& v : small.members()) EXPECT_TRUE(big.contains(f.format(v))) << "trial " << trial;
  }
}

// Property: every measure family is a symmetric probability measure without identity mass.
TEST(Properties, MeasureFamiliesAreSymmetricProbabilities) {
  std::mt19937_64 rng(2);
  const Lattice z3(3);
  const Heisenberg h;
  for (int i = 0; i < 12; ++i) {
    const double s = std::uniform_real_distribution<double>(0.5, 5.0)(rng);
    const auto R = static_cast<std::int64_t>(1 + rng() % 4);
    const double r = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    auto check = [](const auto& mu) {
      const auto& ctx = mu.context();
      double total = 0.0;
      for (const auto& a : mu.support()) {
        EXPECT_NE(a.element, ctx.identity());
        EXPECT_EQ(mu.mass(ctx.inv(a.element)), a.mass);
        total += a.mass;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    };
    check(poly_decay(z3, s, R));
    check(poly_decay(h, s, R));
    check(stretched_exp_decay(z3, r, std::min(1.0, s / 5.0), R));
  }
}

// Property: sigma_{m+n} <= sigma_m sigma_n for random decay measures.
TEST(Properties, WalkTableSubmultiplicative) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 6; ++i) {
    const double s = std::uniform_real_distribution<double>(1.0, 4.0)(rng);
    const auto mu = poly_decay(Lattice(2), s, 2);
    SawOptions opt;
    opt.exact = false;
    const auto t = sigma_table(mu, 6, opt);
    EXPECT_TRUE(submultiplicativity_violations(t).empty()) << "s=" << s;
  }
}

// Property: union-find components agree with a naive labelling.
TEST(Properties, UnionFindMatchesNaiveLabels) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + rng() % 40;
    UnionFind uf(n);
    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), std::size_t{0});
    for (int e = 0; e < 30; ++e) {
      const std::size_t a = rng() % n, b = rng() % n;
      uf.unite(a, b);
      const auto from = label[b], to = label[a];
      for (auto& l : label) {
        if (l == from) l = to;
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) EXPECT_EQ(uf.connected(a, b), label[a] == label[b]);
    }
    auto sizes = uf.component_sizes();
    EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), n);
  }
}

// Property: the Wilson interval contains the point estimate and narrows with n.
TEST(Properties, WilsonIntervalShape) {
  for (std::size_t n : {10u, 100u, 1000u}) {
    for (std::size_t k = 0; k <= n; k += n / 10) {
      const auto ci = wilson_interval(k, n, 0.95);
      const double p = static_cast<double>(k) / static_cast<double>(n);
      EXPECT_LE(ci.low, p + 1e-15);
      EXPECT_GE(ci.high, p - 1e-15);
      EXPECT_GE(ci.low, 0.0);
      EXPECT_LE(ci.high, 1.0);
    }
  }
  EXPECT_GT(wilson_interval(5, 10).width(), wilson_interval(500, 1000).width());
  EXPECT_EQ(wilson_interval(0, 0).high, 1.0);
}

// Property: compensated summation beats naive summation on cancellation.
TEST(Properties, CompensatedSumIsAccurate) {
  CompensatedSum s;
  double naive = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    s.add(0.1);
    naive += 0.1;
  }
  EXPECT_LE(std::abs(s.value() - 100000.0), std::abs(naive - 100000.0));
  EXPECT_NEAR(s.value(), 100000.0, 1e-9);
}

// Property: least squares recovers an exact line.
TEST(Properties, LeastSquaresExactLine) {
  const std::vector<double> x{0.0, 1.0, 2.0, 5.0}, y{1.0, 3.0, 5.0, 11.0};
  const auto f = least_squares(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.rms_residual(), 0.0, 1e-12);
}

// Property: counter-based uniforms are in [0,1) and independent of evaluation order.
TEST(Properties, PairUniformsAreOrderFree) {
  std::vector<double> forward, backward;
  for (std::uint64_t i = 0; i < 1000; ++i) forward.push_back(pair_uniform(stream_key(9, 3), pair_key(i, i + 1)));
  for (std::uint64_t i = 1000; i-- > 0;) backward.push_back(pair_uniform(stream_key(9, 3), pair_key(i + 1, i)));
  std::reverse(backward.begin(), backward.end());
  EXPECT_EQ(forward, backward);
  for (double u : forward) {
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
