#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "pdim/oracles.hpp"
#include "pdim/spectral.hpp"

using namespace pdim;

namespace {

// p_n from the n-th power of the transition matrix restricted to a ball large
// enough that no returning walk leaves it.
template <class G>
std::vector<double> matrix_power_returns(const Measure<G>& mu, int n_max) {
  const auto& ctx = mu.context();
  const auto b = ball(ctx, (n_max / 2 + 1) * mu.radius());
  std::unordered_map<element_t<G>, int, SpaceHash<G>> index(16, SpaceHash<G>{&ctx});
  for (std::size_t i = 0; i < b.elements.size(); ++i) index.emplace(b.elements[i], static_cast<int>(i));
  const int N = static_cast<int>(b.elements.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (const auto& a : mu.support()) {
      const auto it = index.find(ctx.mul(b.elements[static_cast<std::size_t>(i)], a.element));
      if (it != index.end()) P(i, it->second) += a.mass;
    }
  }
  std::vector<double> p{1.0};
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(N);
  v(0) = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    v = v * P;
    p.push_back(v(0));
  }
  return p;
}

}  // namespace

TEST(ReturnProbabilities, Z2MatchesMatrixPower) {
  const auto mu = uniform_on_generators(Lattice(2));
  const auto t = return_probabilities(mu, 12);
  const auto ref = matrix_power_returns(mu, 12);
  for (int n = 0; n <= 12; ++n) EXPECT_NEAR(t.p[static_cast<std::size_t>(n)], ref[static_cast<std::size_t>(n)], 1e-14) << n;
  EXPECT_EQ(t.p[1], 0.0);
  EXPECT_EQ((*t.exact)[2], Rational(1, 4));
}

TEST(ReturnProbabilities, HeisenbergMatchesMatrixPower) {
  const auto mu = uniform_on_generators(Heisenberg());
  const auto t = return_probabilities(mu, 10);
  const auto ref = matrix_power_returns(mu, 10);
  for (int n = 0; n <= 10; ++n) EXPECT_NEAR(t.p[static_cast<std::size_t>(n)], ref[static_cast<std::size_t>(n)], 1e-14) << n;
}

TEST(ReturnProbabilities, PolyMeasureMatchesMatrixPower) {
  const auto mu = poly_decay(Lattice(2), 2.0, 2);
  const auto t = return_probabilities(mu, 6, false);
  const auto ref = matrix_power_returns(mu, 6);
  for (int n = 0; n <= 6; ++n) EXPECT_NEAR(t.p[static_cast<std::size_t>(n)], ref[static_cast<std::size_t>(n)], 1e-14) << n;
  EXPECT_FALSE(t.exact);
}

TEST(ReturnProbabilities, RadialChainMatchesElementConvolution) {
  for (int k : {2, 3}) {
    const auto radial = radial_return_probabilities(k, 12);
    const auto element = return_probabilities(uniform_on_generators(FreeGroup(k)), 12);
    ASSERT_TRUE(radial.exact && element.exact);
    for (int n = 0; n <= 12; ++n) EXPECT_EQ((*radial.exact)[static_cast<std::size_t>(n)], (*element.exact)[static_cast<std::size_t>(n)]) << k << " " << n;
  }
}

TEST(ReturnProbabilities, CapThrows) {
  EXPECT_THROW(return_probabilities(uniform_on_ball(FreeGroup(3), 2), 10, false, 1000), CapExceeded);
}

TEST(Rho, FreeGroupRatioApproachesKesten) {
  const auto t = radial_return_probabilities(2, 200);
  const auto r = rho_estimate(t);
  EXPECT_EQ(r.m, 200);
  EXPECT_NEAR(r.rho, oracle::free_group_rho(2), 0.03 * oracle::free_group_rho(2));
  // the n-th root sequence increases towards rho from below
  for (std::size_t i = 1; i < r.root_sequence.size(); ++i) EXPECT_GE(r.root_sequence[i], r.root_sequence[i - 1] - 1e-15);
  EXPECT_LT(r.root_sequence.back(), oracle::free_group_rho(2));
  EXPECT_THROW(rho_estimate(radial_return_probabilities(2, 10)), UsageError);
}

TEST(Rho, AmenableGroupRatioNearOne) {
  const auto t = return_probabilities(uniform_on_generators(Lattice(2)), 60);
  EXPECT_GT(rho_estimate(t).rho, 0.95);
}

TEST(Kesten, InequalityHoldsOnTrees) {
  for (int k : {2, 3, 4}) {
    const auto rho = rho_estimate(radial_return_probabilities(k, 100)).rho;
    EXPECT_TRUE(kesten_inequality_check(2 * static_cast<std::size_t>(k), rho).pass);
  }
  EXPECT_FALSE(kesten_inequality_check(2, 0.5).pass);
}

TEST(Cheeger, Z2BallsHaveShrinkingBoundaryRatio) {
  const Lattice z2(2);
  const auto rep = cheeger_report(z2, 6);
  EXPECT_EQ(rep.degree, 4u);
  ASSERT_EQ(rep.rows.size(), 7u);
  // |B(n)| = 2n^2+2n+1 and the edge boundary of B(n) has 8n+4 edges
  for (std::int64_t n = 0; n <= 6; ++n) {
    EXPECT_EQ(rep.rows[static_cast<std::size_t>(n)].size, oracle::z2_ball_size(n));
    EXPECT_EQ(rep.rows[static_cast<std::size_t>(n)].boundary, static_cast<std::size_t>(8 * n + 4));
  }
  EXPECT_NEAR(rep.iota_upper, 52.0 / 85.0, 1e-15);
  EXPECT_NEAR(rep.bound_normalized, 4.0 * rep.bound_raw, 1e-12);
}

TEST(Cheeger, FreeGroupRatioStaysAboveTreeConstant) {
  const auto rep = cheeger_report(FreeGroup(2), 5);
  // every finite set in the 4-regular tree has |dF| >= 2|F| + 2
  for (const auto& r : rep.rows) EXPECT_GE(r.boundary, 2 * r.size + 2);
}
