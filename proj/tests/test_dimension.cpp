#include <gtest/gtest.h>

#include "pdim/dimension.hpp"
#include "pdim/oracles.hpp"

using namespace pdim;

TEST(GrowthFit, Z2IsQuadratic) {
  const auto f = growth_fit(Lattice(2), {2, 4, 8, 16});
  EXPECT_NEAR(f.d_hat, 2.0, 0.05);
  EXPECT_FALSE(f.exponential);
  for (std::size_t i = 0; i < f.radii.size(); ++i) EXPECT_EQ(f.sizes[i], oracle::z2_ball_size(f.radii[i]));
  EXPECT_NE(f.statement.find("pdim <="), std::string::npos);
}

TEST(GrowthFit, Z3IsCubic) {
  EXPECT_NEAR(growth_fit(Lattice(3), {2, 4, 8, 16}).d_hat, 3.0, 0.15);
}

TEST(GrowthFit, HeisenbergIsQuartic) {
  const auto f = growth_fit(Heisenberg(), {2, 4, 8, 16});
  EXPECT_FALSE(f.exponential);
  EXPECT_NEAR(f.d_hat, 4.0, 0.4);
}

TEST(GrowthFit, FreeGroupIsExponential) {
  const auto f = growth_fit(FreeGroup(2), {1, 2, 4, 8});
  EXPECT_TRUE(f.exponential);
  EXPECT_NEAR(f.exp_rate, std::log(3.0), 0.15);
  EXPECT_NE(f.statement.find("exponential"), std::string::npos);
}

TEST(GrowthFit, RejectsBadRadii) {
  EXPECT_THROW(growth_fit(Lattice(2), {2, 4, 8}), UsageError);
  EXPECT_THROW(growth_fit(Lattice(2), {2, 4, 6, 8}), UsageError);
}

TEST(LbCertificate, Z2ExactMembership) {
  const Lattice z2(2);
  // n^2 / (2n^2 + 2n) < 1/b  <=>  (b - 2) n < 2
  const auto ok = lb_certificate(z2, {1, 5, 30}, 2, 2.0);
  EXPECT_TRUE(ok.all_member);
  EXPECT_EQ(ok.rows[1].b_min, Rational(25, 60));
  const auto edge = lb_certificate(z2, {1, 19, 20, 30}, 2, 2.1);
  EXPECT_TRUE(edge.rows[0].member);
  EXPECT_TRUE(edge.rows[1].member);
  EXPECT_FALSE(edge.rows[2].member);
  EXPECT_FALSE(edge.rows[3].member);
  EXPECT_FALSE(edge.all_member);
}

TEST(LbCertificate, DefaultConstantFromFit) {
  const auto c = lb_certificate(Lattice(2), {2, 4, 8, 16}, 2);
  EXPECT_GT(c.b, 0.0);
  EXPECT_TRUE(c.all_member);
}

TEST(FreeSurrogate, ClosedFormsDecreaseTowardsOne) {
  const auto rep = free_surrogate_sweep({2, 3, 4, 8, 16, 32});
  ASSERT_EQ(rep.points.size(), 6u);
  for (const auto& p : rep.points) {
    const int k = static_cast<int>(p.param("k"));
    EXPECT_NEAR(p.lambda(), oracle::tree_lambda_c(k), 1e-12);
    EXPECT_EQ(*p.exact_delta, Rational(1, 2 * k));
  }
  EXPECT_TRUE(rep.verdict("decreasing").holds);
  EXPECT_TRUE(rep.verdict("approaches 1").holds);
  EXPECT_FALSE(free_surrogate_sweep({2, 3}).verdict("approaches 1").holds);
}

TEST(PercolativitySweep, SeedsDerivedPerPoint) {
  PercConfig cfg;
  cfg.escape_radius = 16;
  cfg.trials = 400;
  cfg.seed = 5;
  const auto rep = percolativity_sweep(Lattice(2), {1, 2}, cfg);
  ASSERT_EQ(rep.points.size(), 2u);
  EXPECT_EQ(rep.points[0].seed, stream_key(5, 0));
  EXPECT_EQ(rep.points[1].seed, stream_key(5, 1));
  EXPECT_EQ(rep.points[1].measure, "uniform-ball:2");
  EXPECT_NO_THROW(rep.verdict("decreasing"));
  EXPECT_NO_THROW(rep.verdict("percolative"));
  EXPECT_THROW(rep.verdict("nonsense"), UsageError);
  EXPECT_THROW(percolativity_sweep(Lattice(2), {2, 1}, cfg), UsageError);
}

TEST(PercolativitySweep, Z1IsCapped) {
  PercConfig cfg;
  cfg.escape_radius = 16;
  cfg.trials = 200;
  const auto rep = percolativity_sweep(Lattice(1), {1, 2}, cfg);
  for (const auto& p : rep.points) EXPECT_TRUE(p.capped());
  EXPECT_FALSE(rep.verdict("percolative").holds);
}

TEST(PdimSweep, VerdictsPerExponentAndRadius) {
  PercConfig cfg;
  cfg.escape_radius = 16;
  cfg.trials = 300;
  const auto rep = pdim_sweep(Lattice(2), {3.0}, {2, 4}, cfg);
  ASSERT_EQ(rep.points.size(), 2u);
  EXPECT_NO_THROW(rep.verdict("s=3 delta"));
  EXPECT_NO_THROW(rep.verdict("s=3 decreasing in R"));
  EXPECT_NO_THROW(rep.verdict("s=3 above band"));
  EXPECT_NO_THROW(rep.verdict("R=2 non-decreasing in s"));
  EXPECT_NEAR(rep.points[0].delta_atom, poly_decay(Lattice(2), 3.0, 2).support().front().mass, 1e-15);
}

TEST(EpdimSweep, LabelsCarryBase) {
  PercConfig cfg;
  cfg.escape_radius = 12;
  cfg.trials = 200;
  const auto rep = epdim_sweep(Lattice(2), 0.5, {1.0}, {2}, cfg);
  EXPECT_EQ(rep.family, "sexp:r=0.5");
  EXPECT_EQ(rep.points[0].measure, "sexp:0.5,1,2");
}
