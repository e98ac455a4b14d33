#include <gtest/gtest.h>

#include "pdim/oracles.hpp"
#include "pdim/saw.hpp"

using namespace pdim;

TEST(SawCounts, Z2MatchesBruteForce) {
  const auto ours = saw_counts(Lattice(2), 11);
  const auto ref = oracle::z2_saw_counts(11);
  ASSERT_EQ(ours.size(), ref.size());
  for (std::size_t n = 0; n < ref.size(); ++n) EXPECT_EQ(ours[n], ref[n]) << "n=" << n;
}

TEST(SawCounts, FreeGroupHasNoLoops) {
  const auto c = saw_counts(FreeGroup(2), 8);
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(c[static_cast<std::size_t>(n)], oracle::free_sphere_size(2, n));
}

TEST(SigmaTable, UniformGeneratorsGiveScaledCounts) {
  const Lattice z2(2);
  const auto mu = uniform_on_generators(z2);
  const auto t = sigma_table(mu, 8);
  const auto ref = oracle::z2_saw_counts(8);
  for (int n = 0; n <= 8; ++n) {
    ASSERT_TRUE(t.at(n).exact) << n;
    EXPECT_EQ(*t.at(n).exact, Rational(BigInt(ref[static_cast<std::size_t>(n)]), pow(BigInt(4), static_cast<unsigned>(n))));
  }
}

TEST(SigmaTable, SecondTermIsOneMinusCollisionMass) {
  const Lattice z2(2);
  const auto mu = poly_decay(z2, 2.0, 3);
  Rational collision = 0;
  for (const auto& a : mu.support()) collision += *a.exact * *a.exact;
  const auto t = sigma_table(mu, 3);
  EXPECT_EQ(*t.at(1).exact, Rational(1));
  EXPECT_EQ(*t.at(2).exact, Rational(1) - collision);
}

TEST(SigmaTable, FloatingAgreesWithExactWithinBound) {
  const FreeGroup f(2);
  const auto mu = poly_decay(f, 2.0, 2);
  SawOptions fl;
  fl.exact = false;
  const auto a = sigma_table(mu, 6);
  const auto b = sigma_table(mu, 6, fl);
  for (int n = 1; n <= 6; ++n) {
    ASSERT_TRUE(a.at(n).exact);
    EXPECT_FALSE(b.at(n).exact);
    EXPECT_LE(std::abs(b.at(n).value - to_double(*a.at(n).exact)), b.at(n).error_bound + 1e-16) << n;
  }
}

TEST(SigmaTable, ThreadCountDoesNotChangeValues) {
  const auto mu = uniform_on_ball(Lattice(2), 2);
  SawOptions one, four;
  one.exact = four.exact = false;
  four.threads = 4;
  const auto a = sigma_table(mu, 5, one);
  const auto b = sigma_table(mu, 5, four);
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(a.at(n).value, b.at(n).value);
}

TEST(SigmaTable, SubmultiplicativeAndBounded) {
  const auto mu = poly_decay(Lattice(2), 3.0, 2);
  const auto t = sigma_table(mu, 6);
  EXPECT_TRUE(submultiplicativity_violations(t).empty());
  for (int n = 1; n <= 6; ++n) EXPECT_LE(t.at(n).value, t.at(n - 1).value);
  const auto nu = nu_upper(t, 6);
  EXPECT_LE(nu.best, nu.value);
  EXPECT_GT(nu.best, 0.0);
}

TEST(Numu, UniformMeasureIdentityOnSeveralGroups) {
  EXPECT_TRUE(check_numu(uniform_on_ball(Lattice(2), 2), 5).pass());
  EXPECT_TRUE(check_numu(uniform_on_ball(FreeGroup(2), 1), 6).pass());
  EXPECT_TRUE(check_numu(uniform_on_generators(Heisenberg()), 6).pass());
  EXPECT_TRUE(check_numu(uniform_on_generators(Lamplighter()), 6).pass());
}

TEST(Numu, RejectsNonUniformMeasure) {
  EXPECT_THROW(check_numu(poly_decay(Lattice(2), 2.0, 2), 3), UsageError);
}

TEST(Lacoco, TreeThresholdExceedsWalkBound) {
  const auto mu = uniform_on_generators(FreeGroup(2));
  const auto t = sigma_table(mu, 8);
  LambdaCEstimate est;
  est.lambda_hat = tree_oracle_lambda_c(2);
  const auto v = check_lacoco(est, t);
  EXPECT_FALSE(v.capped);
  EXPECT_EQ(v.rows.size(), 8u);
  for (const auto& r : v.rows) EXPECT_TRUE(r.pass) << r.n;
  est.lambda_hat = 1.0;  // below 1/sigma_8^(1/8)
  const auto bad = check_lacoco(est, t);
  EXPECT_FALSE(bad.rows.back().pass);
  est.lambda_hat.reset();
  est.capped = true;
  EXPECT_TRUE(check_lacoco(est, t).capped);
}

TEST(AtomDrag, ReportsHeaviestAtom) {
  const auto mu = uniform_on_generators(Lattice(2));
  const auto r = atom_drag_report(mu, 4);
  EXPECT_EQ(r.delta, 0.25);
  EXPECT_EQ(r.drag_bound, 0.875);
  ASSERT_EQ(r.root_sigma.size(), 4u);
  EXPECT_EQ(r.root_sigma[0], 1.0);
  EXPECT_LT(r.root_sigma[3], 1.0);
}
