#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "pdim/measures.hpp"
#include "pdim/oracles.hpp"

using namespace pdim;

namespace {

template <class G>
void expect_probability_measure(const Measure<G>& mu) {
  const auto& ctx = mu.context();
  double total = 0.0;
  for (const auto& a : mu.support()) {
    EXPECT_GT(a.mass, 0.0);
    EXPECT_NE(a.element, ctx.identity());
    EXPECT_EQ(mu.mass(ctx.inv(a.element)), a.mass);
    total += a.mass;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(UniformBall, Z2RadiusTwoIsExactTwelfths) {
  const Lattice z2(2);
  const auto mu = uniform_on_ball(z2, 2);
  EXPECT_EQ(mu.support_size(), oracle::z2_ball_size(2) - 1);
  EXPECT_TRUE(mu.exact());
  for (const auto& a : mu.support()) EXPECT_EQ(*a.exact, Rational(1, 12));
  expect_probability_measure(mu);
  EXPECT_EQ(mu.radius(), 2);
  EXPECT_EQ(mu.label(), "uniform-ball:2");
}

TEST(UniformBall, RadiusOneEqualsGenerators) {
  const FreeGroup f(2);
  const auto a = uniform_on_ball(f, 1);
  const auto b = uniform_on_generators(f);
  ASSERT_EQ(a.support_size(), b.support_size());
  for (std::size_t i = 0; i < a.support_size(); ++i) {
    EXPECT_EQ(a.support()[i].element, b.support()[i].element);
    EXPECT_EQ(a.support()[i].mass, b.support()[i].mass);
  }
}

TEST(PolyDecay, MassesScaleAsPowerOfLength) {
  const Lattice z2(2);
  const auto mu = poly_decay(z2, 3.0, 4);
  expect_probability_measure(mu);
  ASSERT_TRUE(mu.exact());
  const auto g1 = z2.point({1, 0}), g2 = z2.point({1, 1}), g4 = z2.point({2, 2});
  EXPECT_NEAR(mu.mass(g1) / mu.mass(g2), 8.0, 1e-12);
  EXPECT_NEAR(mu.mass(g1) / mu.mass(g4), 64.0, 1e-12);
  EXPECT_EQ(mu.mass(z2.point({3, 2})), 0.0);
  // normaliser: sum over spheres of |S(m)| m^-3 with |S(m)| = 4m
  double z = 0.0;
  for (int m = 1; m <= 4; ++m) z += 4.0 * m / (m * m * m);
  EXPECT_NEAR(mu.mass(g1), 1.0 / z, 1e-14);
}

TEST(PolyDecay, NonIntegralExponentIsFloating) {
  const auto mu = poly_decay(Lattice(1), 1.5, 8);
  EXPECT_FALSE(mu.exact());
  expect_probability_measure(mu);
  EXPECT_EQ(mu.label(), "poly:1.5,8");
}

TEST(StretchedExp, MassesFollowBase) {
  const Lattice z2(2);
  const auto mu = stretched_exp_decay(z2, 0.5, 1.0, 5);
  ASSERT_TRUE(mu.exact());
  expect_probability_measure(mu);
  EXPECT_NEAR(mu.mass(z2.point({1, 0})) / mu.mass(z2.point({2, 1})), 4.0, 1e-12);
  const auto nu = stretched_exp_decay(z2, 0.5, 0.5, 5);
  EXPECT_FALSE(nu.exact());
  EXPECT_NEAR(nu.mass(z2.point({1, 0})) / nu.mass(z2.point({2, 2})), std::pow(0.5, 1.0 - 2.0), 1e-12);
}

TEST(Measures, RejectInvalidParameters) {
  const Lattice z2(2);
  EXPECT_THROW(poly_decay(z2, 0.0, 3), UsageError);
  EXPECT_THROW(poly_decay(z2, 2.0, 0), UsageError);
  EXPECT_THROW(stretched_exp_decay(z2, 1.5, 1.0, 3), UsageError);
  EXPECT_THROW(stretched_exp_decay(z2, 0.5, 1.5, 3), UsageError);
  EXPECT_THROW(uniform_on_set(z2, {z2.point({1, 0})}), UsageError);  // not symmetric
  EXPECT_THROW(uniform_on_set(z2, {z2.identity()}), UsageError);
  EXPECT_THROW(measure_from_spec(z2, "poly:2"), UsageError);
  EXPECT_THROW(measure_from_spec(z2, "poly:2,1.5"), UsageError);
  EXPECT_THROW(measure_from_spec(z2, "gauss:1"), UsageError);
}

TEST(Measures, SpecGrammar) {
  const FreeGroup f(2);
  EXPECT_EQ(measure_from_spec(f, "uniform-ball:2").support_size(), 4u + 12u);
  EXPECT_EQ(measure_from_spec(f, "poly:2,3").kind(), MeasureKind::poly_decay);
  EXPECT_EQ(measure_from_spec(f, "sexp:0.5,1,3").kind(), MeasureKind::stretched_exp);
  const auto path = temp_file("set_f2.txt", "a A\nb B # generators\n");
  const auto mu = measure_from_spec(f, "uniform-set:" + path);
  EXPECT_EQ(mu.support_size(), 4u);
}

TEST(LoadMeasure, SymmetrizesDropsIdentityAndRenormalizes) {
  const Lattice z1(1);
  const auto path = temp_file("mu_z1.txt", "# weights\n0 0.2\n1 0.5\n-1 0.3\n");
  LoadReport rep;
  const auto mu = load_measure(z1, path, &rep);
  expect_probability_measure(mu);
  EXPECT_NEAR(rep.identity_mass_removed, 0.2, 1e-15);
  EXPECT_NEAR(rep.max_asymmetry, 0.2, 1e-15);
  EXPECT_NEAR(mu.mass(z1.point({1})), 0.5, 1e-15);
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(DecayClass, UniformBallMinimalConstantIsExact) {
  const Lattice z2(2);
  const auto mu = uniform_on_ball(z2, 3);  // 24 atoms
  const auto rep = decay_class(mu, 2.0);
  ASSERT_TRUE(rep.exact_minimal_constant);
  EXPECT_EQ(*rep.exact_minimal_constant, Rational(9, 24));
  EXPECT_TRUE(rep.member(0.38));
  EXPECT_FALSE(rep.member(0.375));
}

TEST(DecayClass, PolyDecayIsInItsOwnClass) {
  const auto mu = poly_decay(Lattice(2), 3.0, 6);
  const auto rep = decay_class(mu, 3.0);
  // mu(g)|g|^3 is constant, equal to 1/Z
  EXPECT_NEAR(rep.minimal_constant, mu.support().front().mass * 1.0, 1e-14);
}

TEST(AnnulusMass, SumsToOneAndFlagsA0) {
  const Lattice z2(2);
  const auto mu = poly_decay(z2, 4.0, 16);
  const auto ann = annulus_mass(mu, 1);
  double total = 0.0;
  for (double m : ann.masses) total += m;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(ann.masses.size(), 5u);
  // A_0 = S(1): 4 / Z with Z = sum 4m^-3
  EXPECT_TRUE(ann.a0_dominant);
  const auto flat = annulus_mass(uniform_on_ball(z2, 8), 1);
  EXPECT_FALSE(flat.a0_dominant);
}

TEST(MaxAtom, PicksHeaviestCanonicalFirst) {
  const Lattice z2(2);
  const auto top = max_atom(poly_decay(z2, 2.0, 5));
  EXPECT_EQ(z2.word_length(top.element), 1);
  ASSERT_TRUE(top.exact);
  EXPECT_EQ(to_double(*top.exact), top.mass);
}
