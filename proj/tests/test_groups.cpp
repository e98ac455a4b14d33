#include <gtest/gtest.h>

#include <random>
#include <set>

#include "pdim/groups.hpp"
#include "pdim/oracles.hpp"

using namespace pdim;

TEST(Lattice, Z2BallSizesMatchClosedForm) {
  const Lattice z2(2);
  const auto b = ball(z2, 12);
  std::size_t total = 0;
  for (std::int64_t n = 0; n <= 12; ++n) {
    total += b.sphere_sizes[static_cast<std::size_t>(n)];
    EXPECT_EQ(total, oracle::z2_ball_size(n)) << "n=" << n;
  }
}

TEST(Lattice, Z1SpheresHaveTwoPoints) {
  const auto b = ball(Lattice(1), 9);
  for (std::int64_t n = 1; n <= 9; ++n) EXPECT_EQ(b.sphere_sizes[static_cast<std::size_t>(n)], 2u);
}

TEST(Lattice, RejectsBadDimensionAndCoordinates) {
  EXPECT_THROW(Lattice(0), UsageError);
  EXPECT_THROW(Lattice(kMaxLatticeDim + 1), UsageError);
  EXPECT_THROW(Lattice(2).point({1, 2, 3}), UsageError);
}

TEST(FreeGroup, SphereSizesMatchClosedForm) {
  for (int k : {2, 3}) {
    const FreeGroup f(k);
    const auto b = ball(f, 7);
    for (int m = 0; m <= 7; ++m) EXPECT_EQ(b.sphere_sizes[static_cast<std::size_t>(m)], oracle::free_sphere_size(k, m)) << k << " " << m;
  }
}

TEST(FreeGroup, ReducesWords) {
  const FreeGroup f(2);
  const auto a = f.parse("ab");
  const auto ainv = f.inv(a);
  EXPECT_EQ(f.mul(a, ainv), f.identity());
  EXPECT_EQ(f.word_length(f.mul(a, f.parse("Ba"))), 2);
  EXPECT_EQ(f.format(f.parse("aAb")), "b");
}

TEST(Heisenberg, CommutatorIsCentralOfLengthFour) {
  const Heisenberg h;
  const auto x = Heisenberg::x(), y = Heisenberg::y();
  const auto c = h.mul(h.mul(x, y), h.mul(h.inv(x), h.inv(y)));
  EXPECT_NE(c, h.identity());
  EXPECT_EQ(h.word_length(c), 4);
  for (const auto& g : h.generators()) EXPECT_EQ(h.mul(c, g), h.mul(g, c));
}

TEST(Heisenberg, GrowthIsQuartic) {
  // |B(n)| / n^4 settles to a constant; the ratio between n=8 and n=16 is near 16
  const Heisenberg h;
  const auto b = ball(h, 16);
  std::size_t b8 = 0, b16 = 0;
  for (std::int64_t m = 0; m <= 16; ++m) {
    if (m <= 8) b8 += b.sphere_sizes[static_cast<std::size_t>(m)];
    b16 += b.sphere_sizes[static_cast<std::size_t>(m)];
  }
  const double ratio = static_cast<double>(b16) / static_cast<double>(b8);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Lamplighter, LampTogglesAreInvolutions) {
  const Lamplighter g;
  const auto t = g.generators()[0];
  EXPECT_EQ(g.mul(t, t), g.identity());
  EXPECT_EQ(g.inv(t), t);
  // moving right, toggling, moving back: a lamp at position 1 with the head home
  const auto r = g.generators()[1];
  const auto w = g.mul(g.mul(r, t), g.inv(r));
  EXPECT_EQ(g.word_length(w), 3);
  EXPECT_EQ(w.head, 0);
  ASSERT_EQ(w.lamps.size(), 1u);
  EXPECT_EQ(w.lamps[0], 1);
}

TEST(Lamplighter, GrowthIsExponential) {
  const auto b = ball(Lamplighter(), 10);
  for (std::int64_t m = 2; m <= 10; ++m) EXPECT_GT(b.sphere_sizes[static_cast<std::size_t>(m)], b.sphere_sizes[static_cast<std::size_t>(m - 1)]);
  const double growth = static_cast<double>(b.sphere_sizes[10]) / static_cast<double>(b.sphere_sizes[9]);
  EXPECT_GT(growth, 1.3);
}

TEST(CanopyTree, DegreesAndDistances) {
  const CanopyTree t(12);
  const auto b = ball(t, 10);
  for (const auto& v : b.elements) {
    std::size_t deg = 0;
    t.for_each_step(v, [&](const CanopyVertex&) { ++deg; });
    EXPECT_LE(deg, t.max_degree());
    EXPECT_GE(deg, 1u);
  }
  EXPECT_EQ(t.word_length(CanopyTree::path_vertex(7)), 7);
  // ball word lengths agree with BFS layers
  std::size_t pos = 0;
  for (std::int64_t m = 0; m <= 10; ++m) {
    for (std::size_t j = 0; j < b.sphere_sizes[static_cast<std::size_t>(m)]; ++j) EXPECT_EQ(t.word_length(b.elements[pos++]), m);
  }
}

TEST(ExplicitGraph, DistancesAndUnreachable) {
  const ExplicitGraph g({{0, 1}, {1, 2}, {2, 3}, {10, 11}});
  EXPECT_EQ(g.vertex_count(), 6u);
  EXPECT_EQ(g.word_length(g.vertex(3)), 3);
  EXPECT_EQ(g.word_length(g.vertex(10)), -1);
  EXPECT_EQ(g.max_degree(), 2u);
  EXPECT_THROW(g.vertex(99), UsageError);
}

TEST(Annuli, PartitionTheBall) {
  const Lattice z2(2);
  const auto parts = annuli(z2, 2, 3);
  std::size_t total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const auto& g : parts[i]) {
      const auto len = z2.word_length(g);
      EXPECT_EQ(annulus_index(len, 2), static_cast<int>(i));
    }
    total += parts[i].size();
  }
  EXPECT_EQ(total, oracle::z2_ball_size(16));
}

TEST(Ball, CapThrowsWithPartialCounts) {
  try {
    ball(FreeGroup(3), 12, 1000);
    FAIL() << "expected CapExceeded";
  } catch (const CapExceeded& e) {
    EXPECT_FALSE(e.partial().empty());
  }
}

TEST(ParseSpace, AcceptsAndRejects) {
  EXPECT_TRUE(std::holds_alternative<Lattice>(parse_space("zd:3")));
  EXPECT_TRUE(std::holds_alternative<FreeGroup>(parse_space("free:2")));
  EXPECT_TRUE(std::holds_alternative<Heisenberg>(parse_space("heis")));
  EXPECT_TRUE(std::holds_alternative<Lamplighter>(parse_space("lamp")));
  EXPECT_TRUE(std::holds_alternative<CanopyTree>(parse_space("canopy:5")));
  EXPECT_THROW(parse_space("zd:x"), UsageError);
  EXPECT_THROW(parse_space("torus:2"), UsageError);
  EXPECT_THROW(parse_space("graph:/nonexistent/file"), UsageError);
}

// Group axioms and metric properties on random products of generators.
template <class G>
class GroupAxioms : public ::testing::Test {};

template <class G>
G make_group();
template <>
Lattice make_group<Lattice>() { return Lattice(3); }
template <>
FreeGroup make_group<FreeGroup>() { return FreeGroup(2); }
template <>
Heisenberg make_group<Heisenberg>() { return Heisenberg(); }
template <>
Lamplighter make_group<Lamplighter>() { return Lamplighter(); }

using GroupTypes = ::testing::Types<Lattice, FreeGroup, Heisenberg, Lamplighter>;
TYPED_TEST_SUITE(GroupAxioms, GroupTypes);

TYPED_TEST(GroupAxioms, RandomWordsSatisfyAxioms) {
  const auto g = make_group<TypeParam>();
  std::mt19937_64 rng(7);
  const auto gens = g.generators();
  auto random_word = [&](int len) {
    auto w = g.identity();
    for (int i = 0; i < len; ++i) w = g.mul(w, gens[rng() % gens.size()]);
    return w;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_word(static_cast<int>(rng() % 6));
    const auto b = random_word(static_cast<int>(rng() % 6));
    const auto c = random_word(static_cast<int>(rng() % 6));
    EXPECT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
    EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
    EXPECT_EQ(g.mul(g.identity(), a), a);
    EXPECT_EQ(g.word_length(a), g.word_length(g.inv(a)));
    EXPECT_LE(g.word_length(g.mul(a, b)), g.word_length(a) + g.word_length(b));
    EXPECT_EQ(g.parse(g.format(a)), a);
    EXPECT_EQ(g.hash(g.mul(g.mul(a, g.inv(b)), b)), g.hash(a));
  }
}

TYPED_TEST(GroupAxioms, BallLayersMatchWordLength) {
  const auto g = make_group<TypeParam>();
  const auto b = ball(g, 4);
  std::size_t pos = 0;
  for (std::int64_t m = 0; m <= 4; ++m) {
    for (std::size_t j = 0; j < b.sphere_sizes[static_cast<std::size_t>(m)]; ++j) EXPECT_EQ(g.word_length(b.elements[pos++]), m);
  }
  // ball is closed under inversion
  std::set<std::string> names;
  for (const auto& e : b.elements) names.insert(g.format(e));
  for (const auto& e : b.elements) EXPECT_TRUE(names.contains(g.format(g.inv(e))));
}
