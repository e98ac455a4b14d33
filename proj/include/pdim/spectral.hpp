#pragma once

// Random-walk diagnostics: return probabilities p_n of the mu-walk, the
// spectral-radius ratio estimator, the |S|^-1 <= rho^2 check, and edge
// isoperimetric ratios of finite sets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdim/errors.hpp"
#include "pdim/flat_index.hpp"
#include "pdim/groups.hpp"
#include "pdim/measures.hpp"
#include "pdim/rational.hpp"

namespace pdim {

enum class ReturnMode { element, radial };

inline const char* to_string(ReturnMode m) { return m == ReturnMode::element ? "element-convolution" : "radial-chain"; }

struct ReturnTable {
  std::string group;
  std::string measure;
  ReturnMode mode = ReturnMode::element;
  std::vector<double> p;                         // p[n], n = 0..n_max
  std::optional<std::vector<Rational>> exact;   // same indexing

  int n_max() const noexcept { return static_cast<int>(p.size()) - 1; }
};

inline constexpr int kExactConvolutionSteps = 64;

// p_n = P(walk with increments mu is back at e after n steps), by iterating
// the distribution over the reachable set. Exact (rational) when mu is exact
// and n_max <= kExactConvolutionSteps, unless `exact` is false.
template <Group G>
ReturnTable return_probabilities(const Measure<G>& mu, int n_max, bool exact = true,
                                 std::size_t cap = kDefaultElementCap) {
  if (n_max < 0) throw UsageError("n_max must be non-negative");
  using E = element_t<G>;
  const auto& ctx = mu.context();
  const auto& atoms = mu.support();
  ReturnTable t;
  t.group = ctx.name();
  t.measure = mu.label();
  t.mode = ReturnMode::element;
  t.p.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  t.p[0] = 1.0;
  const bool use_exact = exact && mu.exact() && n_max <= kExactConvolutionSteps;

  // Mass that cannot get back to e within the remaining steps is dropped.
  const std::int64_t reach = mu.radius();
  auto can_return = [&](const E& g, int steps_done) { return ctx.word_length(g) <= (n_max - steps_done) * reach; };

  FlatIndex<E> index;
  const E e = ctx.identity();
  index.insert(e, ctx.hash(e));
  auto locate = [&](const E& g) {
    const auto [i, fresh] = index.insert(g, ctx.hash(g));
    if (index.size() > cap) {
      throw CapExceeded("return-probability support exceeds element cap " + std::to_string(cap), {index.size()});
    }
    return i;
  };

  if (use_exact) {
    BigInt denom = 1;
    for (const auto& a : atoms) {
      const BigInt d = boost::multiprecision::denominator(*a.exact);
      denom = denom / boost::multiprecision::gcd(denom, d) * d;
    }
    std::vector<BigInt> iw;
    for (const auto& a : atoms) iw.push_back(boost::multiprecision::numerator(*a.exact) * (denom / boost::multiprecision::denominator(*a.exact)));
    // weighted walk counts; p_n = count_n(e) / D^n
    std::vector<BigInt> cur{BigInt(1)};
    std::vector<Rational> ex(static_cast<std::size_t>(n_max) + 1, Rational(0));
    ex[0] = 1;
    BigInt dn = 1;
    for (int n = 1; n <= n_max; ++n) {
      std::vector<BigInt> next(index.size());
      const std::size_t live = cur.size();
      for (std::size_t i = 0; i < live; ++i) {
        if (cur[i] == 0) continue;
        const E g = index[static_cast<std::uint32_t>(i)];
        for (std::size_t j = 0; j < atoms.size(); ++j) {
          const E h = ctx.mul(g, atoms[j].element);
          if (!can_return(h, n)) continue;
          const auto k = locate(h);
          if (k >= next.size()) next.resize(index.size());
          next[k] += cur[i] * iw[j];
        }
      }
      next.resize(index.size());
      cur = std::move(next);
      dn *= denom;
      ex[static_cast<std::size_t>(n)] = Rational(cur[0], dn);
      t.p[static_cast<std::size_t>(n)] = to_double(ex[static_cast<std::size_t>(n)]);
    }
    t.exact = std::move(ex);
    return t;
  }

  std::vector<long double> cur{1.0L};
  for (int n = 1; n <= n_max; ++n) {
    std::vector<long double> next(index.size(), 0.0L);
    const std::size_t live = cur.size();
    for (std::size_t i = 0; i < live; ++i) {
      if (cur[i] == 0.0L) continue;
      const E g = index[static_cast<std::uint32_t>(i)];
      for (const auto& a : atoms) {
        const E h = ctx.mul(g, a.element);
        if (!can_return(h, n)) continue;
        const auto k = locate(h);
        if (k >= next.size()) next.resize(index.size(), 0.0L);
        next[k] += cur[i] * static_cast<long double>(a.mass);
      }
    }
    next.resize(index.size(), 0.0L);
    cur = std::move(next);
    t.p[static_cast<std::size_t>(n)] = static_cast<double>(cur[0]);
  }
  return t;
}

// Free group F_k, uniform on the 2k generators: the distance to e is a
// birth-death chain (out with prob (2k-1)/2k, back with 1/2k away from e).
// Counts are exact integers, so every p_n is an exact rational.
inline ReturnTable radial_return_probabilities(int k, int n_max) {
  if (k < 1) throw UsageError("radial chain needs k >= 1");
  if (n_max < 0) throw UsageError("n_max must be non-negative");
  ReturnTable t;
  t.group = "free:" + std::to_string(k);
  t.measure = "uniform-ball:1";
  t.mode = ReturnMode::radial;
  t.p.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  std::vector<Rational> ex(static_cast<std::size_t>(n_max) + 1, Rational(0));
  const long long deg = 2LL * k;
  std::vector<BigInt> cur{BigInt(1)};  // cur[d] = number of walks at distance d
  BigInt total = 1;
  ex[0] = 1;
  t.p[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<BigInt> next(cur.size() + 1);
    for (std::size_t d = 0; d < cur.size(); ++d) {
      if (cur[d] == 0) continue;
      if (d == 0) {
        next[1] += cur[0] * deg;
      } else {
        next[d + 1] += cur[d] * (deg - 1);
        next[d - 1] += cur[d];
      }
    }
    cur = std::move(next);
    total *= deg;
    ex[static_cast<std::size_t>(n)] = Rational(cur[0], total);
    t.p[static_cast<std::size_t>(n)] = to_double(ex[static_cast<std::size_t>(n)]);
  }
  t.exact = std::move(ex);
  return t;
}

struct RhoEstimate {
  double rho = 0.0;        // sqrt(p_m / p_{m-2}) at the largest even m
  int m = 0;
  std::vector<double> root_sequence;  // p_{2j}^(1/2j), j = 1..
};

inline RhoEstimate rho_estimate(const ReturnTable& t) {
  if (t.n_max() < 20) throw UsageError("rho_estimate needs n_max >= 20");
  RhoEstimate r;
  int m = t.n_max() - (t.n_max() % 2);
  r.m = m;
  const double hi = t.p[static_cast<std::size_t>(m)];
  const double lo = t.p[static_cast<std::size_t>(m - 2)];
  if (!(lo > 0.0)) throw UsageError("rho_estimate: vanishing return probability");
  r.rho = std::sqrt(hi / lo);
  for (int j = 2; j <= t.n_max(); j += 2) r.root_sequence.push_back(std::pow(t.p[static_cast<std::size_t>(j)], 1.0 / j));
  return r;
}

struct KestenVerdict {
  double lhs = 0.0;  // 1 / |S|
  double rhs = 0.0;  // rho^2
  bool pass = false;
};

inline KestenVerdict kesten_inequality_check(std::size_t S_size, double rho_hat, double tolerance = 0.0) {
  if (S_size == 0) throw UsageError("generating set is empty");
  KestenVerdict v;
  v.lhs = 1.0 / static_cast<double>(S_size);
  v.rhs = rho_hat * rho_hat;
  v.pass = v.lhs <= v.rhs + tolerance;
  return v;
}

struct CheegerRow {
  std::string label;
  std::size_t size = 0;
  std::size_t boundary = 0;  // edges leaving the set
  double ratio = 0.0;
};

struct CheegerReport {
  std::size_t degree = 0;
  std::vector<CheegerRow> rows;
  double iota_upper = 0.0;       // min ratio over the family
  double bound_raw = 0.0;        // 1 / (d iota)
  double bound_normalized = 0.0; // 1 / (d (iota / d)) = 1 / iota
};

template <MetricSpace S>
CheegerRow boundary_ratio(const S& space, const std::vector<element_t<S>>& F, std::string label) {
  if (F.empty()) throw UsageError("boundary ratio of an empty set");
  ElementSet<S> in(F.begin(), F.end(), 16, SpaceHash<S>{&space});
  CheegerRow r;
  r.label = std::move(label);
  r.size = in.size();
  for (const auto& v : in) {
    space.for_each_step(v, [&](const element_t<S>& w) {
      if (!in.contains(w)) ++r.boundary;
    });
  }
  r.ratio = static_cast<double>(r.boundary) / static_cast<double>(r.size);
  return r;
}

template <MetricSpace S>
std::size_t root_degree(const S& space) {
  std::size_t d = 0;
  space.for_each_step(space.identity(), [&](const element_t<S>&) { ++d; });
  return d;
}

template <MetricSpace S>
CheegerReport cheeger_report(const S& space, const std::vector<std::pair<std::string, std::vector<element_t<S>>>>& family) {
  if (family.empty()) throw UsageError("cheeger_report needs at least one set");
  CheegerReport rep;
  rep.degree = root_degree(space);
  rep.iota_upper = kInf;
  for (const auto& [label, F] : family) {
    rep.rows.push_back(boundary_ratio(space, F, label));
    rep.iota_upper = std::min(rep.iota_upper, rep.rows.back().ratio);
  }
  const double d = static_cast<double>(rep.degree);
  rep.bound_raw = rep.iota_upper > 0.0 ? 1.0 / (d * rep.iota_upper) : kInf;
  rep.bound_normalized = rep.iota_upper > 0.0 ? 1.0 / rep.iota_upper : kInf;
  return rep;
}

// Balls B(0..n_max) as the default family.
template <MetricSpace S>
CheegerReport cheeger_report(const S& space, std::int64_t n_max, std::size_t cap = kDefaultElementCap) {
  const auto b = ball(space, n_max, cap);
  std::vector<std::pair<std::string, std::vector<element_t<S>>>> family;
  std::size_t upto = 0;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    upto += b.sphere_sizes[static_cast<std::size_t>(n)];
    family.emplace_back("B(" + std::to_string(n) + ")", std::vector<element_t<S>>(b.elements.begin(), b.elements.begin() + static_cast<std::ptrdiff_t>(upto)));
  }
  return cheeger_report(space, family);
}

}  // namespace pdim
