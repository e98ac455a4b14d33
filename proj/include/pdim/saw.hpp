#pragma once

// Weighted self-avoiding walks from the identity: sigma_n(mu), plain SAW
// counts c_n, the uniform-measure identity sigma_n * |S|^n = c_n, and the
// certified upper bounds sigma_n^(1/n) >= nu(mu).
//
// Increments are evaluated as mu(g_{i-1}^-1 g_i); for symmetric mu this is
// the same as mu(g_i g_{i-1}^-1).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdim/errors.hpp"
#include "pdim/groups.hpp"
#include "pdim/measures.hpp"
#include "pdim/parallel.hpp"
#include "pdim/percolation.hpp"
#include "pdim/rational.hpp"
#include "pdim/stats.hpp"

namespace pdim {

inline constexpr int kExactSawDepth = 8;
inline constexpr std::uint64_t kDefaultSawNodeCap = 2'000'000'000;

struct SawEntry {
  int n = 0;
  double value = 0.0;
  std::optional<Rational> exact;
  double error_bound = 0.0;  // absolute, floating mode only
  std::uint64_t walks = 0;   // number of self-avoiding walks of length n
};

struct SawTable {
  std::string group;
  std::string measure;
  std::vector<SawEntry> entries;  // entries[n], n = 0..n_max

  const SawEntry& at(int n) const {
    if (n < 0 || static_cast<std::size_t>(n) >= entries.size()) throw UsageError("sigma_" + std::to_string(n) + " not tabulated");
    return entries[static_cast<std::size_t>(n)];
  }
  int n_max() const noexcept { return static_cast<int>(entries.size()) - 1; }
};

struct SawOptions {
  bool exact = true;  // use rationals up to kExactSawDepth when the measure allows
  int exact_depth = kExactSawDepth;
  std::uint64_t node_cap = kDefaultSawNodeCap;
  unsigned threads = 1;
};

namespace detail {

// Per-branch accumulators, merged in branch order.
struct SawAccum {
  std::vector<CompensatedSum> sums;
  std::vector<BigInt> numerators;  // exact mode: sum of integer weight products
  std::vector<std::uint64_t> walks;
};

}  // namespace detail

// sigma_0 .. sigma_{n_max} by depth-first enumeration.
template <Group G>
SawTable sigma_table(const Measure<G>& mu, int n_max, const SawOptions& opt = {}) {
  if (n_max < 0) throw UsageError("n_max must be non-negative");
  using E = element_t<G>;
  const auto& ctx = mu.context();
  const auto& atoms = mu.support();
  const std::size_t k = atoms.size();

  // Exact weights as integers over a common denominator D.
  const bool exact = opt.exact && mu.exact();
  const int exact_depth = exact ? std::min(n_max, opt.exact_depth) : 0;
  BigInt denom = 1;
  std::vector<BigInt> iw;
  if (exact) {
    for (const auto& a : atoms) {
      const BigInt d = boost::multiprecision::denominator(*a.exact);
      denom = denom / boost::multiprecision::gcd(denom, d) * d;
    }
    for (const auto& a : atoms) iw.push_back(boost::multiprecision::numerator(*a.exact) * (denom / boost::multiprecision::denominator(*a.exact)));
  }

  std::atomic<std::uint64_t> nodes{0};
  std::vector<detail::SawAccum> branch(k);
  parallel_for(k, opt.threads, [&](unsigned, std::size_t first) {
    auto& acc = branch[first];
    acc.sums.assign(static_cast<std::size_t>(n_max) + 1, {});
    acc.walks.assign(static_cast<std::size_t>(n_max) + 1, 0);
    if (exact) acc.numerators.assign(static_cast<std::size_t>(exact_depth) + 1, 0);
    if (n_max == 0) return;
    std::vector<E> path{ctx.identity(), atoms[first].element};
    std::vector<double> prod{1.0, atoms[first].mass};
    std::vector<BigInt> iprod;
    if (exact) iprod = {BigInt(1), iw[first]};
    std::vector<std::size_t> next_atom{0, 0};
    auto record = [&](std::size_t depth) {
      acc.sums[depth].add(prod[depth]);
      ++acc.walks[depth];
      if (exact && depth <= static_cast<std::size_t>(exact_depth)) acc.numerators[depth] += iprod[depth];
    };
    record(1);
    std::uint64_t local = 0;
    while (path.size() > 1) {
      const std::size_t depth = path.size() - 1;
      if (depth == static_cast<std::size_t>(n_max) || next_atom[depth] == k) {
        path.pop_back();
        prod.pop_back();
        if (exact) iprod.pop_back();
        next_atom.pop_back();
        continue;
      }
      const std::size_t j = next_atom[depth]++;
      E w = ctx.mul(path.back(), atoms[j].element);
      if (std::find(path.begin(), path.end(), w) != path.end()) continue;
      if (++local == 4096) {
        if (nodes.fetch_add(local) + local > opt.node_cap) {
          throw CapExceeded("self-avoiding walk enumeration exceeds node cap " + std::to_string(opt.node_cap), {});
        }
        local = 0;
      }
      path.push_back(std::move(w));
      prod.push_back(prod.back() * atoms[j].mass);
      if (exact) iprod.push_back(iprod.back() * iw[j]);
      next_atom.push_back(0);
      record(depth + 1);
    }
  });

  SawTable t;
  t.group = ctx.name();
  t.measure = mu.label();
  t.entries.resize(static_cast<std::size_t>(n_max) + 1);
  t.entries[0] = {0, 1.0, Rational(1), 0.0, 1};
  constexpr double u = 0x1.0p-53;
  for (int n = 1; n <= n_max; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    CompensatedSum total;
    double err = 0.0;
    std::uint64_t walks = 0;
    for (const auto& b : branch) {
      total.add(b.sums[idx].value());
      err += b.sums[idx].error_bound();
      walks += b.walks[idx];
    }
    auto& e = t.entries[idx];
    e.n = n;
    e.walks = walks;
    // products of n masses carry relative error at most ~ n u each
    e.error_bound = err + total.error_bound() + 1.01 * n * u * total.value();
    if (exact && n <= exact_depth) {
      BigInt num = 0;
      for (const auto& b : branch) num += b.numerators[idx];
      e.exact = Rational(num, boost::multiprecision::pow(denom, static_cast<unsigned>(n)));
      e.value = to_double(*e.exact);
      e.error_bound = 0.0;
    } else {
      e.value = total.value();
    }
  }
  return t;
}

// sigma_n alone.
template <Group G>
SawEntry sigma_n(const Measure<G>& mu, int n, const SawOptions& opt = {}) {
  return sigma_table(mu, n, opt).at(n);
}

// c_0 .. c_{n_max}: self-avoiding walks from the root of the (Cayley) graph.
template <MetricSpace S>
std::vector<std::uint64_t> saw_counts(const S& space, int n_max, std::uint64_t node_cap = kDefaultSawNodeCap) {
  if (n_max < 0) throw UsageError("n_max must be non-negative");
  using E = element_t<S>;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_max) + 1, 0);
  counts[0] = 1;
  std::vector<E> path{space.identity()};
  std::uint64_t nodes = 0;
  auto dfs = [&](auto&& self) -> void {
    const std::size_t depth = path.size() - 1;
    if (depth == static_cast<std::size_t>(n_max)) return;
    std::vector<E> steps;
    space.for_each_step(path.back(), [&](const E& w) { steps.push_back(w); });
    for (auto& w : steps) {
      if (std::find(path.begin(), path.end(), w) != path.end()) continue;
      if (++nodes > node_cap) {
        throw CapExceeded("self-avoiding walk count exceeds node cap " + std::to_string(node_cap),
                          std::vector<std::size_t>(counts.begin(), counts.end()));
      }
      ++counts[depth + 1];
      path.push_back(std::move(w));
      self(self);
      path.pop_back();
    }
  };
  dfs(dfs);
  return counts;
}

template <MetricSpace S>
std::uint64_t saw_count(const S& space, int n) {
  return saw_counts(space, n).back();
}

// sigma_n(mu) |S|^n = c_n(X) for mu uniform on S and X = Cay(G, S).
struct NumuRow {
  int n = 0;
  Rational sigma;
  BigInt scaled;        // sigma_n |S|^n
  std::uint64_t c_n = 0;
  bool pass = false;
};

struct NumuReport {
  std::size_t S_size = 0;
  std::vector<NumuRow> rows;
  bool pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const NumuRow& r) { return r.pass; });
  }
};

namespace detail {

// Unweighted SAW counts along steps g -> g s, s in S.
template <Group G>
std::vector<std::uint64_t> saw_counts_along(const G& ctx, const std::vector<element_t<G>>& S, int n_max) {
  using E = element_t<G>;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_max) + 1, 0);
  counts[0] = 1;
  std::vector<E> path{ctx.identity()};
  auto dfs = [&](auto&& self) -> void {
    const std::size_t depth = path.size() - 1;
    if (depth == static_cast<std::size_t>(n_max)) return;
    for (const auto& s : S) {
      E w = ctx.mul(path.back(), s);
      if (std::find(path.begin(), path.end(), w) != path.end()) continue;
      ++counts[depth + 1];
      path.push_back(std::move(w));
      self(self);
      path.pop_back();
    }
  };
  dfs(dfs);
  return counts;
}

}  // namespace detail

template <Group G>
NumuReport check_numu(const Measure<G>& mu, int n_max, unsigned threads = 1) {
  if (n_max < 0 || n_max > kExactSawDepth) throw UsageError("check_numu needs 0 <= n_max <= " + std::to_string(kExactSawDepth));
  if (!mu.exact()) throw UsageError("check_numu needs a measure with exact masses");
  const Rational unit(1, static_cast<long long>(mu.support_size()));
  std::vector<element_t<G>> S;
  for (const auto& a : mu.support()) {
    if (*a.exact != unit) throw UsageError("check_numu needs the uniform measure on a set");
    S.push_back(a.element);
  }
  SawOptions opt;
  opt.threads = threads;
  const auto table = sigma_table(mu, n_max, opt);
  const auto counts = detail::saw_counts_along(mu.context(), S, n_max);
  NumuReport rep;
  rep.S_size = S.size();
  for (int n = 0; n <= n_max; ++n) {
    NumuRow row;
    row.n = n;
    row.sigma = *table.at(n).exact;
    const Rational scaled = row.sigma * pow(Rational(static_cast<long long>(S.size())), static_cast<unsigned>(n));
    row.c_n = counts[static_cast<std::size_t>(n)];
    row.pass = boost::multiprecision::denominator(scaled) == 1 && scaled == Rational(BigInt(row.c_n));
    row.scaled = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

struct NuBound {
  int n = 0;
  double value = 0.0;  // sigma_n^(1/n)
  int best_n = 0;
  double best = 0.0;   // min over tabulated 1 <= m <= n
};

// sigma_n^(1/n) >= nu(mu) by submultiplicativity, and the best such bound.
inline NuBound nu_upper(const SawTable& table, int n) {
  if (n < 1) throw UsageError("nu_upper needs n >= 1");
  NuBound b;
  b.n = n;
  b.value = std::pow(table.at(n).value, 1.0 / n);
  b.best = kInf;
  for (int m = 1; m <= n; ++m) {
    const double v = std::pow(table.at(m).value, 1.0 / m);
    if (v < b.best) {
      b.best = v;
      b.best_n = m;
    }
  }
  return b;
}

// Pairs (m, n) with sigma_{m+n} > sigma_m sigma_n; exact comparison when possible.
inline std::vector<std::pair<int, int>> submultiplicativity_violations(const SawTable& table) {
  std::vector<std::pair<int, int>> bad;
  for (int m = 1; m <= table.n_max(); ++m) {
    for (int n = m; m + n <= table.n_max(); ++n) {
      const auto &a = table.at(m), &b = table.at(n), &c = table.at(m + n);
      bool ok;
      if (a.exact && b.exact && c.exact) {
        ok = *c.exact <= *a.exact * *b.exact;
      } else {
        ok = c.value - c.error_bound <= a.value * b.value + a.error_bound * b.value + b.error_bound * a.value + 1e-15;
      }
      if (!ok) bad.emplace_back(m, n);
    }
  }
  return bad;
}

struct LacocoRow {
  int n = 0;
  double bound = 0.0;  // 1 / sigma_n^(1/n)
  bool pass = false;
};

struct LacocoVerdict {
  bool capped = false;
  double lambda_hat = 0.0;
  double tolerance = 0.02;
  std::vector<LacocoRow> rows;
  bool pass() const {
    return capped || std::all_of(rows.begin(), rows.end(), [](const LacocoRow& r) { return r.pass; });
  }
};

// lambda_hat >= (1 - tol) / sigma_n^(1/n) for every tabulated n >= 1; capped passes.
inline LacocoVerdict check_lacoco(const LambdaCEstimate& est, const SawTable& table, double tolerance = 0.02) {
  LacocoVerdict v;
  v.tolerance = tolerance;
  v.capped = est.capped || !est.lambda_hat;
  if (v.capped) return v;
  v.lambda_hat = *est.lambda_hat;
  for (int n = 1; n <= table.n_max(); ++n) {
    LacocoRow r;
    r.n = n;
    r.bound = 1.0 / std::pow(table.at(n).value, 1.0 / n);
    r.pass = v.lambda_hat >= r.bound * (1.0 - tolerance);
    v.rows.push_back(r);
  }
  return v;
}

struct AtomDragReport {
  double delta = 0.0;
  std::optional<Rational> exact_delta;
  std::string element;
  double drag_bound = 0.0;          // 1 - delta / 2
  std::vector<double> root_sigma;   // root_sigma[n-1] = sigma_n^(1/n)
};

template <Group G>
AtomDragReport atom_drag_report(const Measure<G>& mu, int n_max, const SawOptions& opt = {}) {
  if (n_max < 1) throw UsageError("atom_drag_report needs n_max >= 1");
  const auto top = max_atom(mu);
  AtomDragReport r;
  r.delta = top.mass;
  r.exact_delta = top.exact;
  r.element = mu.context().format(top.element);
  r.drag_bound = 1.0 - top.mass / 2.0;
  const auto table = sigma_table(mu, n_max, opt);
  for (int n = 1; n <= n_max; ++n) r.root_sigma.push_back(std::pow(table.at(n).value, 1.0 / n));
  return r;
}

}  // namespace pdim
