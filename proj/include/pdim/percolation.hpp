#pragma once

// Long-range Bernoulli percolation G^mu(lambda) on a group (or nearest-neighbour
// percolation on a graph): cluster exploration of the identity, survival
// estimates, the lambda_c bisection, and the finite-graph giant component.
//
// Edge {g, h} is open iff u < 1 - exp(-lambda mu(g^-1 h)), where u is a
// counter-based uniform keyed by (seed, trial, unordered pair). The same u
// serves every lambda, so clusters are nested in lambda and each trial has a
// well-defined activation value: the least lambda at which it escapes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "pdim/errors.hpp"
#include "pdim/flat_index.hpp"
#include "pdim/groups.hpp"
#include "pdim/measures.hpp"
#include "pdim/parallel.hpp"
#include "pdim/rng.hpp"
#include "pdim/stats.hpp"
#include "pdim/union_find.hpp"

namespace pdim {

// Finite-window surrogate for "has an infinite component".
enum class SurvivalCriterion {
  escape,       // P(cluster reaches word length L)
  persistence,  // P(cluster reaches 2L | it reaches L)
};

inline const char* to_string(SurvivalCriterion c) { return c == SurvivalCriterion::escape ? "escape" : "persistence"; }

struct PercConfig {
  double lambda = 1.0;
  std::int64_t escape_radius = 40;  // L
  std::size_t cluster_cap = 2'000'000;
  std::size_t trials = 10'000;
  std::uint64_t seed = 1;
  double theta = 0.5;
  double lambda_max = 64.0;
  double lambda_min = 1e-3;
  double bisection_rel_width = 1e-3;
  double confidence = 0.95;
  SurvivalCriterion criterion = SurvivalCriterion::persistence;
  unsigned threads = 1;

  void validate() const {
    if (escape_radius < 1) throw UsageError("escape radius L must be >= 1");
    if (trials < 1) throw UsageError("trials must be >= 1");
    if (!(theta > 0.0 && theta < 1.0)) throw UsageError("theta must lie in (0,1)");
    if (!(lambda_max >= 1.0)) throw UsageError("lambda_max must be >= 1");
    if (!(lambda >= 0.0)) throw UsageError("lambda must be non-negative");
    if (!(lambda_min > 0.0 && lambda_min < lambda_max)) throw UsageError("lambda_min must lie in (0, lambda_max)");
    if (!(bisection_rel_width > 0.0 && bisection_rel_width < 0.01)) throw UsageError("bisection width must be below 1%");
    if (cluster_cap < 1) throw UsageError("cluster cap must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Kernels: who neighbours whom, and with what weight.

template <class K>
concept PercolationKernel = requires(const K& k, const typename K::element_type& v) {
  { k.root() } -> std::convertible_to<typename K::element_type>;
  { k.word_length(v) } -> std::convertible_to<std::int64_t>;
  { k.hash(v) } -> std::convertible_to<std::uint64_t>;
  { k.description() } -> std::convertible_to<std::string>;
  k.for_each_neighbor(v, [](const typename K::element_type&, double) {});
};

// Long-range kernel of a measure: v ~ v s with weight mu(s).
template <Group G>
class GroupKernel {
 public:
  using element_type = element_t<G>;
  using space_type = G;

  explicit GroupKernel(const Measure<G>& mu) : mu_(&mu) {}

  const Measure<G>& measure() const noexcept { return *mu_; }
  const G& space() const noexcept { return mu_->context(); }
  element_type root() const { return space().identity(); }
  std::int64_t word_length(const element_type& v) const { return space().word_length(v); }
  std::uint64_t hash(const element_type& v) const { return space().hash(v); }
  std::string description() const { return space().name() + " " + mu_->label(); }

  template <class F>
  void for_each_neighbor(const element_type& v, F&& f) const {
    const auto& ctx = space();
    for (const auto& a : mu_->support()) f(ctx.mul(v, a.element), a.mass);
  }

 private:
  const Measure<G>* mu_;
};

// Nearest-neighbour kernel on a graph with one weight per edge.
template <MetricSpace S>
class GraphKernel {
 public:
  using element_type = element_t<S>;
  using space_type = S;

  GraphKernel(const S& space, double weight) : space_(&space), weight_(weight) {
    if (!(weight > 0.0)) throw UsageError("graph edge weight must be positive");
  }

  // Weight 1 / (max degree): a sub-probability row at every vertex.
  static GraphKernel nearest_neighbour(const S& space) { return GraphKernel(space, 1.0 / static_cast<double>(space.max_degree())); }

  double weight() const noexcept { return weight_; }
  const S& space() const noexcept { return *space_; }
  element_type root() const { return space_->identity(); }
  std::int64_t word_length(const element_type& v) const { return space_->word_length(v); }
  std::uint64_t hash(const element_type& v) const { return space_->hash(v); }
  std::string description() const { return space_->name() + " nearest-neighbour"; }

  // lambda giving per-edge open probability p.
  double lambda_for(double p) const { return -std::log1p(-p) / weight_; }

  template <class F>
  void for_each_neighbor(const element_type& v, F&& f) const {
    space_->for_each_step(v, [&](const element_type& w) { f(w, weight_); });
  }

 private:
  const S* space_;
  double weight_;
};

// Rigorous reasons why lambda_c is infinite regardless of the window.
template <class K>
std::optional<std::string> structural_divergence(const K& kernel) {
  if constexpr (requires { kernel.measure(); }) {
    if constexpr (std::same_as<typename K::space_type, Lattice>) {
      if (kernel.space().dim() == 1) {
        return std::string("finite-range measure on Z^1: no edge crosses a given cut with probability "
                           "exp(-lambda sum_{g>0} g mu(g)) > 0, so closed cuts recur and every cluster is finite");
      }
    }
  } else if constexpr (std::same_as<typename K::space_type, CanopyTree>) {
    return std::string("canopy tree: every spine edge is a cut edge into a finite side, so p_c = 1");
  } else if constexpr (std::same_as<typename K::space_type, ExplicitGraph>) {
    return std::string("finite graph: no infinite component exists");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Single-edge quantities.

template <Group G>
double edge_presence_prob(const Measure<G>& mu, double lambda, const element_t<G>& g, const element_t<G>& h) {
  if (!(lambda >= 0.0)) throw UsageError("lambda must be non-negative");
  const auto& ctx = mu.context();
  return -std::expm1(-lambda * mu.mass(ctx.mul(ctx.inv(g), h)));
}

// Poisson(lambda mu(g^-1 h)) multiplicity; degree diagnostics only.
template <Group G>
std::uint64_t sample_parallel_edge_count(const Measure<G>& mu, double lambda, const element_t<G>& g, const element_t<G>& h,
                                         CounterRng& rng) {
  const auto& ctx = mu.context();
  const double mean = lambda * mu.mass(ctx.mul(ctx.inv(g), h));
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> pd(mean);
  return pd(rng);
}

// Expected number of distinct neighbours of the identity: sum_g (1 - exp(-lambda mu(g))).
template <Group G>
double expected_simple_degree(const Measure<G>& mu, double lambda) {
  CompensatedSum s;
  for (const auto& a : mu.support()) s.add(-std::expm1(-lambda * a.mass));
  return s.value();
}

// Open/closed state of {g, h} in the given trial (same answer from either end).
template <PercolationKernel K>
bool edge_present(const K& kernel, const PercConfig& cfg, std::uint64_t trial, const typename K::element_type& g,
                  const typename K::element_type& h, double weight, double lambda) {
  const double u = pair_uniform(stream_key(cfg.seed, trial), pair_key(kernel.hash(g), kernel.hash(h)));
  return edge_open(u, weight, lambda);
}

// ---------------------------------------------------------------------------
// Cluster exploration at fixed lambda.

struct ClusterStats {
  std::size_t size = 1;
  std::int64_t max_word_length = 0;
  bool escaped = false;
  bool truncated = false;
  bool hit_target = false;
  std::uint64_t edge_examinations = 0;
};

template <PercolationKernel K>
class ClusterExplorer {
 public:
  using E = typename K::element_type;

  struct Options {
    std::int64_t escape_radius = std::numeric_limits<std::int64_t>::max();
    std::size_t cap = 2'000'000;
    std::int64_t radius_limit = std::numeric_limits<std::int64_t>::max();  // do not enter vertices beyond this
    const E* target = nullptr;
  };

  explicit ClusterExplorer(const K& kernel) : kernel_(&kernel) {}

  // Breadth-first exploration of the identity's cluster. Each pair's state is
  // a pure function of (trial key, pair), so re-examination is consistent.
  ClusterStats explore(double lambda, std::uint64_t trial_key, const Options& opt) {
    seen_.clear();
    ClusterStats st;
    const E root = kernel_->root();
    seen_.insert(root, kernel_->hash(root));
    if (opt.target && *opt.target == root) {
      st.hit_target = true;
      return st;
    }
    if (kernel_->word_length(root) >= opt.escape_radius) {
      st.escaped = true;
      return st;
    }
    for (std::uint32_t head = 0; head < seen_.size(); ++head) {
      const E v = seen_[head];
      const std::uint64_t hv = seen_.hash_at(head);
      bool stop = false;
      kernel_->for_each_neighbor(v, [&](const E& w, double weight) {
        if (stop) return;
        ++st.edge_examinations;
        const std::uint64_t hw = kernel_->hash(w);
        if (seen_.find(w, hw) != FlatIndex<E>::npos) return;
        if (!edge_open(pair_uniform(trial_key, pair_key(hv, hw)), weight, lambda)) return;
        const std::int64_t len = kernel_->word_length(w);
        if (len > opt.radius_limit) return;
        seen_.insert(w, hw);
        st.size = seen_.size();
        st.max_word_length = std::max(st.max_word_length, len);
        if (opt.target && w == *opt.target) {
          st.hit_target = true;
          stop = true;
        } else if (len >= opt.escape_radius) {
          st.escaped = true;
          stop = true;
        } else if (seen_.size() >= opt.cap) {
          st.truncated = true;
          stop = true;
        }
      });
      if (stop) break;
    }
    return st;
  }

  // Vertices found by the last exploration, in discovery order.
  const std::vector<E>& members() const noexcept { return seen_.elements(); }

 private:
  const K* kernel_;
  FlatIndex<E> seen_;
};

template <PercolationKernel K>
ClusterStats explore_cluster(const K& kernel, const PercConfig& cfg, std::uint64_t trial_index) {
  ClusterExplorer<K> ex(kernel);
  typename ClusterExplorer<K>::Options opt;
  opt.escape_radius = cfg.escape_radius;
  opt.cap = cfg.cluster_cap;
  return ex.explore(cfg.lambda, stream_key(cfg.seed, trial_index), opt);
}

struct ProportionEstimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  Interval ci;
};

inline ProportionEstimate make_proportion(std::size_t k, std::size_t n, double confidence) {
  return {k, n, n ? static_cast<double>(k) / static_cast<double>(n) : 0.0, wilson_interval(k, n, confidence)};
}

// Escape frequency at cfg.lambda over cfg.trials independent trials.
template <PercolationKernel K>
ProportionEstimate survival_probability(const K& kernel, const PercConfig& cfg) {
  cfg.validate();
  std::vector<std::uint8_t> escaped(cfg.trials, 0);
  const unsigned workers = std::max(1u, cfg.threads);
  std::vector<ClusterExplorer<K>> explorers(workers, ClusterExplorer<K>(kernel));
  typename ClusterExplorer<K>::Options opt;
  opt.escape_radius = cfg.escape_radius;
  opt.cap = cfg.cluster_cap;
  parallel_for(cfg.trials, workers, [&](unsigned w, std::size_t t) {
    escaped[t] = explorers[w].explore(cfg.lambda, stream_key(cfg.seed, t), opt).escaped ? 1 : 0;
  });
  std::size_t k = 0;
  for (auto e : escaped) k += e;
  return make_proportion(k, cfg.trials, cfg.confidence);
}

// Frequency of {root <-> target} using only vertices of word length <= radius_limit.
template <PercolationKernel K>
ProportionEstimate connection_probability(const K& kernel, double lambda, const typename K::element_type& target,
                                          std::int64_t radius_limit, std::size_t trials, std::uint64_t seed,
                                          double confidence = 0.99, unsigned threads = 1) {
  std::vector<std::uint8_t> hit(trials, 0);
  const unsigned workers = std::max(1u, threads);
  std::vector<ClusterExplorer<K>> explorers(workers, ClusterExplorer<K>(kernel));
  typename ClusterExplorer<K>::Options opt;
  opt.radius_limit = radius_limit;
  opt.target = &target;
  opt.cap = std::numeric_limits<std::size_t>::max();
  parallel_for(trials, workers, [&](unsigned w, std::size_t t) {
    hit[t] = explorers[w].explore(lambda, stream_key(seed, t), opt).hit_target ? 1 : 0;
  });
  std::size_t k = 0;
  for (auto h : hit) k += h;
  return make_proportion(k, trials, confidence);
}

// ---------------------------------------------------------------------------
// Invasion: activation values per trial.

struct ActivationRecord {
  double escape = kInf;    // least lambda at which the cluster reaches word length L
  double persist = kInf;   // least lambda at which it reaches 2L
  std::size_t invaded = 0;
  bool truncated = false;
};

// Prim-style invasion from the root in increasing activation threshold. The
// largest threshold accepted before first touching {|v| >= r} is the minimax
// path value, i.e. exactly the least lambda whose cluster reaches radius r.
template <PercolationKernel K>
class Invader {
 public:
  using E = typename K::element_type;

  explicit Invader(const K& kernel) : kernel_(&kernel) {}

  ActivationRecord run(std::uint64_t trial_key, std::int64_t L, double bound, std::size_t cap) {
    seen_.clear();
    invaded_.clear();
    heap_ = {};
    ActivationRecord rec;
    const E root = kernel_->root();
    seen_.insert(root, kernel_->hash(root));
    invaded_.push_back(0);
    double level = 0.0;
    std::uint32_t next = 0;
    for (;;) {
      invaded_[next] = 1;
      ++rec.invaded;
      const std::int64_t len = kernel_->word_length(seen_[next]);
      if (len >= L && rec.escape == kInf) rec.escape = level;
      if (len >= 2 * L) {
        rec.persist = level;
        break;
      }
      if (rec.invaded >= cap) {
        rec.truncated = true;
        break;
      }
      const E v = seen_[next];
      const std::uint64_t hv = seen_.hash_at(next);
      kernel_->for_each_neighbor(v, [&](const E& w, double weight) {
        const std::uint64_t hw = kernel_->hash(w);
        const double t = activation_threshold(pair_uniform(trial_key, pair_key(hv, hw)), weight);
        if (t > bound) return;
        const auto [idx, fresh] = seen_.insert(w, hw);
        if (fresh) invaded_.push_back(0);
        if (!invaded_[idx]) heap_.emplace(t, idx);
      });
      bool found = false;
      while (!heap_.empty()) {
        const auto [t, idx] = heap_.top();
        heap_.pop();
        if (invaded_[idx]) continue;
        level = std::max(level, t);
        next = idx;
        found = true;
        break;
      }
      if (!found) break;
    }
    return rec;
  }

 private:
  using Entry = std::pair<double, std::uint32_t>;
  const K* kernel_;
  FlatIndex<E> seen_;
  std::vector<std::uint8_t> invaded_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
};

// Activation values for trials 0..trials-1 (thresholds above `bound` are ignored,
// so values beyond it read as infinite).
template <PercolationKernel K>
std::vector<ActivationRecord> activation_values(const K& kernel, const PercConfig& cfg, double bound) {
  std::vector<ActivationRecord> out(cfg.trials);
  const unsigned workers = std::max(1u, cfg.threads);
  std::vector<Invader<K>> invaders(workers, Invader<K>(kernel));
  parallel_for(cfg.trials, workers, [&](unsigned w, std::size_t t) {
    out[t] = invaders[w].run(stream_key(cfg.seed, t), cfg.escape_radius, bound, cfg.cluster_cap);
  });
  return out;
}

// Coupled survival curves: the escape frequency at every lambda from one set
// of activation values.
class CoupledCurves {
 public:
  explicit CoupledCurves(const std::vector<ActivationRecord>& recs) : trials_(recs.size()) {
    for (const auto& r : recs) {
      escape_.push_back(r.escape);
      persist_.push_back(r.persist);
      truncated_ += r.truncated ? 1 : 0;
    }
    std::sort(escape_.begin(), escape_.end());
    std::sort(persist_.begin(), persist_.end());
  }

  std::size_t trials() const noexcept { return trials_; }
  std::size_t truncated() const noexcept { return truncated_; }

  // Trials whose cluster at lambda reaches L (resp. 2L).
  std::size_t escaped(double lambda) const { return count_below(escape_, lambda); }
  std::size_t persisted(double lambda) const { return count_below(persist_, lambda); }

  ProportionEstimate survival(double lambda, double confidence) const {
    return make_proportion(escaped(lambda), trials_, confidence);
  }
  // Conditional on reaching L; escaping 2L implies escaping L.
  ProportionEstimate persistence(double lambda, double confidence) const {
    return make_proportion(persisted(lambda), escaped(lambda), confidence);
  }

  // Sorted distinct activation values in (lo, hi], plus hi itself.
  std::vector<double> breakpoints(double lo, double hi) const {
    std::vector<double> out;
    for (const auto* v : {&escape_, &persist_}) {
      for (double x : *v) {
        if (x > lo && x < hi) out.push_back(x);
      }
    }
    out.push_back(hi);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  ProportionEstimate criterion(SurvivalCriterion c, double lambda, double confidence) const {
    return c == SurvivalCriterion::escape ? survival(lambda, confidence) : persistence(lambda, confidence);
  }

 private:
  static std::size_t count_below(const std::vector<double>& v, double x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  }

  std::size_t trials_;
  std::size_t truncated_ = 0;
  std::vector<double> escape_;
  std::vector<double> persist_;
};

struct ProbeRecord {
  double lambda = 0.0;
  ProportionEstimate survival;
  ProportionEstimate persistence;
};

struct LambdaCEstimate {
  std::optional<double> lambda_hat;      // absent when capped
  Interval bracket;                      // final bisection bracket
  Interval ci;                           // confidence interval for lambda_hat
  bool capped = false;
  std::string cap_reason;
  std::optional<double> window_crossing;  // theta-crossing inside the window, kept even when capped
  std::vector<ProbeRecord> probes;
  std::int64_t escape_radius = 0;
  std::size_t trials = 0;
  std::size_t truncated_trials = 0;
  double theta = 0.5;
  SurvivalCriterion criterion = SurvivalCriterion::persistence;
  std::uint64_t seed = 0;
  std::string caveat;
};

namespace detail {

// Bisection for the crossing of a non-decreasing-in-expectation function f with theta.
template <class F>
Interval bisect_crossing(F&& f, double lo, double hi, double theta, double rel_width) {
  if (f(lo) >= theta) return {lo, lo};
  while ((hi - lo) > rel_width * hi) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= theta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

}  // namespace detail

// Locates the theta-crossing of the window criterion by bisection on
// lambda in [lambda_min, lambda_max]. The lambda CI inverts the Wilson bounds
// of the criterion at each probe.
inline LambdaCEstimate estimate_from_curves(const CoupledCurves& curves, const PercConfig& cfg) {
  LambdaCEstimate est;
  est.escape_radius = cfg.escape_radius;
  est.trials = curves.trials();
  est.truncated_trials = curves.truncated();
  est.theta = cfg.theta;
  est.criterion = cfg.criterion;
  est.seed = cfg.seed;
  est.caveat = std::string("pseudo-critical point at window L=") + std::to_string(cfg.escape_radius) + " (" +
               to_string(cfg.criterion) + " criterion); finite-size effects are not extrapolated";
  auto probe = [&](double lambda) {
    ProbeRecord p{lambda, curves.survival(lambda, cfg.confidence), curves.persistence(lambda, cfg.confidence)};
    est.probes.push_back(p);
    return cfg.criterion == SurvivalCriterion::escape ? p.survival : p.persistence;
  };
  const auto at_max = probe(cfg.lambda_max);
  if (at_max.estimate < cfg.theta) {
    est.capped = true;
    est.cap_reason = "criterion stays below theta up to lambda_max";
    return est;
  }
  const Interval br = detail::bisect_crossing([&](double l) { return probe(l).estimate; }, cfg.lambda_min, cfg.lambda_max,
                                              cfg.theta, cfg.bisection_rel_width);
  est.bracket = br;
  est.lambda_hat = 0.5 * (br.low + br.high);
  est.window_crossing = est.lambda_hat;
  // The criterion is a step function of lambda, so the CI is read off the
  // segments between breakpoints: extend from lambda_hat while theta stays
  // inside the Wilson interval of the segment.
  const auto cuts = curves.breakpoints(cfg.lambda_min, cfg.lambda_max);
  auto bounds_at = [&](double l) {
    const auto p = curves.criterion(cfg.criterion, l, cfg.confidence);
    return p.trials == 0 ? Interval{0.0, 0.0} : p.ci;
  };
  const double lh = *est.lambda_hat;
  std::size_t seg = static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), lh) - cuts.begin());
  double low = br.low;
  for (std::size_t i = seg; i > 0; --i) {
    // segment (cuts[i-1], cuts[i]] evaluated at its right end
    if (bounds_at(cuts[i - 1]).high < cfg.theta) {
      low = cuts[i - 1];
      break;
    }
    low = cfg.lambda_min;
  }
  double high = br.high;
  for (std::size_t i = seg; i < cuts.size(); ++i) {
    if (bounds_at(cuts[i]).low >= cfg.theta) {
      high = i == 0 ? cfg.lambda_min : cuts[i - 1];
      break;
    }
    high = cfg.lambda_max;
  }
  est.ci = {std::min(low, br.low), std::max(high, br.high)};
  return est;
}

template <PercolationKernel K>
LambdaCEstimate lambda_c_estimate(const K& kernel, const PercConfig& cfg) {
  cfg.validate();
  const CoupledCurves curves(activation_values(kernel, cfg, cfg.lambda_max));
  auto est = estimate_from_curves(curves, cfg);
  if (auto reason = structural_divergence(kernel)) {
    est.capped = true;
    est.cap_reason = *reason;
    est.lambda_hat.reset();
  }
  return est;
}

// Exact lambda_c for F_k with the uniform measure on its 2k generators:
// the root of (2k-1)(1 - exp(-lambda/2k)) = 1.
inline double tree_oracle_lambda_c(int k) {
  if (k < 2) throw UsageError("tree_oracle_lambda_c needs k >= 2");
  const double m = 2.0 * k;
  return m * std::log((m - 1.0) / (m - 2.0));
}

// ---------------------------------------------------------------------------
// Finite weighted graphs and the giant component.

// Symmetric non-negative pair weights on vertices 0..n-1 (upper triangle).
class PairWeights {
 public:
  explicit PairWeights(std::size_t n) : n_(n), w_(n * (n > 0 ? n - 1 : 0) / 2, 0.0) {}

  static PairWeights constant(std::size_t n, double w) {
    PairWeights p(n);
    std::fill(p.w_.begin(), p.w_.end(), w);
    return p;
  }

  std::size_t vertex_count() const noexcept { return n_; }

  double operator()(std::size_t u, std::size_t v) const {
    if (u == v) return 0.0;
    return w_[slot(u, v)];
  }

  void set(std::size_t u, std::size_t v, double w) {
    if (u == v) throw UsageError("pair weights have no diagonal");
    if (!(w >= 0.0)) throw UsageError("pair weights must be non-negative");
    w_[slot(u, v)] = w;
  }

 private:
  std::size_t slot(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    if (v >= n_) throw UsageError("pair weight index out of range");
    return u * (2 * n_ - u - 1) / 2 + (v - u - 1);
  }

  std::size_t n_;
  std::vector<double> w_;
};

struct GiantComponentResult {
  std::size_t vertices = 0;
  double largest_fraction = 0.0;
  std::map<std::size_t, std::size_t> size_histogram;  // component size -> count
};

// One sample: each pair open with probability 1 - exp(-lambda w(u,v)).
inline GiantComponentResult giant_component(const PairWeights& weights, double lambda, std::uint64_t seed, std::uint64_t sample) {
  const std::size_t n = weights.vertex_count();
  if (n == 0) throw UsageError("giant_component needs at least one vertex");
  if (!(lambda >= 0.0)) throw UsageError("lambda must be non-negative");
  const std::uint64_t key = stream_key(seed, sample);
  UnionFind uf(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double w = weights(u, v);
      if (w <= 0.0) continue;
      if (edge_open(pair_uniform(key, mix(u, v)), w, lambda)) uf.unite(u, v);
    }
  }
  GiantComponentResult r;
  r.vertices = n;
  std::size_t largest = 0;
  for (auto s : uf.component_sizes()) {
    ++r.size_histogram[s];
    largest = std::max(largest, s);
  }
  r.largest_fraction = static_cast<double>(largest) / static_cast<double>(n);
  return r;
}

inline std::vector<GiantComponentResult> giant_component_samples(const PairWeights& weights, double lambda, std::size_t samples,
                                                                 std::uint64_t seed, unsigned threads = 1) {
  std::vector<GiantComponentResult> out(samples);
  parallel_for(samples, threads, [&](unsigned, std::size_t i) { out[i] = giant_component(weights, lambda, seed, i); });
  return out;
}

}  // namespace pdim
