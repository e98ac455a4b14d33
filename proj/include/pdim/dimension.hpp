#pragma once

// Sweeps over measure families (ball-uniform, polynomial and stretched
// exponential decay), trend verdicts based on CI separation, ball-growth
// fits, and the ball-uniform decay-class certificate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pdim/errors.hpp"
#include "pdim/groups.hpp"
#include "pdim/measures.hpp"
#include "pdim/percolation.hpp"
#include "pdim/rational.hpp"
#include "pdim/rng.hpp"
#include "pdim/stats.hpp"

namespace pdim {

inline constexpr double kDefaultProximityBand = 0.15;

struct SweepPoint {
  std::vector<std::pair<std::string, double>> params;
  std::string measure;
  std::optional<LambdaCEstimate> estimate;  // absent for closed-form points or when the ball cap was hit
  std::optional<double> closed_form;        // exact lambda_c when known
  double delta_atom = 0.0;
  std::optional<Rational> exact_delta;
  std::uint64_t seed = 0;
  std::string error;  // cap-exceeded message, sweep continues

  double param(const std::string& name) const {
    for (const auto& [k, v] : params) {
      if (k == name) return v;
    }
    throw UsageError("sweep point has no parameter '" + name + "'");
  }
  bool has_lambda() const { return closed_form || (estimate && estimate->lambda_hat); }
  double lambda() const { return closed_form ? *closed_form : *estimate->lambda_hat; }
  Interval ci() const { return closed_form ? Interval{*closed_form, *closed_form} : estimate->ci; }
  bool capped() const { return estimate && estimate->capped; }
};

struct Verdict {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct SweepReport {
  std::string group;
  std::string family;
  std::vector<SweepPoint> points;
  std::vector<Verdict> verdicts;
  std::string upper_bound;  // growth-based statement, when attached

  const Verdict& verdict(const std::string& name) const {
    for (const auto& v : verdicts) {
      if (v.name == name) return v;
    }
    throw UsageError("no verdict '" + name + "'");
  }
};

// a lies strictly above b with disjoint intervals.
inline bool ci_separated_above(const SweepPoint& a, const SweepPoint& b) {
  return a.has_lambda() && b.has_lambda() && a.ci().low > b.ci().high;
}

// Every consecutive pair CI-separated in decreasing order.
inline bool ci_separated_decreasing(const std::vector<const SweepPoint*>& seq) {
  if (seq.size() < 2) return false;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (!ci_separated_above(*seq[i], *seq[i + 1])) return false;
  }
  return true;
}

namespace detail {

inline std::string describe(const std::vector<const SweepPoint*>& seq) {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) os << "; ";
    const auto& p = *seq[i];
    os << p.measure << ": ";
    if (p.capped()) {
      os << "capped";
    } else if (p.has_lambda()) {
      os << p.lambda() << " [" << p.ci().low << ", " << p.ci().high << "]";
    } else {
      os << "n/a";
    }
  }
  return os.str();
}

template <Group G>
SweepPoint run_point(const Measure<G>& mu, const PercConfig& base, std::size_t index,
                     std::vector<std::pair<std::string, double>> params) {
  SweepPoint p;
  p.params = std::move(params);
  p.measure = mu.label();
  p.seed = stream_key(base.seed, index);
  const auto top = max_atom(mu);
  p.delta_atom = top.mass;
  p.exact_delta = top.exact;
  PercConfig cfg = base;
  cfg.seed = p.seed;
  p.estimate = lambda_c_estimate(GroupKernel<G>(mu), cfg);
  return p;
}

// Builds and runs one point; a cap-exceeded measure is recorded, not fatal.
template <Group G, class Make>
SweepPoint try_point(Make&& make, const PercConfig& base, std::size_t index, std::vector<std::pair<std::string, double>> params) {
  try {
    return run_point<G>(make(), base, index, params);
  } catch (const CapExceeded& e) {
    SweepPoint p;
    p.params = std::move(params);
    p.seed = stream_key(base.seed, index);
    p.error = e.what();
    return p;
  }
}

}  // namespace detail

// lambda_c(uniform_on_ball(n)) along n_list.
template <Group G>
SweepReport percolativity_sweep(const G& ctx, const std::vector<std::int64_t>& n_list, const PercConfig& cfg,
                                double band = kDefaultProximityBand) {
  if (n_list.empty()) throw UsageError("percolativity sweep needs a non-empty n list");
  if (!std::is_sorted(n_list.begin(), n_list.end()) || std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw UsageError("percolativity sweep needs an increasing n list");
  }
  cfg.validate();
  SweepReport rep;
  rep.group = ctx.name();
  rep.family = "uniform-ball";
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    rep.points.push_back(detail::try_point<G>([&] { return uniform_on_ball(ctx, n_list[i]); }, cfg, i,
                                              {{"n", static_cast<double>(n_list[i])}}));
  }
  std::vector<const SweepPoint*> seq;
  bool any_capped = false, any_missing = false;
  for (const auto& p : rep.points) {
    seq.push_back(&p);
    any_capped = any_capped || p.capped();
    any_missing = any_missing || !p.error.empty();
  }
  const bool decreasing = !any_capped && !any_missing && ci_separated_decreasing(seq);
  rep.verdicts.push_back({"decreasing", decreasing, detail::describe(seq)});
  if (any_capped) {
    rep.verdicts.push_back({"percolative", false,
                            "not percolative at window L=" + std::to_string(cfg.escape_radius) +
                                "; bounded-range measures have lambda_c = infinity here, so the limit-equals-1 reading is unresolved"});
  } else {
    const bool near = !any_missing && seq.back()->has_lambda() && seq.back()->ci().low < 1.0 + band;
    std::ostringstream os;
    os << "last CI lower edge " << (seq.back()->has_lambda() ? seq.back()->ci().low : kInf) << " vs band 1+" << band;
    rep.verdicts.push_back({"percolative", decreasing && near,
                            (decreasing && near ? "consistent with percolative: " : "inconclusive at this window: ") + os.str()});
  }
  return rep;
}

namespace detail {

// Shared frontier analysis for decay families indexed by (s, R).
inline void decay_verdicts(SweepReport& rep, const std::vector<double>& s_list, const std::vector<std::int64_t>& R_list,
                           double band) {
  for (double s : s_list) {
    std::vector<const SweepPoint*> seq;
    double min_delta = 1.0;
    bool all_above = true, any_capped = false, complete = true;
    for (const auto& p : rep.points) {
      if (p.param("s") != s) continue;
      seq.push_back(&p);
      if (!p.error.empty()) {
        complete = false;
        continue;
      }
      min_delta = std::min(min_delta, p.delta_atom);
      any_capped = any_capped || p.capped();
      all_above = all_above && (p.capped() || (p.has_lambda() && p.ci().low > 1.0 + band));
    }
    const std::string tag = "s=" + fmt_param(s);
    std::ostringstream d;
    d.precision(6);
    d << "min delta " << min_delta;
    rep.verdicts.push_back({tag + " delta", complete, d.str()});
    rep.verdicts.push_back({tag + " decreasing in R", complete && !any_capped && ci_separated_decreasing(seq), describe(seq)});
    rep.verdicts.push_back({tag + " above band", complete && all_above, "every CI above 1+" + fmt_param(band)});
  }
  // heavier tails percolate more easily: lambda non-decreasing in s at fixed R
  for (auto R : R_list) {
    std::vector<const SweepPoint*> seq;
    for (const auto& p : rep.points) {
      if (p.param("R") == static_cast<double>(R) && p.has_lambda()) seq.push_back(&p);
    }
    std::sort(seq.begin(), seq.end(), [](const SweepPoint* a, const SweepPoint* b) { return a->param("s") > b->param("s"); });
    bool ok = seq.size() == s_list.size();
    for (std::size_t i = 0; ok && i + 1 < seq.size(); ++i) ok = seq[i]->ci().high >= seq[i + 1]->ci().low;
    rep.verdicts.push_back({"R=" + std::to_string(R) + " non-decreasing in s", ok, describe(seq)});
  }
}

}  // namespace detail

// lambda_c(poly_decay(s, R)) over the grid, ordered by s then R.
template <Group G>
SweepReport pdim_sweep(const G& ctx, const std::vector<double>& s_list, const std::vector<std::int64_t>& R_list,
                       const PercConfig& cfg, double band = kDefaultProximityBand) {
  if (s_list.empty() || R_list.empty()) throw UsageError("pdim sweep needs non-empty s and R grids");
  cfg.validate();
  SweepReport rep;
  rep.group = ctx.name();
  rep.family = "poly";
  std::size_t index = 0;
  for (double s : s_list) {
    for (auto R : R_list) {
      rep.points.push_back(detail::try_point<G>([&] { return poly_decay(ctx, s, R); }, cfg, index++,
                                                {{"s", s}, {"R", static_cast<double>(R)}}));
    }
  }
  detail::decay_verdicts(rep, s_list, R_list, band);
  return rep;
}

// lambda_c(stretched_exp_decay(r, s, R)) over the grid.
template <Group G>
SweepReport epdim_sweep(const G& ctx, double r, const std::vector<double>& s_list, const std::vector<std::int64_t>& R_list,
                        const PercConfig& cfg, double band = kDefaultProximityBand) {
  if (s_list.empty() || R_list.empty()) throw UsageError("epdim sweep needs non-empty s and R grids");
  cfg.validate();
  SweepReport rep;
  rep.group = ctx.name();
  rep.family = "sexp:r=" + detail::fmt_param(r);
  std::size_t index = 0;
  for (double s : s_list) {
    for (auto R : R_list) {
      rep.points.push_back(detail::try_point<G>([&] { return stretched_exp_decay(ctx, r, s, R); }, cfg, index++,
                                                {{"r", r}, {"s", s}, {"R", static_cast<double>(R)}}));
    }
  }
  detail::decay_verdicts(rep, s_list, R_list, band);
  return rep;
}

// F_k with uniform generator measures: exact tree thresholds as k grows.
inline SweepReport free_surrogate_sweep(const std::vector<int>& k_list, double band = kDefaultProximityBand) {
  if (k_list.empty()) throw UsageError("surrogate sweep needs a non-empty k list");
  SweepReport rep;
  rep.group = "free:k";
  rep.family = "uniform-generators (closed form)";
  for (int k : k_list) {
    SweepPoint p;
    p.params = {{"k", static_cast<double>(k)}};
    p.measure = "free:" + std::to_string(k) + " uniform-ball:1";
    p.closed_form = tree_oracle_lambda_c(k);
    p.delta_atom = 1.0 / (2.0 * k);
    p.exact_delta = Rational(1, 2 * k);
    rep.points.push_back(p);
  }
  bool strict = true;
  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) strict = strict && rep.points[i].lambda() > rep.points[i + 1].lambda();
  std::vector<const SweepPoint*> seq;
  for (const auto& p : rep.points) seq.push_back(&p);
  rep.verdicts.push_back({"decreasing", strict, detail::describe(seq)});
  rep.verdicts.push_back({"approaches 1", strict && rep.points.back().lambda() < 1.0 + band && rep.points.back().lambda() > 1.0,
                          "last value within band above 1"});
  return rep;
}

// ---------------------------------------------------------------------------
// Growth of balls.

struct GrowthFit {
  std::vector<std::int64_t> radii;
  std::vector<std::uint64_t> sizes;
  double d_hat = 0.0;              // slope of log|B(n)| against log(n + 1/2)
  double log_constant = 0.0;       // intercept of that fit
  std::vector<double> residuals;
  double rms = 0.0;
  double exp_rate = 0.0;           // slope of log|B(n)| against n
  double exp_rms = 0.0;
  bool exponential = false;        // linear-in-n fit has the smaller residual
  double stretched_s = 0.0;        // slope of log log|B(n)| against log n
  std::vector<double> stretched_residuals;
  std::string statement;
};

namespace detail {

inline bool geometric(const std::vector<std::int64_t>& r) {
  if (r.size() < 2 || r[0] < 1) return false;
  // common ratio q > 1 with r[i+1] * r[0] == r[i] * r[1]
  if (r[1] <= r[0]) return false;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (r[i + 1] * r[0] != r[i] * r[1]) return false;
  }
  return true;
}

}  // namespace detail

template <MetricSpace S>
GrowthFit growth_fit(const S& space, const std::vector<std::int64_t>& radii, std::size_t cap = kDefaultElementCap) {
  if (radii.size() < 4) throw UsageError("growth_fit needs at least 4 radii");
  if (!detail::geometric(radii)) throw UsageError("growth_fit radii must form a geometric progression");
  GrowthFit f;
  f.radii = radii;
  const auto b = ball(space, radii.back(), cap);
  std::vector<double> x, y, xn, ll, lx;
  for (auto n : radii) {
    std::uint64_t size = 0;
    for (std::int64_t m = 0; m <= n; ++m) size += b.sphere_sizes[static_cast<std::size_t>(m)];
    f.sizes.push_back(size);
    x.push_back(std::log(static_cast<double>(n) + 0.5));
    y.push_back(std::log(static_cast<double>(size)));
    xn.push_back(static_cast<double>(n));
    lx.push_back(std::log(static_cast<double>(n)));
    ll.push_back(std::log(std::max(std::log(static_cast<double>(size)), 1e-300)));
  }
  const auto poly = least_squares(x, y);
  f.d_hat = poly.slope;
  f.log_constant = poly.intercept;
  f.residuals = poly.residuals;
  f.rms = poly.rms_residual();
  const auto lin = least_squares(xn, y);
  f.exp_rate = lin.slope;
  f.exp_rms = lin.rms_residual();
  f.exponential = f.exp_rms < f.rms;
  const auto st = least_squares(lx, ll);
  f.stretched_s = st.slope;
  f.stretched_residuals = st.residuals;
  std::ostringstream os;
  os.precision(6);
  if (f.exponential) {
    os << "exponential growth (rate " << f.exp_rate << " per step, rms " << f.exp_rms << " vs polynomial rms " << f.rms
       << "); polynomial fit rejected, no polynomial pdim bound; stretched exponent " << f.stretched_s;
  } else {
    double slack = 0.0;
    for (double r : f.residuals) slack = std::max(slack, std::abs(r));
    os << "pdim <= " << f.d_hat << " + " << slack << " (polynomial growth fit, rms " << f.rms << ")";
  }
  f.statement = os.str();
  return f;
}

// |B(n)| - 1 > b n^s makes uniform_on_ball(n) a member of M_s^(1/b).
struct LbRow {
  std::int64_t n = 0;
  std::uint64_t ball_size = 0;
  Rational b_min;  // n^s / (|B(n)| - 1)
  bool member = false;
};

struct LbCertificate {
  double s = 0.0;
  double b = 0.0;
  std::vector<LbRow> rows;
  bool all_member = false;
  std::optional<Verdict> percolativity;
  bool hypotheses_hold() const { return all_member && (!percolativity || percolativity->holds); }
};

template <MetricSpace S>
LbCertificate lb_certificate(const S& space, const std::vector<std::int64_t>& n_list, unsigned s,
                             std::optional<double> b = std::nullopt, std::size_t cap = kDefaultElementCap) {
  if (n_list.empty()) throw UsageError("lb_certificate needs a non-empty n list");
  if (s < 1) throw UsageError("lb_certificate needs an integral exponent s >= 1");
  const auto top = *std::max_element(n_list.begin(), n_list.end());
  if (n_list.front() < 1) throw UsageError("lb_certificate needs n >= 1");
  const auto ball_b = ball(space, top, cap);
  std::vector<std::uint64_t> sizes;
  std::vector<double> x, y;
  for (auto n : n_list) {
    std::uint64_t size = 0;
    for (std::int64_t m = 0; m <= n; ++m) size += ball_b.sphere_sizes[static_cast<std::size_t>(m)];
    sizes.push_back(size);
    x.push_back(std::log(static_cast<double>(n) + 0.5));
    y.push_back(std::log(static_cast<double>(size)));
  }
  LbCertificate c;
  c.s = s;
  if (b) {
    c.b = *b;
  } else if (n_list.size() >= 2) {
    c.b = 0.95 * std::exp(least_squares(x, y).intercept);
  } else {
    c.b = 0.95 * static_cast<double>(sizes[0]) / std::pow(static_cast<double>(n_list[0]) + 0.5, static_cast<double>(s));
  }
  if (!(c.b > 0.0)) throw UsageError("lb_certificate needs b > 0");
  const Rational bq(c.b);
  c.all_member = true;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    LbRow r;
    r.n = n_list[i];
    r.ball_size = sizes[i];
    const Rational ns = pow(Rational(r.n), s);
    r.b_min = ns / Rational(BigInt(sizes[i] - 1));
    // mu in M_s^(1/b) iff b_min < 1/b
    r.member = r.b_min * bq < 1;
    c.all_member = c.all_member && r.member;
    c.rows.push_back(std::move(r));
  }
  return c;
}

}  // namespace pdim
