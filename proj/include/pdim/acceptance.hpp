#pragma once

// The acceptance experiments: each criterion runs the library against an
// independent reference and reports pass/fail with the measured numbers.
// Shared by the acceptance test binary and `pdimlab selftest`.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdim/dimension.hpp"
#include "pdim/groups.hpp"
#include "pdim/measures.hpp"
#include "pdim/oracles.hpp"
#include "pdim/percolation.hpp"
#include "pdim/report.hpp"
#include "pdim/saw.hpp"
#include "pdim/spectral.hpp"

namespace pdim::acceptance {

// Pinned tolerances and budgets.
inline constexpr double kTreeRelTol = 0.05;
inline constexpr double kTreeSeconds = 60.0;
inline constexpr std::size_t kTreeTrials = 20'000;
inline constexpr std::int64_t kTreeL = 40;

inline constexpr double kZ2RelTol = 0.05;
inline constexpr double kZ2Seconds = 600.0;
inline constexpr std::size_t kZ2Trials = 8'000;
inline constexpr std::int64_t kZ2L = 64;
inline constexpr int kCrossingBox = 64;
inline constexpr int kCrossingSamples = 400;

inline constexpr double kLowerBound = 0.98;

inline constexpr int kNumuDepth = 6;
inline constexpr double kNumuSeconds = 60.0;

inline constexpr double kLacocoTol = 0.02;
inline constexpr int kLacocoDepth = 8;

inline constexpr double kPathP = 0.9;
inline constexpr int kPathK = 20;
inline constexpr std::size_t kPathTrials = 10'000;
inline constexpr std::uint32_t kCanopyDepth = 60;
inline constexpr double kPathConfidence = 0.99;

inline constexpr double kZ1LambdaMax = 64.0;

inline constexpr std::size_t kSweepTrials = 2'000;
inline constexpr std::size_t kDecayTrials = 1'000;
inline constexpr std::int64_t kSweepL = 64;
inline constexpr double kObstructionFloor = 1.1;

inline constexpr double kRhoRelTol = 0.03;
inline constexpr int kRhoSteps = 200;
inline constexpr int kRadialAgreeSteps = 12;

inline constexpr std::size_t kGiantN = 1000;
inline constexpr double kGiantLambda = 2.0;
inline constexpr std::size_t kGiantSamples = 20;
inline constexpr double kGiantTol = 0.05;

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline std::string line(const Result& r) {
  std::ostringstream os;
  os.precision(4);
  os << "criterion " << r.id << " [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name << " (" << std::fixed << r.seconds
     << " s): " << r.detail;
  return os.str();
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string num(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

inline std::string describe(const LambdaCEstimate& e) {
  if (!e.lambda_hat) {
    return "capped (" + e.cap_reason + ")" + (e.window_crossing ? "; window crossing " + num(*e.window_crossing) : "");
  }
  return num(*e.lambda_hat) + " CI [" + num(e.ci.low) + ", " + num(e.ci.high) + "]";
}

}  // namespace detail

// Runs the suite, printing one line per criterion as it completes.
class Suite {
 public:
  explicit Suite(std::ostream& out) : out_(out) {}

  bool run_all() {
    run(1, "tree threshold F_2", [&] { return tree_threshold(); });
    run(2, "Z^2 calibration", [&] { return z2_calibration(); });
    run(4, "uniform-measure SAW identity", [&] { return numu(); });
    run(5, "lambda_c >= 1/nu cross-check", [&] { return lacoco(); });
    run(6, "unique-path tree oracle", [&] { return unique_path(); });
    run(7, "Z^1 divergence", [&] { return z1_divergence(); });
    run(8, "percolativity trend on Z^2", [&] { return percolativity(); });
    run(9, "atom obstruction and decay sweep", [&] { return obstruction(); });
    run(10, "spectral radius and Kesten", [&] { return spectral(); });
    run(11, "giant component", [&] { return giant(); });
    run(3, "universal lower bound", [&] { return lower_bound(); });
    run(12, "determinism across workers", [&] { return determinism(); });
    return all_pass_;
  }

  const std::vector<Result>& results() const noexcept { return results_; }

  // Individual criteria (each may be run on its own).
  Result tree_threshold() {
    const FreeGroup f2(2);
    const auto mu = uniform_on_generators(f2);
    const auto t0 = std::chrono::steady_clock::now();
    const auto est = lambda_c_estimate(GroupKernel<FreeGroup>(mu), tree_config(1));
    const double secs = detail::seconds_since(t0);
    tree_csv_ = estimate_csv(f2.name(), mu.label(), est);
    record_estimate("free:2 uniform-ball:1", est);
    const double exact = oracle::tree_lambda_c(2);
    const bool within = est.lambda_hat && std::abs(*est.lambda_hat / exact - 1.0) <= kTreeRelTol;
    Result r;
    r.pass = within && secs < kTreeSeconds;
    r.detail = "lambda_hat " + detail::describe(est) + " vs " + detail::num(exact) + " (rel err " +
               (est.lambda_hat ? detail::num(*est.lambda_hat / exact - 1.0, 3) : "n/a") + ", tol " + detail::num(kTreeRelTol) +
               "), L=" + std::to_string(kTreeL) + ", trials " + std::to_string(kTreeTrials) + ", " + detail::num(secs, 3) +
               " s single-threaded (budget " + detail::num(kTreeSeconds) + " s)";
    f2_estimate_ = est;
    return r;
  }

  Result z2_calibration() {
    const Lattice z2(2);
    const auto mu = uniform_on_generators(z2);
    const GroupKernel<Lattice> kernel(mu);
    const auto t0 = std::chrono::steady_clock::now();
    PercConfig cfg;
    cfg.escape_radius = kZ2L;
    cfg.trials = kZ2Trials;
    cfg.seed = 2;
    const auto est = lambda_c_estimate(kernel, cfg);
    record_estimate("zd:2 uniform-ball:1 L=64", est);
    z2_estimate_ = est;
    // stability diagnostic at 2L
    PercConfig cfg2 = cfg;
    cfg2.escape_radius = 2 * kZ2L;
    cfg2.trials = kZ2Trials / 4;
    const auto est2 = lambda_c_estimate(kernel, cfg2);
    record_estimate("zd:2 uniform-ball:1 L=128", est2);
    const double secs = detail::seconds_since(t0);
    const double target = 4.0 * std::log(2.0);
    const double lo = oracle::z2_crossing_frequency(0.45, kCrossingBox, kCrossingSamples, 45);
    const double hi = oracle::z2_crossing_frequency(0.55, kCrossingBox, kCrossingSamples, 55);
    const bool crossing_ok = lo < 0.5 && hi > 0.5;
    const bool within = est.lambda_hat && std::abs(*est.lambda_hat / target - 1.0) <= kZ2RelTol;
    Result r;
    r.pass = within && crossing_ok && secs < kZ2Seconds;
    r.detail = "L=64: " + detail::describe(est) + " vs " + detail::num(target) + " (rel err " +
               (est.lambda_hat ? detail::num(*est.lambda_hat / target - 1.0, 3) : "n/a") + ", tol " + detail::num(kZ2RelTol) +
               "); L=128: " + detail::describe(est2) + "; box crossing p=0.45 -> " + detail::num(lo, 3) + ", p=0.55 -> " +
               detail::num(hi, 3);
    return r;
  }

  Result numu() {
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream d;
    bool ok = true;
    auto check = [&](const auto& ctx) {
      const auto mu = uniform_on_generators(ctx);
      const auto rep = check_numu(mu, kNumuDepth);
      const auto counts = saw_counts(ctx, kNumuDepth);
      bool same = rep.pass();
      for (const auto& row : rep.rows) same = same && row.c_n == counts[static_cast<std::size_t>(row.n)];
      ok = ok && same;
      d << ctx.name() << " c_6=" << rep.rows.back().c_n << (same ? " ok" : " MISMATCH") << "; ";
    };
    check(Lattice(1));
    check(Lattice(2));
    check(FreeGroup(2));
    check(Heisenberg());
    const auto oracle_counts = oracle::z2_saw_counts(4);
    const auto lib_counts = saw_counts(Lattice(2), 4);
    const auto z2 = Lattice(2);
    const auto s4 = sigma_n(uniform_on_generators(z2), 4);
    const bool c4 = oracle_counts[4] == 100 && lib_counts[4] == 100 && s4.exact && *s4.exact * 256 == 100;
    ok = ok && c4;
    const double secs = detail::seconds_since(t0);
    d << "c_4(Z^2)=" << lib_counts[4] << " (oracle " << oracle_counts[4] << "), sigma_4=" << (s4.exact ? to_string(*s4.exact) : "?");
    Result r;
    r.pass = ok && secs < kNumuSeconds;
    r.detail = d.str() + ", " + detail::num(secs, 3) + " s";
    return r;
  }

  Result lacoco() {
    ensure_f2_z2();
    std::ostringstream d;
    bool ok = true;
    auto check = [&](const auto& ctx, const LambdaCEstimate& est) {
      const auto table = sigma_table(uniform_on_generators(ctx), kLacocoDepth);
      const auto v = check_lacoco(est, table, kLacocoTol);
      const double bound = 1.0 / std::pow(table.at(kLacocoDepth).value, 1.0 / kLacocoDepth);
      ok = ok && v.pass();
      d << ctx.name() << ": " << detail::describe(est) << " >= (1-" << kLacocoTol << ")/sigma_8^(1/8) = "
        << detail::num(bound * (1.0 - kLacocoTol)) << (v.pass() ? " ok" : " FAIL") << "; ";
    };
    check(FreeGroup(2), *f2_estimate_);
    check(Lattice(2), *z2_estimate_);
    Result r;
    r.pass = ok;
    r.detail = d.str();
    return r;
  }

  Result unique_path() {
    const double target = oracle::unique_path_probability(kPathP, kPathK);
    std::ostringstream d;
    bool ok = true;
    {
      const CanopyTree canopy(kCanopyDepth);
      const auto kernel = GraphKernel<CanopyTree>::nearest_neighbour(canopy);
      const auto goal = CanopyTree::path_vertex(static_cast<std::uint32_t>(kPathK));
      const auto est = connection_probability(kernel, kernel.lambda_for(kPathP), goal, kPathK, kPathTrials, 6, kPathConfidence);
      ok = ok && est.ci.contains(target);
      d << "canopy:" << kCanopyDepth << " x_0<->x_20: " << detail::num(est.estimate, 4) << " CI [" << detail::num(est.ci.low, 4) << ", "
        << detail::num(est.ci.high, 4) << "]; ";
    }
    {
      const Lattice z1(1);
      const auto mu = uniform_on_generators(z1);
      const GroupKernel<Lattice> kernel(mu);
      // each edge has weight 1/2: p = 1 - exp(-lambda/2)
      const double lambda = -2.0 * std::log1p(-kPathP);
      const auto goal = z1.point({kPathK});
      const auto est = connection_probability(kernel, lambda, goal, kPathK, kPathTrials, 61, kPathConfidence);
      ok = ok && est.ci.contains(target);
      d << "Z^1 0<->20: " << detail::num(est.estimate, 4) << " CI [" << detail::num(est.ci.low, 4) << ", " << detail::num(est.ci.high, 4)
        << "]; ";
    }
    Result r;
    r.pass = ok;
    r.detail = d.str() + "target p^k = " + detail::num(target, 6) + " (99% Wilson)";
    return r;
  }

  Result z1_divergence() {
    const Lattice z1(1);
    const auto mu = uniform_on_generators(z1);
    PercConfig cfg;
    cfg.escape_radius = kTreeL;
    cfg.trials = 2'000;
    cfg.lambda_max = kZ1LambdaMax;
    cfg.seed = 7;
    const auto est = lambda_c_estimate(GroupKernel<Lattice>(mu), cfg);
    record_estimate("zd:1 uniform-ball:1", est);
    Result r;
    r.pass = est.capped && !est.lambda_hat;
    r.detail = detail::describe(est) + ", lambda_max " + detail::num(kZ1LambdaMax);
    return r;
  }

  Result percolativity() {
    const auto rep = percolativity_sweep(Lattice(2), {1, 2, 4}, sweep_config(1));
    sweep_csv_ = sweep_csv(rep);
    for (const auto& p : rep.points) {
      if (p.estimate) record_estimate("zd:2 " + p.measure, *p.estimate);
    }
    Result r;
    r.pass = rep.verdict("decreasing").holds;
    r.detail = rep.verdict("decreasing").detail;
    return r;
  }

  Result obstruction() {
    PercConfig cfg;
    cfg.escape_radius = kSweepL;
    cfg.trials = kDecayTrials;
    cfg.seed = 9;
    const Lattice z2(2);
    const std::vector<std::int64_t> Rs{2, 4, 8, 16};
    const auto rep = pdim_sweep(z2, {3.0, 1.5}, Rs, cfg);
    std::ostringstream d;
    bool delta_ok = true, above = true;
    std::vector<const SweepPoint*> s15;
    for (const auto& p : rep.points) {
      if (p.estimate) record_estimate("zd:2 " + p.measure, *p.estimate);
      if (p.param("s") == 3.0) {
        delta_ok = delta_ok && p.exact_delta && *p.exact_delta >= Rational(1, 8);
        above = above && p.has_lambda() && p.ci().low > kObstructionFloor;
        d << "R=" << p.param("R") << " delta=" << (p.exact_delta ? to_string(*p.exact_delta) : "?") << " lambda "
          << (p.has_lambda() ? detail::num(p.lambda()) + " CI low " + detail::num(p.ci().low) : "n/a") << "; ";
      } else {
        s15.push_back(&p);
      }
    }
    const bool decreasing = ci_separated_decreasing(s15);
    Result r;
    r.pass = delta_ok && above && decreasing;
    r.detail = "s=3: " + d.str() + "delta>=1/8 " + (delta_ok ? "yes" : "no") + ", CI above " + detail::num(kObstructionFloor) +
               " " + (above ? "yes" : "no") + "; s=1.5 decreasing in R: " + (decreasing ? "yes" : "no") + " (" +
               rep.verdict("s=1.5 decreasing in R").detail + ")";
    return r;
  }

  Result spectral() {
    std::ostringstream d;
    bool ok = true;
    const auto f2 = radial_return_probabilities(2, kRhoSteps);
    const auto rho2 = rho_estimate(f2);
    const double target = oracle::free_group_rho(2);
    const bool close = std::abs(rho2.rho / target - 1.0) <= kRhoRelTol;
    ok = ok && close;
    d << "rho(F_2) " << detail::num(rho2.rho) << " vs " << detail::num(target) << " (rel err " << detail::num(rho2.rho / target - 1.0, 3)
      << "); ";
    const auto rho3 = rho_estimate(radial_return_probabilities(3, kRhoSteps));
    const Lattice z1(1);
    const auto rho1 = rho_estimate(return_probabilities(uniform_on_generators(z1), kRhoSteps));
    for (const auto& [name, size, rho] : {std::tuple{"F_2", 4, rho2.rho}, std::tuple{"F_3", 6, rho3.rho}, std::tuple{"Z^1", 2, rho1.rho}}) {
      const auto v = kesten_inequality_check(static_cast<std::size_t>(size), rho);
      ok = ok && v.pass;
      d << name << ": 1/" << size << " <= " << detail::num(v.rhs, 5) << (v.pass ? " ok" : " FAIL") << "; ";
    }
    for (int k : {2, 3}) {
      const FreeGroup fk(k);
      const auto element = return_probabilities(uniform_on_generators(fk), kRadialAgreeSteps);
      const auto radial = radial_return_probabilities(k, kRadialAgreeSteps);
      bool same = element.exact.has_value();
      for (int n = 0; same && n <= kRadialAgreeSteps; ++n) same = (*element.exact)[static_cast<std::size_t>(n)] == (*radial.exact)[static_cast<std::size_t>(n)];
      ok = ok && same;
      d << "radial=element F_" << k << " n<=12: " << (same ? "exact" : "MISMATCH") << "; ";
    }
    Result r;
    r.pass = ok;
    r.detail = d.str();
    return r;
  }

  Result giant() {
    const auto samples = giant_samples(1);
    giant_csv_ = giant_csv(samples);
    double mean = 0.0;
    for (const auto& s : samples) mean += s.largest_fraction;
    mean /= static_cast<double>(samples.size());
    const double zeta = oracle::er_giant_fraction(kGiantLambda);
    Result r;
    r.pass = std::abs(mean - zeta) <= kGiantTol;
    r.detail = "mean largest fraction " + detail::num(mean, 5) + " over " + std::to_string(kGiantSamples) + " samples vs zeta " +
               detail::num(zeta, 5) + " (tol " + detail::num(kGiantTol) + ")";
    return r;
  }

  Result lower_bound() {
    ensure_f2_z2();
    std::ostringstream d;
    bool ok = true;
    std::size_t finite = 0, capped = 0;
    double smallest = kInf;
    std::string argmin;
    for (const auto& [label, est] : estimates_) {
      if (!est.lambda_hat) {
        ++capped;
        continue;
      }
      ++finite;
      if (*est.lambda_hat < smallest) {
        smallest = *est.lambda_hat;
        argmin = label;
      }
      ok = ok && *est.lambda_hat >= kLowerBound;
    }
    Result r;
    r.pass = ok && finite > 0;
    r.detail = std::to_string(finite) + " finite estimates (" + std::to_string(capped) + " capped, vacuous); smallest " + detail::num(smallest) +
               " at " + argmin + " vs bound " + detail::num(kLowerBound);
    return r;
  }

  Result determinism() {
    if (tree_csv_.empty()) tree_threshold();
    if (sweep_csv_.empty()) percolativity();
    if (giant_csv_.empty()) giant();
    bool ok = true;
    std::ostringstream d;
    for (unsigned w : {4u, 8u}) {
      const FreeGroup f2(2);
      const auto mu = uniform_on_generators(f2);
      const bool t = estimate_csv(f2.name(), mu.label(), lambda_c_estimate(GroupKernel<FreeGroup>(mu), tree_config(w))) == tree_csv_;
      const bool s = sweep_csv(percolativity_sweep(Lattice(2), {1, 2, 4}, sweep_config(w))) == sweep_csv_;
      const bool g = giant_csv(giant_samples(w)) == giant_csv_;
      ok = ok && t && s && g;
      d << w << " workers: tree " << (t ? "same" : "DIFFERENT") << ", sweep " << (s ? "same" : "DIFFERENT") << ", giant "
        << (g ? "same" : "DIFFERENT") << "; ";
    }
    Result r;
    r.pass = ok;
    r.detail = d.str() + "compared byte-for-byte with the 1-worker outputs";
    return r;
  }

 private:
  static PercConfig tree_config(unsigned threads) {
    PercConfig cfg;
    cfg.escape_radius = kTreeL;
    cfg.trials = kTreeTrials;
    cfg.seed = 1;
    cfg.threads = threads;
    return cfg;
  }

  static PercConfig sweep_config(unsigned threads) {
    PercConfig cfg;
    cfg.escape_radius = kSweepL;
    cfg.trials = kSweepTrials;
    cfg.seed = 8;
    cfg.threads = threads;
    return cfg;
  }

  static std::vector<GiantComponentResult> giant_samples(unsigned threads) {
    const auto w = PairWeights::constant(kGiantN, 1.0 / static_cast<double>(kGiantN - 1));
    return giant_component_samples(w, kGiantLambda, kGiantSamples, 11, threads);
  }

  static std::string estimate_csv(const std::string& group, const std::string& measure, const LambdaCEstimate& e) {
    std::ostringstream os;
    CsvWriter w(os, estimate_columns());
    w.row(estimate_row(group, measure, e));
    return os.str();
  }

  static std::string sweep_csv(const SweepReport& r) {
    std::ostringstream os;
    write_sweep_csv(os, r);
    return os.str();
  }

  static std::string giant_csv(const std::vector<GiantComponentResult>& s) {
    std::ostringstream os;
    write_giant_csv(os, kGiantN, kGiantLambda, 11, s);
    return os.str();
  }

  void ensure_f2_z2() {
    if (!f2_estimate_) tree_threshold();
    if (!z2_estimate_) z2_calibration();
  }

  void record_estimate(std::string label, const LambdaCEstimate& e) { estimates_.emplace_back(std::move(label), e); }

  void run(int id, std::string name, const std::function<Result()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.id = id;
    r.name = std::move(name);
    r.seconds = detail::seconds_since(t0);
    all_pass_ = all_pass_ && r.pass;
    out_ << line(r) << std::endl;
    results_.push_back(r);
  }

  std::ostream& out_;
  std::vector<Result> results_;
  bool all_pass_ = true;
  std::optional<LambdaCEstimate> f2_estimate_;
  std::optional<LambdaCEstimate> z2_estimate_;
  std::vector<std::pair<std::string, LambdaCEstimate>> estimates_;
  std::string tree_csv_, sweep_csv_, giant_csv_;
};

}  // namespace pdim::acceptance
