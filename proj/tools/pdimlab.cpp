// pdimlab: batch front end for the percolation-dimension laboratory.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "pdim/acceptance.hpp"
#include "pdim/dimension.hpp"
#include "pdim/groups.hpp"
#include "pdim/measures.hpp"
#include "pdim/percolation.hpp"
#include "pdim/report.hpp"
#include "pdim/saw.hpp"
#include "pdim/spectral.hpp"

namespace {

using namespace pdim;

constexpr int kExitUsage = 1;
constexpr int kExitCap = 2;
constexpr int kExitSelftest = 3;

struct Options {
  std::string command;
  std::string group = "zd:2";
  std::string measure = "uniform-ball:1";
  double lambda = 1.0;
  std::int64_t L = 40;
  std::size_t trials = 10'000;
  double theta = 0.5;
  double lambda_max = 64.0;
  int nmax = 8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  bool exact = false;
  std::string config;
  std::string save_config;
  // subcommand extras
  std::int64_t n = 2;
  std::string criterion = "persistence";
  double s = 1.0;
  std::int64_t M = 1;
  std::int64_t cheeger = 4;
  std::string family = "percolativity";
  std::string n_list = "1,2,4";
  std::string s_list = "3,1.5";
  std::string R_list = "2,4,8,16";
  std::string k_list = "2,3,4,8,16,32";
  std::string growth_radii;
  double r = 0.5;
  double band = kDefaultProximityBand;
  std::optional<double> b;
  std::size_t vertices = 1000;
  std::size_t samples = 20;
  std::string weights;
  std::string criteria;
  std::size_t cap = kDefaultElementCap;
};

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::istringstream is(tok);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) throw UsageError("bad entry '" + tok + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

// ---------------------------------------------------------------------------
// Resolved configuration and output.

ConfigEcho resolved(const Options& o, const std::vector<std::string>& keys) {
  std::map<std::string, std::string> all = {
      {"group", o.group},
      {"measure", o.measure},
      {"lambda", fmt17(o.lambda)},
      {"L", std::to_string(o.L)},
      {"trials", std::to_string(o.trials)},
      {"theta", fmt17(o.theta)},
      {"lambda-max", fmt17(o.lambda_max)},
      {"nmax", std::to_string(o.nmax)},
      {"seed", std::to_string(o.seed)},
      {"threads", std::to_string(o.threads)},
      {"exact", o.exact ? "true" : "false"},
      {"n", std::to_string(o.n)},
      {"criterion", o.criterion},
      {"s", fmt17(o.s)},
      {"M", std::to_string(o.M)},
      {"cheeger", std::to_string(o.cheeger)},
      {"family", o.family},
      {"n-list", o.n_list},
      {"s-list", o.s_list},
      {"R-list", o.R_list},
      {"k-list", o.k_list},
      {"growth-radii", o.growth_radii},
      {"r", fmt17(o.r)},
      {"band", fmt17(o.band)},
      {"b", o.b ? fmt17(*o.b) : ""},
      {"vertices", std::to_string(o.vertices)},
      {"samples", std::to_string(o.samples)},
      {"weights", o.weights},
      {"criteria", o.criteria},
      {"cap", std::to_string(o.cap)},
  };
  ConfigEcho echo{{"command", o.command}};
  for (const auto& k : keys) echo.emplace_back(k, all.at(k));
  return echo;
}

void save_config(const Options& o, const ConfigEcho& echo) {
  if (o.save_config.empty()) return;
  std::ofstream f(o.save_config);
  if (!f) throw UsageError("cannot write config file '" + o.save_config + "'");
  for (const auto& [k, v] : echo) {
    if (k == "command" || v.empty()) continue;
    if (k == "exact") {
      if (v == "true") f << "exact=true\n";
      continue;
    }
    f << k << '=' << v << '\n';
  }
}

std::string json_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash) && out.substr(dot) == ".csv") {
    return out.substr(0, dot) + ".json";
  }
  return out + ".json";
}

// Writes header + CSV to --out (or stdout) and the JSON report next to it.
template <class WriteCsv>
void emit(const Options& o, const ConfigEcho& echo, WriteCsv&& write_csv, const std::optional<Json>& json = std::nullopt) {
  save_config(o, echo);
  if (o.out.empty()) {
    write_csv_header(std::cout, echo);
    write_csv(std::cout);
    std::cout.flush();
    return;
  }
  {
    std::ofstream f(o.out);
    if (!f) throw UsageError("cannot write output file '" + o.out + "'");
    write_csv_header(f, echo);
    write_csv(f);
  }
  if (json) {
    Json doc = config_json(echo);
    doc["report"] = *json;
    std::ofstream f(json_path(o.out));
    if (!f) throw UsageError("cannot write output file '" + json_path(o.out) + "'");
    f << doc.dump(2) << '\n';
  }
}

PercConfig perc_config(const Options& o) {
  PercConfig cfg;
  cfg.lambda = o.lambda;
  cfg.escape_radius = o.L;
  cfg.trials = o.trials;
  cfg.theta = o.theta;
  cfg.lambda_max = o.lambda_max;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  if (o.criterion == "escape") {
    cfg.criterion = SurvivalCriterion::escape;
  } else if (o.criterion == "persistence") {
    cfg.criterion = SurvivalCriterion::persistence;
  } else {
    throw UsageError("--criterion must be 'escape' or 'persistence'");
  }
  cfg.validate();
  return cfg;
}

template <class S>
[[noreturn]] void needs_group(const S& space, const std::string& what) {
  throw UsageError(what + " needs a group; '" + space.name() + "' is a graph (only nearest-neighbour percolation, balls and spectra of sets apply)");
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_ball(const Options& o) {
  if (o.n < 0) throw UsageError("--n must be non-negative");
  const auto space = parse_space(o.group);
  std::visit(
      [&](const auto& sp) {
        const auto b = ball(sp, o.n, o.cap);
        emit(o, resolved(o, {"group", "n", "cap"}), [&](std::ostream& os) {
          CsvWriter w(os, {"group", "radius", "sphere_size", "ball_size"});
          std::size_t total = 0;
          for (std::int64_t m = 0; m <= o.n; ++m) {
            total += b.sphere_sizes[static_cast<std::size_t>(m)];
            w.row({sp.name(), std::to_string(m), std::to_string(b.sphere_sizes[static_cast<std::size_t>(m)]), std::to_string(total)});
          }
        });
      },
      space);
  return 0;
}

int cmd_measure(const Options& o) {
  const auto space = parse_space(o.group);
  std::visit(
      [&](const auto& sp) {
        using S = std::decay_t<decltype(sp)>;
        if constexpr (!Group<S>) {
          needs_group(sp, "measure");
        } else {
          LoadReport load;
          const auto mu = measure_from_spec(sp, o.measure, &load);
          for (const auto& w : load.warnings) std::cerr << "warning: " << w << '\n';
          const auto poly = decay_class(mu, o.s, DecayMode::polynomial);
          const auto ann = annulus_mass(mu, o.M);
          const auto top = max_atom(mu);
          Json j = Json::object();
          j["group"] = sp.name();
          j["measure"] = mu.label();
          j["kind"] = to_string(mu.kind());
          j["support_size"] = mu.support_size();
          j["total_mass"] = mu.total_mass();
          j["decay_class"] = {{"s", o.s},
                              {"mode", "polynomial"},
                              {"b_min", poly.minimal_constant},
                              {"b_min_exact", poly.exact_minimal_constant ? Json(to_string(*poly.exact_minimal_constant)) : Json(nullptr)}};
          if (o.s <= 1.0) {
            const auto ex = decay_class(mu, o.s, DecayMode::stretched_exponential);
            j["stretched_decay_class"] = {{"s", o.s}, {"r_min", ex.minimal_constant}};
          }
          j["annulus_mass"] = {{"M", ann.M}, {"masses", ann.masses}, {"a0_dominant", ann.a0_dominant}};
          j["max_atom"] = {{"element", sp.format(top.element)}, {"delta", top.mass}};
          if (!load.warnings.empty()) j["load_warnings"] = load.warnings;
          emit(
              o, resolved(o, {"group", "measure", "s", "M"}),
              [&](std::ostream& os) {
                CsvWriter w(os, {"group", "measure", "element", "mass", "exact"});
                for (const auto& a : mu.support()) {
                  w.row({sp.name(), mu.label(), sp.format(a.element), fmt17(a.mass), a.exact ? to_string(*a.exact) : ""});
                }
              },
              j);
        }
      },
      space);
  return 0;
}

int cmd_lambda_c(const Options& o) {
  const auto cfg = perc_config(o);
  const auto space = parse_space(o.group);
  const auto keys = std::vector<std::string>{"group", "measure", "L", "trials", "theta", "lambda-max", "criterion", "seed", "threads"};
  std::visit(
      [&](const auto& sp) {
        using S = std::decay_t<decltype(sp)>;
        auto report = [&](const auto& kernel, const std::string& label) {
          const auto est = lambda_c_estimate(kernel, cfg);
          Json j = estimate_json(est);
          j["group"] = sp.name();
          j["measure"] = label;
          emit(
              o, resolved(o, keys),
              [&](std::ostream& os) {
                CsvWriter w(os, estimate_columns());
                w.row(estimate_row(sp.name(), label, est));
              },
              j);
        };
        if constexpr (Group<S>) {
          const auto mu = measure_from_spec(sp, o.measure);
          report(GroupKernel<S>(mu), mu.label());
        } else {
          if (o.measure != "uniform-ball:1") throw UsageError("graph spaces support only --measure uniform-ball:1 (nearest neighbour)");
          report(GraphKernel<S>::nearest_neighbour(sp), "uniform-ball:1");
        }
      },
      space);
  return 0;
}

int cmd_saw(const Options& o) {
  if (o.nmax < 0) throw UsageError("--nmax must be non-negative");
  const auto space = parse_space(o.group);
  std::visit(
      [&](const auto& sp) {
        using S = std::decay_t<decltype(sp)>;
        if constexpr (!Group<S>) {
          needs_group(sp, "saw");
        } else {
          const auto mu = measure_from_spec(sp, o.measure);
          SawOptions opt;
          opt.exact = o.exact;
          opt.threads = o.threads;
          const auto table = sigma_table(mu, o.nmax, opt);
          Json j = Json::object();
          j["group"] = table.group;
          j["measure"] = table.measure;
          if (o.nmax >= 1) {
            const auto nu = nu_upper(table, o.nmax);
            j["nu_upper"] = nu.value;
            j["nu_upper_best"] = nu.best;
            j["nu_upper_best_n"] = nu.best_n;
          }
          j["submultiplicativity_violations"] = submultiplicativity_violations(table).size();
          Json errs = Json::array();
          for (const auto& e : table.entries) errs.push_back(e.error_bound);
          j["error_bounds"] = errs;
          emit(o, resolved(o, {"group", "measure", "nmax", "exact", "threads"}), [&](std::ostream& os) { write_saw_csv(os, table); }, j);
        }
      },
      space);
  return 0;
}

int cmd_spectral(const Options& o) {
  if (o.nmax < 0) throw UsageError("--nmax must be non-negative");
  const auto space = parse_space(o.group);
  std::visit(
      [&](const auto& sp) {
        using S = std::decay_t<decltype(sp)>;
        if constexpr (!Group<S>) {
          needs_group(sp, "spectral");
        } else {
          const auto mu = measure_from_spec(sp, o.measure);
          ReturnTable t;
          std::size_t S_size = mu.support_size();
          bool radial = false;
          if constexpr (std::same_as<S, FreeGroup>) {
            // uniform generator measure on F_k: the distance chain is exact and cheap
            radial = mu.support_size() == static_cast<std::size_t>(2 * sp.rank()) && mu.radius() == 1 && mu.exact();
          }
          t = radial ? radial_return_probabilities(static_cast<int>(S_size / 2), o.nmax) : return_probabilities(mu, o.nmax, o.exact, o.cap);
          if (radial) t.measure = mu.label();
          Json j = Json::object();
          std::optional<CheegerReport> ch;
          if (o.cheeger >= 0) ch = cheeger_report(sp, o.cheeger, o.cap);
          if (o.nmax >= 20) {
            const auto rho = rho_estimate(t);
            j = spectral_json(t, rho, ch);
            const auto kv = kesten_inequality_check(S_size, rho.rho);
            j["kesten"] = {{"lhs", kv.lhs}, {"rhs", kv.rhs}, {"holds", kv.pass}};
          } else {
            j["group"] = t.group;
            j["measure"] = t.measure;
            j["mode"] = to_string(t.mode);
            j["note"] = "rho estimate needs --nmax >= 20";
          }
          emit(o, resolved(o, {"group", "measure", "nmax", "exact", "cheeger", "cap"}), [&](std::ostream& os) { write_return_csv(os, t); }, j);
        }
      },
      space);
  return 0;
}

int cmd_sweep(const Options& o) {
  const auto space = parse_space(o.group);
  if (o.family == "free") {
    const auto rep = free_surrogate_sweep(parse_list<int>(o.k_list, "--k-list"), o.band);
    emit(o, resolved(o, {"family", "k-list", "band"}), [&](std::ostream& os) { write_sweep_csv(os, rep); }, sweep_json(rep));
    return 0;
  }
  std::visit(
      [&](const auto& sp) {
        using S = std::decay_t<decltype(sp)>;
        if (o.family == "growth") {
          const auto fit = growth_fit(sp, parse_list<std::int64_t>(o.growth_radii.empty() ? "2,4,8,16" : o.growth_radii, "--growth-radii"));
          Json j = {{"group", sp.name()},       {"radii", fit.radii},           {"sizes", fit.sizes},
                    {"d_hat", fit.d_hat},       {"residuals", fit.residuals},   {"rms", fit.rms},
                    {"exp_rate", fit.exp_rate}, {"exp_rms", fit.exp_rms},       {"exponential", fit.exponential},
                    {"stretched_s", fit.stretched_s}, {"statement", fit.statement}};
          emit(
              o, resolved(o, {"group", "family", "growth-radii"}),
              [&](std::ostream& os) {
                CsvWriter w(os, {"group", "radius", "ball_size"});
                for (std::size_t i = 0; i < fit.radii.size(); ++i) w.row({sp.name(), std::to_string(fit.radii[i]), std::to_string(fit.sizes[i])});
              },
              j);
          return;
        }
        if (o.family == "lb") {
          if (o.s < 1.0 || o.s != std::floor(o.s)) throw UsageError("lb certificate needs an integral --s >= 1");
          const auto c = lb_certificate(sp, parse_list<std::int64_t>(o.n_list, "--n-list"), static_cast<unsigned>(o.s), o.b);
          Json rows = Json::array();
          for (const auto& r : c.rows) rows.push_back({{"n", r.n}, {"ball_size", r.ball_size}, {"b_min", to_string(r.b_min)}, {"member", r.member}});
          Json j = {{"group", sp.name()}, {"s", c.s}, {"b", c.b}, {"rows", rows}, {"all_member", c.all_member}};
          emit(
              o, resolved(o, {"group", "family", "n-list", "s", "b"}),
              [&](std::ostream& os) {
                CsvWriter w(os, {"group", "n", "ball_size", "b_min", "member"});
                for (const auto& r : c.rows) w.row({sp.name(), std::to_string(r.n), std::to_string(r.ball_size), to_string(r.b_min), r.member ? "true" : "false"});
              },
              j);
          return;
        }
        if constexpr (!Group<S>) {
          needs_group(sp, "sweep family '" + o.family + "'");
        } else {
          const auto cfg = perc_config(o);
          SweepReport rep;
          std::vector<std::string> keys{"group", "family", "L", "trials", "theta", "lambda-max", "criterion", "seed", "threads", "band"};
          if (o.family == "percolativity") {
            rep = percolativity_sweep(sp, parse_list<std::int64_t>(o.n_list, "--n-list"), cfg, o.band);
            keys.push_back("n-list");
          } else if (o.family == "pdim") {
            rep = pdim_sweep(sp, parse_list<double>(o.s_list, "--s-list"), parse_list<std::int64_t>(o.R_list, "--R-list"), cfg, o.band);
            keys.insert(keys.end(), {"s-list", "R-list"});
          } else if (o.family == "epdim") {
            rep = epdim_sweep(sp, o.r, parse_list<double>(o.s_list, "--s-list"), parse_list<std::int64_t>(o.R_list, "--R-list"), cfg, o.band);
            keys.insert(keys.end(), {"r", "s-list", "R-list"});
          } else {
            throw UsageError("--family must be percolativity, pdim, epdim, free, growth or lb");
          }
          if (!o.growth_radii.empty()) {
            rep.upper_bound = growth_fit(sp, parse_list<std::int64_t>(o.growth_radii, "--growth-radii")).statement;
            keys.push_back("growth-radii");
          }
          emit(o, resolved(o, keys), [&](std::ostream& os) { write_sweep_csv(os, rep); }, sweep_json(rep));
        }
      },
      space);
  return 0;
}

PairWeights load_pair_weights(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open weights file '" + path + "'");
  PairWeights w(n);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::size_t u, v;
    double x;
    if (!(ls >> u >> v >> x)) throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'u v weight'");
    w.set(u, v, x);
  }
  return w;
}

int cmd_giant(const Options& o) {
  if (o.vertices < 2) throw UsageError("--vertices must be at least 2");
  if (o.samples < 1) throw UsageError("--samples must be at least 1");
  if (!(o.lambda >= 0.0)) throw UsageError("--lambda must be non-negative");
  const auto w = o.weights.empty() ? PairWeights::constant(o.vertices, 1.0 / static_cast<double>(o.vertices - 1))
                                   : load_pair_weights(o.weights, o.vertices);
  const auto samples = giant_component_samples(w, o.lambda, o.samples, o.seed, o.threads);
  double mean = 0.0;
  for (const auto& s : samples) mean += s.largest_fraction;
  mean /= static_cast<double>(samples.size());
  Json hist = Json::array();
  for (const auto& s : samples) {
    Json h = Json::object();
    for (const auto& [size, count] : s.size_histogram) h[std::to_string(size)] = count;
    hist.push_back(h);
  }
  Json j = {{"vertices", o.vertices}, {"lambda", o.lambda}, {"samples", o.samples}, {"mean_largest_fraction", mean}, {"histograms", hist}};
  emit(o, resolved(o, {"vertices", "lambda", "samples", "weights", "seed", "threads"}),
       [&](std::ostream& os) { write_giant_csv(os, o.vertices, o.lambda, o.seed, samples); }, j);
  return 0;
}

int cmd_selftest(const Options& o) {
  acceptance::Suite suite(std::cout);
  bool ok = true;
  if (o.criteria.empty()) {
    ok = suite.run_all();
  } else {
    using Fn = acceptance::Result (acceptance::Suite::*)();
    const std::map<int, std::pair<const char*, Fn>> table = {
        {1, {"tree threshold F_2", &acceptance::Suite::tree_threshold}},
        {2, {"Z^2 calibration", &acceptance::Suite::z2_calibration}},
        {3, {"universal lower bound", &acceptance::Suite::lower_bound}},
        {4, {"uniform-measure SAW identity", &acceptance::Suite::numu}},
        {5, {"lambda_c >= 1/nu cross-check", &acceptance::Suite::lacoco}},
        {6, {"unique-path tree oracle", &acceptance::Suite::unique_path}},
        {7, {"Z^1 divergence", &acceptance::Suite::z1_divergence}},
        {8, {"percolativity trend on Z^2", &acceptance::Suite::percolativity}},
        {9, {"atom obstruction and decay sweep", &acceptance::Suite::obstruction}},
        {10, {"spectral radius and Kesten", &acceptance::Suite::spectral}},
        {11, {"giant component", &acceptance::Suite::giant}},
        {12, {"determinism across workers", &acceptance::Suite::determinism}},
    };
    for (int id : parse_list<int>(o.criteria, "--criteria")) {
      const auto it = table.find(id);
      if (it == table.end()) throw UsageError("no acceptance criterion " + std::to_string(id));
      const auto t0 = std::chrono::steady_clock::now();
      acceptance::Result r;
      try {
        r = (suite.*(it->second.second))();
      } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
      }
      r.id = id;
      r.name = it->second.first;
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cout << acceptance::line(r) << std::endl;
      ok = ok && r.pass;
    }
  }
  return ok ? 0 : kExitSelftest;
}

// ---------------------------------------------------------------------------
// Config files: flat key=value lines mirroring the long flags. They are
// spliced in front of the command-line flags, and the last value wins.

std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    if (key == "config") continue;
    if (key == "exact") {
      if (value == "true" || value == "1") tokens.push_back("--exact");
      else if (value != "false" && value != "0") throw UsageError(path + ":" + std::to_string(lineno) + ": exact must be true or false");
      continue;
    }
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (!path) return args;
  if (args.size() < 2 || args[1].starts_with("-")) throw UsageError("--config must follow a subcommand");
  auto tokens = config_tokens(*path);
  args.insert(args.begin() + 2, tokens.begin(), tokens.end());
  return args;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--group", o.group, "group spec: zd:<d>, free:<k>, heis, lamp, canopy:<D>, graph:<edge-list>")->capture_default_str();
  sub->add_option("--measure", o.measure, "measure spec: uniform-ball:<n>, uniform-set:<file>, poly:<s>,<R>, sexp:<r>,<s>,<R>, file:<path>")
      ->capture_default_str();
  sub->add_option("--lambda", o.lambda, "intensity multiplier")->capture_default_str();
  sub->add_option("--L", o.L, "escape radius (word length)")->capture_default_str();
  sub->add_option("--trials", o.trials, "trials per estimate")->capture_default_str();
  sub->add_option("--theta", o.theta, "bisection threshold in (0,1)")->capture_default_str();
  sub->add_option("--lambda-max", o.lambda_max, "lambda search cap")->capture_default_str();
  sub->add_option("--nmax", o.nmax, "maximal walk length / step count")->capture_default_str();
  sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
  sub->add_option("--threads", o.threads, "worker count")->capture_default_str();
  sub->add_option("--out", o.out, "output CSV path (JSON report written alongside)");
  sub->add_flag("--exact", o.exact, "exact rational arithmetic where available");
  sub->add_option("--config", o.config, "flat key=value config file; flags override it");
  sub->add_option("--save-config", o.save_config, "write the resolved config as key=value");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"pdimlab: long-range percolation and self-avoiding walks on finitely generated groups"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  auto* ball_cmd = app.add_subcommand("ball", "enumerate B(n): sphere and ball sizes");
  auto* measure_cmd = app.add_subcommand("measure", "build a measure: atoms, decay class, annulus masses");
  auto* lambda_cmd = app.add_subcommand("lambda-c", "estimate lambda_c by bisection on the window criterion");
  auto* saw_cmd = app.add_subcommand("saw", "weighted self-avoiding walk table sigma_n");
  auto* spectral_cmd = app.add_subcommand("spectral", "return probabilities, rho estimate, isoperimetric ratios");
  auto* sweep_cmd = app.add_subcommand("sweep", "measure-family sweeps and growth fits");
  auto* giant_cmd = app.add_subcommand("giant", "largest component of a finite weighted graph");
  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  for (auto* sub : {ball_cmd, measure_cmd, lambda_cmd, saw_cmd, spectral_cmd, sweep_cmd, giant_cmd, selftest_cmd}) add_common(sub, o);

  ball_cmd->add_option("--n", o.n, "radius")->capture_default_str();
  ball_cmd->add_option("--cap", o.cap, "element cap")->capture_default_str();
  spectral_cmd->add_option("--cap", o.cap, "element cap for the convolution support and balls")->capture_default_str();
  measure_cmd->add_option("--s", o.s, "decay exponent for the class report")->capture_default_str();
  measure_cmd->add_option("--M", o.M, "annulus base radius")->capture_default_str();
  lambda_cmd->add_option("--criterion", o.criterion, "window criterion: persistence or escape")->capture_default_str();
  spectral_cmd->add_option("--cheeger", o.cheeger, "largest ball radius for boundary ratios (-1 to skip)")->capture_default_str();
  sweep_cmd->add_option("--family", o.family, "percolativity, pdim, epdim, free, growth or lb")->capture_default_str();
  sweep_cmd->add_option("--criterion", o.criterion, "window criterion: persistence or escape")->capture_default_str();
  sweep_cmd->add_option("--n-list", o.n_list, "ball radii, comma separated")->capture_default_str();
  sweep_cmd->add_option("--s-list", o.s_list, "decay exponents")->capture_default_str();
  sweep_cmd->add_option("--R-list", o.R_list, "truncation radii")->capture_default_str();
  sweep_cmd->add_option("--k-list", o.k_list, "free-group ranks (family free)")->capture_default_str();
  sweep_cmd->add_option("--r", o.r, "stretched-exponential base in (0,1)")->capture_default_str();
  sweep_cmd->add_option("--band", o.band, "proximity band above 1")->capture_default_str();
  sweep_cmd->add_option("--growth-radii", o.growth_radii, "geometric radii for the growth fit");
  sweep_cmd->add_option("--s", o.s, "decay exponent (family lb)")->capture_default_str();
  sweep_cmd->add_option("--b", o.b, "ball-growth constant (family lb); default from a fit");
  giant_cmd->add_option("--vertices", o.vertices, "vertex count")->capture_default_str();
  giant_cmd->add_option("--samples", o.samples, "independent samples")->capture_default_str();
  giant_cmd->add_option("--weights", o.weights, "pair weights file 'u v w' (default all pairs 1/(n-1))");
  selftest_cmd->add_option("--criteria", o.criteria, "comma-separated criterion ids (default all)");

  try {
    auto args = expand_config(argc, argv);
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : kExitUsage;
    }
    o.command = app.get_subcommands().front()->get_name();
    if (o.threads == 0) throw UsageError("--threads must be at least 1");
    if (o.command == "ball") return cmd_ball(o);
    if (o.command == "measure") return cmd_measure(o);
    if (o.command == "lambda-c") return cmd_lambda_c(o);
    if (o.command == "saw") return cmd_saw(o);
    if (o.command == "spectral") return cmd_spectral(o);
    if (o.command == "sweep") return cmd_sweep(o);
    if (o.command == "giant") return cmd_giant(o);
    if (o.command == "selftest") return cmd_selftest(o);
    return kExitUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what();
    if (!e.partial().empty()) {
      std::cerr << " (partial:";
      for (auto v : e.partial()) std::cerr << ' ' << v;
      std::cerr << ')';
    }
    std::cerr << '\n';
    return kExitCap;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
