#pragma once

// Finite-support symmetric probability measures on groups, their decay
// classes (polynomial and stretched-exponential), and the dyadic annulus
// masses used by the growth-rate upper bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pdim/errors.hpp"
#include "pdim/groups.hpp"
#include "pdim/rational.hpp"
#include "pdim/stats.hpp"

namespace pdim {

inline constexpr double kMassTolerance = 1e-12;

template <class E>
struct Atom {
  E element;
  double mass = 0.0;
  std::optional<Rational> exact;  // present when the mass is a known rational
};

enum class MeasureKind { uniform_ball, uniform_set, poly_decay, stretched_exp, explicit_weights };

inline const char* to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::uniform_ball: return "uniform-ball";
    case MeasureKind::uniform_set: return "uniform-set";
    case MeasureKind::poly_decay: return "poly";
    case MeasureKind::stretched_exp: return "sexp";
    case MeasureKind::explicit_weights: return "explicit";
  }
  return "?";
}

// Immutable symmetric probability measure with finite, identity-free support.
// Support is stored in canonical element order.
template <Group G>
class Measure {
 public:
  using element_type = element_t<G>;
  using atom_type = Atom<element_type>;

  Measure(G ctx, std::vector<atom_type> atoms, MeasureKind kind, std::string label)
      : ctx_(std::move(ctx)), atoms_(std::move(atoms)), kind_(kind), label_(std::move(label)),
        index_(16, SpaceHash<G>{&ctx_}) {
    if (atoms_.empty()) throw UsageError("measure support is empty");
    std::sort(atoms_.begin(), atoms_.end(),
              [&](const atom_type& a, const atom_type& b) { return ctx_.canonical_less(a.element, b.element); });
    const auto id = ctx_.identity();
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const auto& a = atoms_[i];
      if (a.element == id) throw UsageError("measure support contains the identity");
      if (!(a.mass > 0.0)) throw UsageError("measure masses must be positive");
      if (!index_.emplace(a.element, i).second) throw UsageError("measure support has duplicate element " + ctx_.format(a.element));
    }
    CompensatedSum total;
    for (const auto& a : atoms_) {
      total.add(a.mass);
      const auto it = index_.find(ctx_.inv(a.element));
      if (it == index_.end() || atoms_[it->second].mass != a.mass) {
        throw UsageError("measure is not symmetric at " + ctx_.format(a.element));
      }
    }
    total_ = total.value();
    if (std::abs(total_ - 1.0) > kMassTolerance) throw UsageError("measure mass " + std::to_string(total_) + " is not 1");
    exact_ = std::all_of(atoms_.begin(), atoms_.end(), [](const atom_type& a) { return a.exact.has_value(); });
  }

  // Index refers into ctx_, so copies rebuild it.
  Measure(const Measure& o) : Measure(o.ctx_, o.atoms_, o.kind_, o.label_) {}
  Measure& operator=(const Measure&) = delete;

  const G& context() const noexcept { return ctx_; }
  const std::vector<atom_type>& support() const noexcept { return atoms_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }
  MeasureKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  double total_mass() const noexcept { return total_; }
  bool exact() const noexcept { return exact_; }

  double mass(const element_type& g) const {
    const auto it = index_.find(g);
    return it == index_.end() ? 0.0 : atoms_[it->second].mass;
  }

  // Largest word length in the support.
  std::int64_t radius() const {
    std::int64_t r = 0;
    for (const auto& a : atoms_) r = std::max(r, ctx_.word_length(a.element));
    return r;
  }

 private:
  G ctx_;
  std::vector<atom_type> atoms_;
  MeasureKind kind_;
  std::string label_;
  std::unordered_map<element_type, std::size_t, SpaceHash<G>> index_;
  double total_ = 0.0;
  bool exact_ = false;
};

namespace detail {

template <class G>
Measure<G> from_exact_weights(const G& ctx, const std::vector<element_t<G>>& support,
                              const std::vector<Rational>& weights, MeasureKind kind, std::string label) {
  Rational z = 0;
  for (const auto& w : weights) z += w;
  std::vector<Atom<element_t<G>>> atoms;
  atoms.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    Rational m = weights[i] / z;
    atoms.push_back({support[i], to_double(m), std::move(m)});
  }
  return Measure<G>(ctx, std::move(atoms), kind, std::move(label));
}

// Weights must already be equal on g and g^-1 (they depend on |g| only).
template <class G>
Measure<G> from_double_weights(const G& ctx, const std::vector<element_t<G>>& support,
                               const std::vector<double>& weights, MeasureKind kind, std::string label) {
  // Sum in the canonical order of lengths so inverse pairs normalize identically.
  CompensatedSum z;
  for (double w : weights) z.add(w);
  std::vector<Atom<element_t<G>>> atoms;
  atoms.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) atoms.push_back({support[i], weights[i] / z.value(), std::nullopt});
  return Measure<G>(ctx, std::move(atoms), kind, std::move(label));
}

inline std::string fmt_param(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <class G>
std::vector<element_t<G>> punctured_ball(const G& ctx, std::int64_t n, std::size_t cap) {
  auto b = ball(ctx, n, cap);
  return {b.elements.begin() + 1, b.elements.end()};
}

}  // namespace detail

// Equidistribution on B(n) \ {e}.
template <Group G>
Measure<G> uniform_on_ball(const G& ctx, std::int64_t n, std::size_t cap = kDefaultElementCap) {
  if (n < 1) throw UsageError("uniform_on_ball needs n >= 1");
  const auto support = detail::punctured_ball(ctx, n, cap);
  std::vector<Rational> w(support.size(), Rational(1));
  return detail::from_exact_weights(ctx, support, w, MeasureKind::uniform_ball, "uniform-ball:" + std::to_string(n));
}

// Equidistribution on a symmetric, identity-free set (duplicates collapse).
template <Group G>
Measure<G> uniform_on_set(const G& ctx, std::vector<element_t<G>> set, std::string label = "uniform-set") {
  if (set.empty()) throw UsageError("uniform_on_set needs a non-empty set");
  std::sort(set.begin(), set.end(), [&](const auto& a, const auto& b) { return ctx.canonical_less(a, b); });
  set.erase(std::unique(set.begin(), set.end()), set.end());
  ElementSet<G> members(set.begin(), set.end(), 16, SpaceHash<G>{&ctx});
  for (const auto& g : set) {
    if (g == ctx.identity()) throw UsageError("uniform_on_set: set contains the identity");
    if (!members.contains(ctx.inv(g))) throw UsageError("uniform_on_set: set is not symmetric (missing inverse of " + ctx.format(g) + ")");
  }
  std::vector<Rational> w(set.size(), Rational(1));
  return detail::from_exact_weights(ctx, set, w, MeasureKind::uniform_set, std::move(label));
}

// Uniform on the context's own generating set.
template <Group G>
Measure<G> uniform_on_generators(const G& ctx) {
  auto gens = ctx.generators();
  return uniform_on_set(ctx, std::vector<element_t<G>>(gens.begin(), gens.end()), "uniform-ball:1");
}

// mu(g) proportional to |g|^-s on B(R) \ {e}.
template <Group G>
Measure<G> poly_decay(const G& ctx, double s, std::int64_t R, std::size_t cap = kDefaultElementCap) {
  if (!(s > 0.0)) throw UsageError("poly_decay needs s > 0");
  if (R < 1) throw UsageError("poly_decay needs R >= 1");
  const auto support = detail::punctured_ball(ctx, R, cap);
  const std::string label = "poly:" + detail::fmt_param(s) + "," + std::to_string(R);
  if (s == std::floor(s) && s <= 64) {
    std::vector<Rational> w;
    w.reserve(support.size());
    for (const auto& g : support) w.push_back(Rational(1) / pow(Rational(ctx.word_length(g)), static_cast<unsigned>(s)));
    return detail::from_exact_weights(ctx, support, w, MeasureKind::poly_decay, label);
  }
  std::vector<double> w;
  w.reserve(support.size());
  for (const auto& g : support) w.push_back(std::pow(static_cast<double>(ctx.word_length(g)), -s));
  return detail::from_double_weights(ctx, support, w, MeasureKind::poly_decay, label);
}

// mu(g) proportional to r^(|g|^s) on B(R) \ {e}; exact when s = 1.
template <Group G>
Measure<G> stretched_exp_decay(const G& ctx, double r, double s, std::int64_t R, std::size_t cap = kDefaultElementCap) {
  if (!(r > 0.0 && r < 1.0)) throw UsageError("stretched_exp_decay needs r in (0,1)");
  if (!(s > 0.0 && s <= 1.0)) throw UsageError("stretched_exp_decay needs s in (0,1]");
  if (R < 1) throw UsageError("stretched_exp_decay needs R >= 1");
  const auto support = detail::punctured_ball(ctx, R, cap);
  const std::string label = "sexp:" + detail::fmt_param(r) + "," + detail::fmt_param(s) + "," + std::to_string(R);
  if (s == 1.0) {
    const Rational rq(r);
    std::vector<Rational> w;
    w.reserve(support.size());
    for (const auto& g : support) w.push_back(pow(rq, static_cast<unsigned>(ctx.word_length(g))));
    return detail::from_exact_weights(ctx, support, w, MeasureKind::stretched_exp, label);
  }
  std::vector<double> w;
  w.reserve(support.size());
  for (const auto& g : support) w.push_back(std::pow(r, std::pow(static_cast<double>(ctx.word_length(g)), s)));
  return detail::from_double_weights(ctx, support, w, MeasureKind::stretched_exp, label);
}

// Corrections applied when turning raw weights into a measure.
struct LoadReport {
  double identity_mass_removed = 0.0;
  double max_asymmetry = 0.0;  // max |w(g) - w(g^-1)| before averaging
  double raw_total = 0.0;
  std::vector<std::string> warnings;
};

// Symmetrizes by averaging w(g) and w(g^-1), drops identity mass, renormalizes.
template <Group G>
Measure<G> from_weights(const G& ctx, const std::vector<std::pair<element_t<G>, double>>& raw, LoadReport* report = nullptr,
                        std::string label = "explicit") {
  using E = element_t<G>;
  LoadReport rep;
  std::unordered_map<E, double, SpaceHash<G>> w(16, SpaceHash<G>{&ctx});
  for (const auto& [g, p] : raw) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw UsageError("explicit measure has invalid mass for " + ctx.format(g));
    rep.raw_total += p;
    w[g] += p;
  }
  const E id = ctx.identity();
  if (auto it = w.find(id); it != w.end()) {
    rep.identity_mass_removed = it->second;
    if (it->second > 0.0) rep.warnings.push_back("removed identity mass " + detail::fmt_param(it->second));
    w.erase(it);
  }
  std::vector<E> support;
  for (const auto& [g, p] : w) support.push_back(g);
  for (const auto& g : support) {
    const E gi = ctx.inv(g);
    if (!w.contains(gi)) w.emplace(gi, 0.0);
  }
  support.clear();
  for (const auto& [g, p] : w) support.push_back(g);
  std::sort(support.begin(), support.end(), [&](const E& a, const E& b) { return ctx.canonical_less(a, b); });
  std::vector<E> kept;
  std::vector<double> sym;
  for (const auto& g : support) {
    const double a = w.at(g), b = w.at(ctx.inv(g));
    rep.max_asymmetry = std::max(rep.max_asymmetry, std::abs(a - b));
    const double avg = g == ctx.inv(g) ? a : (a + b) / 2.0;
    if (avg > 0.0) {
      kept.push_back(g);
      sym.push_back(avg);
    }
  }
  if (kept.empty()) throw UsageError("explicit measure has no mass off the identity");
  if (rep.max_asymmetry > 0.0) rep.warnings.push_back("symmetrized (max asymmetry " + detail::fmt_param(rep.max_asymmetry) + ")");
  // Pair each element with its inverse so both receive the bitwise-same normalized mass.
  CompensatedSum z;
  for (double v : sym) z.add(v);
  std::vector<Atom<E>> atoms;
  for (std::size_t i = 0; i < kept.size(); ++i) atoms.push_back({kept[i], sym[i] / z.value(), std::nullopt});
  if (std::abs(z.value() - 1.0) > kMassTolerance) rep.warnings.push_back("renormalized by " + detail::fmt_param(z.value()));
  if (report) *report = rep;
  return Measure<G>(ctx, std::move(atoms), MeasureKind::explicit_weights, std::move(label));
}

// File format: one "<element-literal> <probability>" per line; '#' comments.
template <Group G>
Measure<G> load_measure(const G& ctx, const std::string& path, LoadReport* report = nullptr) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open measure file '" + path + "'");
  std::vector<std::pair<element_t<G>, double>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string lit;
    double p;
    if (!(ls >> lit >> p)) throw UsageError(path + ":" + std::to_string(lineno) + ": expected '<element> <probability>'");
    raw.emplace_back(ctx.parse(lit), p);
  }
  return from_weights(ctx, raw, report, "file:" + path);
}

// Reads a whitespace-separated list of element literals (for uniform-set:<file>).
template <Group G>
std::vector<element_t<G>> load_element_set(const G& ctx, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open element set '" + path + "'");
  std::vector<element_t<G>> out;
  std::string tok;
  while (in >> tok) {
    if (tok.starts_with('#')) {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    out.push_back(ctx.parse(tok));
  }
  return out;
}

namespace detail {

inline std::vector<double> spec_numbers(std::string_view spec, std::string_view body, std::size_t count) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    const auto comma = body.find(',', start);
    const std::string tok(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) throw UsageError("bad number '" + tok + "' in measure spec '" + std::string(spec) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() != count) throw UsageError("measure spec '" + std::string(spec) + "' expects " + std::to_string(count) + " parameters");
  return out;
}

inline std::int64_t spec_integer(std::string_view spec, double v) {
  if (v != std::floor(v) || std::abs(v) > 1e15) throw UsageError("measure spec '" + std::string(spec) + "' expects an integer radius");
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

// Measure spec grammar: uniform-ball:<n>, uniform-set:<file>, poly:<s>,<R>,
// sexp:<r>,<s>,<R>, file:<path>.
template <Group G>
Measure<G> measure_from_spec(const G& ctx, std::string_view spec, LoadReport* report = nullptr) {
  auto body = [&](std::string_view prefix) { return spec.substr(prefix.size()); };
  if (spec.starts_with("uniform-ball:")) {
    const auto v = detail::spec_numbers(spec, body("uniform-ball:"), 1);
    return uniform_on_ball(ctx, detail::spec_integer(spec, v[0]));
  }
  if (spec.starts_with("uniform-set:")) {
    const std::string path(body("uniform-set:"));
    return uniform_on_set(ctx, load_element_set(ctx, path), "uniform-set:" + path);
  }
  if (spec.starts_with("poly:")) {
    const auto v = detail::spec_numbers(spec, body("poly:"), 2);
    return poly_decay(ctx, v[0], detail::spec_integer(spec, v[1]));
  }
  if (spec.starts_with("sexp:")) {
    const auto v = detail::spec_numbers(spec, body("sexp:"), 3);
    return stretched_exp_decay(ctx, v[0], v[1], detail::spec_integer(spec, v[2]));
  }
  if (spec.starts_with("file:")) return load_measure(ctx, std::string(body("file:")), report);
  throw UsageError("unknown measure spec '" + std::string(spec) +
                   "' (expected uniform-ball:<n>, uniform-set:<file>, poly:<s>,<R>, sexp:<r>,<s>,<R>, file:<path>)");
}

// ---------------------------------------------------------------------------
// Decay classes.

enum class DecayMode { polynomial, stretched_exponential };

struct DecayClassReport {
  double s = 0.0;
  DecayMode mode = DecayMode::polynomial;
  // polynomial: b_min = max_g mu(g) |g|^s, and mu in M_s^b iff b > b_min.
  // stretched exponential: r_min = max_g mu(g)^(1/|g|^s), and mu in eM_s^r iff r > r_min.
  double minimal_constant = 0.0;
  std::optional<Rational> exact_minimal_constant;  // polynomial mode, exact mu, integral s

  bool member(double constant) const noexcept { return constant > minimal_constant; }
};

template <Group G>
DecayClassReport decay_class(const Measure<G>& mu, double s, DecayMode mode = DecayMode::polynomial) {
  if (!(s > 0.0)) throw UsageError("decay exponent must be positive");
  DecayClassReport rep;
  rep.s = s;
  rep.mode = mode;
  const auto& ctx = mu.context();
  const bool integral = s == std::floor(s) && s <= 64;
  if (mode == DecayMode::polynomial && mu.exact() && integral) {
    Rational best = 0;
    for (const auto& a : mu.support()) {
      Rational v = *a.exact * pow(Rational(ctx.word_length(a.element)), static_cast<unsigned>(s));
      if (v > best) best = v;
    }
    rep.minimal_constant = to_double(best);
    rep.exact_minimal_constant = best;
    return rep;
  }
  double best = 0.0;
  for (const auto& a : mu.support()) {
    const double len = static_cast<double>(ctx.word_length(a.element));
    const double v = mode == DecayMode::polynomial ? a.mass * std::pow(len, s) : std::pow(a.mass, 1.0 / std::pow(len, s));
    best = std::max(best, v);
  }
  rep.minimal_constant = best;
  return rep;
}

// ---------------------------------------------------------------------------
// Annulus masses and the heaviest atom.

struct AnnulusMass {
  std::int64_t M = 1;
  std::vector<double> masses;               // masses[i] = mu(A_i)
  std::optional<std::vector<Rational>> exact;
  bool a0_dominant = false;                 // mu(A_0) > 1/2
};

template <Group G>
AnnulusMass annulus_mass(const Measure<G>& mu, std::int64_t M) {
  if (M < 1) throw UsageError("annulus_mass needs M >= 1");
  AnnulusMass out;
  out.M = M;
  const auto& ctx = mu.context();
  std::vector<CompensatedSum> sums;
  std::vector<Rational> exact;
  for (const auto& a : mu.support()) {
    const auto i = static_cast<std::size_t>(annulus_index(ctx.word_length(a.element), M));
    if (sums.size() <= i) {
      sums.resize(i + 1);
      exact.resize(i + 1);
    }
    sums[i].add(a.mass);
    if (mu.exact()) exact[i] += *a.exact;
  }
  for (const auto& s : sums) out.masses.push_back(s.value());
  if (mu.exact()) {
    out.exact = exact;
    out.a0_dominant = exact[0] > Rational(1, 2);
  } else {
    out.a0_dominant = out.masses[0] > 0.5;
  }
  return out;
}

template <class E>
struct MaxAtom {
  E element;
  double mass = 0.0;
  std::optional<Rational> exact;
};

// Heaviest atom; ties go to the canonically smallest element.
template <Group G>
MaxAtom<element_t<G>> max_atom(const Measure<G>& mu) {
  const auto* best = &mu.support().front();
  for (const auto& a : mu.support()) {
    if (a.mass > best->mass) best = &a;
  }
  return {best->element, best->mass, best->exact};
}

}  // namespace pdim
