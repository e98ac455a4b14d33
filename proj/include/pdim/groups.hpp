#pragma once

// Word-metric geometry of concrete finitely generated groups (Z^d, free
// groups, the discrete Heisenberg group, the lamplighter over Z) and of two
// graph-only metric spaces (the canopy tree and edge-list graphs).
//
// Every space exposes the same vocabulary: identity(), word_length(v),
// hash(v), for_each_step(v, f) over Cayley/graph neighbours, a canonical
// total order and a text format. Groups additionally provide mul/inv and a
// symmetric generating set.

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "pdim/errors.hpp"
#include "pdim/rng.hpp"

namespace pdim {

inline constexpr std::size_t kDefaultElementCap = 50'000'000;

// 0, 1, -1, 2, -2, ... ; orders positive before negative at equal magnitude.
constexpr std::uint64_t zigzag(std::int64_t x) noexcept {
  return x > 0 ? 2 * static_cast<std::uint64_t>(x) - 1 : 2 * static_cast<std::uint64_t>(-x);
}

template <class S>
concept MetricSpace = requires(const S& s, const typename S::element_type& v) {
  { s.identity() } -> std::convertible_to<typename S::element_type>;
  { s.word_length(v) } -> std::convertible_to<std::int64_t>;
  { s.hash(v) } -> std::convertible_to<std::uint64_t>;
  { s.canonical_less(v, v) } -> std::convertible_to<bool>;
  { s.name() } -> std::convertible_to<std::string>;
  { s.format(v) } -> std::convertible_to<std::string>;
  s.for_each_step(v, [](const typename S::element_type&) {});
};

template <class G>
concept Group = MetricSpace<G> && requires(const G& g, const typename G::element_type& a) {
  { g.mul(a, a) } -> std::same_as<typename G::element_type>;
  { g.inv(a) } -> std::same_as<typename G::element_type>;
  { g.generators() } -> std::convertible_to<std::span<const typename G::element_type>>;
  { g.parse(std::string_view{}) } -> std::same_as<typename G::element_type>;
};

template <class S>
using element_t = typename S::element_type;

// Hash functor for standard containers keyed by elements of a space.
template <class S>
struct SpaceHash {
  const S* space;
  std::size_t operator()(const element_t<S>& e) const { return static_cast<std::size_t>(space->hash(e)); }
};

template <class S>
using ElementSet = std::unordered_set<element_t<S>, SpaceHash<S>>;

// Shared group plumbing: Cayley-graph steps and the canonical order
// (word length first, then the representation order of the derived group).
template <class Derived, class Element>
class GroupBase {
 public:
  using element_type = Element;

  template <class F>
  void for_each_step(const Element& v, F&& f) const {
    const auto& self = static_cast<const Derived&>(*this);
    for (const auto& s : self.generators()) f(self.mul(v, s));
  }

  bool canonical_less(const Element& a, const Element& b) const {
    const auto& self = static_cast<const Derived&>(*this);
    const auto la = self.word_length(a), lb = self.word_length(b);
    if (la != lb) return la < lb;
    return self.representation_less(a, b);
  }
};

// ---------------------------------------------------------------------------
// Z^d with standard generators.

inline constexpr int kMaxLatticeDim = 4;

struct LatticePoint {
  std::array<std::int32_t, kMaxLatticeDim> x{};
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

class Lattice : public GroupBase<Lattice, LatticePoint> {
 public:
  explicit Lattice(int d) : d_(d) {
    if (d < 1 || d > kMaxLatticeDim) throw UsageError("zd dimension must be in 1.." + std::to_string(kMaxLatticeDim));
    for (int i = 0; i < d; ++i) {
      LatticePoint p, q;
      p.x[i] = 1;
      q.x[i] = -1;
      gens_.push_back(p);
      gens_.push_back(q);
    }
  }

  int dim() const noexcept { return d_; }
  LatticePoint identity() const noexcept { return {}; }
  std::span<const LatticePoint> generators() const noexcept { return gens_; }

  LatticePoint point(std::initializer_list<int> coords) const {
    if (static_cast<int>(coords.size()) != d_) throw UsageError("coordinate count does not match dimension");
    LatticePoint p;
    int i = 0;
    for (int c : coords) p.x[i++] = c;
    return p;
  }

  LatticePoint mul(const LatticePoint& a, const LatticePoint& b) const noexcept {
    LatticePoint r;
    for (int i = 0; i < kMaxLatticeDim; ++i) r.x[i] = a.x[i] + b.x[i];
    return r;
  }
  LatticePoint inv(const LatticePoint& a) const noexcept {
    LatticePoint r;
    for (int i = 0; i < kMaxLatticeDim; ++i) r.x[i] = -a.x[i];
    return r;
  }
  std::int64_t word_length(const LatticePoint& a) const noexcept {
    std::int64_t n = 0;
    for (int i = 0; i < d_; ++i) n += std::abs(static_cast<std::int64_t>(a.x[i]));
    return n;
  }
  std::uint64_t hash(const LatticePoint& a) const noexcept {
    std::uint64_t h = 0x51ED270B27A1C3F5ull;
    for (int i = 0; i < d_; ++i) h = h * 0x9E3779B97F4A7C15ull + zigzag(a.x[i]);
    return splitmix64(h);
  }
  bool representation_less(const LatticePoint& a, const LatticePoint& b) const noexcept {
    for (int i = 0; i < d_; ++i) {
      if (a.x[i] != b.x[i]) return zigzag(a.x[i]) < zigzag(b.x[i]);
    }
    return false;
  }

  std::string name() const { return "zd:" + std::to_string(d_); }

  std::string format(const LatticePoint& a) const {
    std::string s;
    for (int i = 0; i < d_; ++i) {
      if (i) s += ',';
      s += std::to_string(a.x[i]);
    }
    return s;
  }

  LatticePoint parse(std::string_view text) const {
    LatticePoint p;
    int i = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (i >= d_) throw UsageError("too many coordinates in lattice literal '" + std::string(text) + "'");
      try {
        std::size_t used = 0;
        const std::string t(tok);
        p.x[i++] = std::stoi(t, &used);
        if (used != t.size()) throw UsageError("bad lattice coordinate");
      } catch (const std::logic_error&) {
        throw UsageError("bad lattice literal '" + std::string(text) + "'");
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (i != d_) throw UsageError("lattice literal '" + std::string(text) + "' needs " + std::to_string(d_) + " coordinates");
    return p;
  }

 private:
  int d_;
  std::vector<LatticePoint> gens_;
};

// ---------------------------------------------------------------------------
// Free group F_k; elements are freely reduced words over letters +-1..+-k.

struct FreeWord {
  std::vector<std::int8_t> letters;
  friend bool operator==(const FreeWord&, const FreeWord&) = default;
};

class FreeGroup : public GroupBase<FreeGroup, FreeWord> {
 public:
  explicit FreeGroup(int k) : k_(k) {
    if (k < 1 || k > 26) throw UsageError("free group rank must be in 1..26");
    for (int i = 1; i <= k; ++i) {
      gens_.push_back(FreeWord{{static_cast<std::int8_t>(i)}});
      gens_.push_back(FreeWord{{static_cast<std::int8_t>(-i)}});
    }
  }

  int rank() const noexcept { return k_; }
  FreeWord identity() const { return {}; }
  std::span<const FreeWord> generators() const noexcept { return gens_; }

  FreeWord mul(const FreeWord& a, const FreeWord& b) const {
    std::size_t cancel = 0;
    const std::size_t na = a.letters.size(), nb = b.letters.size();
    while (cancel < na && cancel < nb && a.letters[na - 1 - cancel] == -b.letters[cancel]) ++cancel;
    FreeWord r;
    r.letters.reserve(na + nb - 2 * cancel);
    r.letters.insert(r.letters.end(), a.letters.begin(), a.letters.end() - static_cast<std::ptrdiff_t>(cancel));
    r.letters.insert(r.letters.end(), b.letters.begin() + static_cast<std::ptrdiff_t>(cancel), b.letters.end());
    return r;
  }
  FreeWord inv(const FreeWord& a) const {
    FreeWord r;
    r.letters.reserve(a.letters.size());
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) r.letters.push_back(static_cast<std::int8_t>(-*it));
    return r;
  }
  std::int64_t word_length(const FreeWord& a) const noexcept { return static_cast<std::int64_t>(a.letters.size()); }
  std::uint64_t hash(const FreeWord& a) const noexcept {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (auto c : a.letters) h = (h ^ static_cast<std::uint8_t>(c)) * 0x100000001B3ull;
    return splitmix64(h ^ (a.letters.size() << 56));
  }
  bool representation_less(const FreeWord& a, const FreeWord& b) const noexcept {
    return std::lexicographical_compare(a.letters.begin(), a.letters.end(), b.letters.begin(), b.letters.end(),
                                        [](std::int8_t x, std::int8_t y) { return zigzag(x) < zigzag(y); });
  }

  std::string name() const { return "free:" + std::to_string(k_); }

  // Lowercase letters are generators, capitals their inverses; "e" is the identity.
  std::string format(const FreeWord& a) const {
    if (a.letters.empty()) return "e";
    std::string s;
    for (auto c : a.letters) s += c > 0 ? static_cast<char>('a' + c - 1) : static_cast<char>('A' - c - 1);
    return s;
  }

  FreeWord parse(std::string_view text) const {
    FreeWord w;
    if (text == "e") return w;
    for (char ch : text) {
      std::int8_t letter;
      if (ch >= 'a' && ch < 'a' + k_) {
        letter = static_cast<std::int8_t>(ch - 'a' + 1);
      } else if (ch >= 'A' && ch < 'A' + k_) {
        letter = static_cast<std::int8_t>(-(ch - 'A' + 1));
      } else {
        throw UsageError("bad letter '" + std::string(1, ch) + "' in free-group word '" + std::string(text) + "'");
      }
      if (!w.letters.empty() && w.letters.back() == -letter) {
        w.letters.pop_back();
      } else {
        w.letters.push_back(letter);
      }
    }
    return w;
  }

 private:
  int k_;
  std::vector<FreeWord> gens_;
};

// ---------------------------------------------------------------------------
// Discrete Heisenberg group H_3(Z) with generators x, y. Elements are normal
// forms x^a y^b z^c with z = [x, y] = x y x^-1 y^-1 central, so
// (a,b,c)(a',b',c') = (a+a', b+b', c+c' - a'b).

struct HeisenbergElement {
  std::array<std::int64_t, 3> abc{};
  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

class Heisenberg : public GroupBase<Heisenberg, HeisenbergElement> {
 public:
  explicit Heisenberg(std::size_t cache_cap = kDefaultElementCap) : cache_(shared_cache(cache_cap)) {
    gens_ = {HeisenbergElement{{1, 0, 0}}, HeisenbergElement{{-1, 0, 0}}, HeisenbergElement{{0, 1, 0}},
             HeisenbergElement{{0, -1, 0}}};
  }

  HeisenbergElement identity() const noexcept { return {}; }
  std::span<const HeisenbergElement> generators() const noexcept { return gens_; }

  static HeisenbergElement x() { return {{1, 0, 0}}; }
  static HeisenbergElement y() { return {{0, 1, 0}}; }

  HeisenbergElement mul(const HeisenbergElement& g, const HeisenbergElement& h) const noexcept {
    return {{g.abc[0] + h.abc[0], g.abc[1] + h.abc[1], g.abc[2] + h.abc[2] - h.abc[0] * g.abc[1]}};
  }
  HeisenbergElement inv(const HeisenbergElement& g) const noexcept {
    return {{-g.abc[0], -g.abc[1], -g.abc[2] - g.abc[0] * g.abc[1]}};
  }
  std::uint64_t hash(const HeisenbergElement& g) const noexcept { return hash_element(g); }

  // Memoized BFS distance; grows the shared ball table on demand.
  std::int64_t word_length(const HeisenbergElement& g) const { return cache_->distance(g); }

  // Radius up to which the shared table is complete.
  std::int64_t cached_radius() const { return cache_->radius(); }

  bool representation_less(const HeisenbergElement& g, const HeisenbergElement& h) const noexcept {
    for (int i = 0; i < 3; ++i) {
      if (g.abc[i] != h.abc[i]) return zigzag(g.abc[i]) < zigzag(h.abc[i]);
    }
    return false;
  }

  std::string name() const { return "heis"; }

  std::string format(const HeisenbergElement& g) const {
    return "(" + std::to_string(g.abc[0]) + "," + std::to_string(g.abc[1]) + "," + std::to_string(g.abc[2]) + ")";
  }

  // Accepts "(a,b,c)" normal-form triples or words over x, y, X, Y.
  HeisenbergElement parse(std::string_view text) const {
    if (!text.empty() && text.front() == '(') {
      if (text.back() != ')') throw UsageError("bad Heisenberg literal '" + std::string(text) + "'");
      HeisenbergElement g;
      std::istringstream in(std::string(text.substr(1, text.size() - 2)));
      char c1 = 0, c2 = 0;
      if (!(in >> g.abc[0] >> c1 >> g.abc[1] >> c2 >> g.abc[2]) || c1 != ',' || c2 != ',') {
        throw UsageError("bad Heisenberg literal '" + std::string(text) + "'");
      }
      return g;
    }
    HeisenbergElement g;
    if (text == "e") return g;
    for (char ch : text) {
      switch (ch) {
        case 'x': g = mul(g, gens_[0]); break;
        case 'X': g = mul(g, gens_[1]); break;
        case 'y': g = mul(g, gens_[2]); break;
        case 'Y': g = mul(g, gens_[3]); break;
        default: throw UsageError("bad letter in Heisenberg word '" + std::string(text) + "'");
      }
    }
    return g;
  }

 private:
  static std::uint64_t hash_element(const HeisenbergElement& g) noexcept {
    return mix(mix(splitmix64(zigzag(g.abc[0])), zigzag(g.abc[1])), zigzag(g.abc[2]));
  }

  class DistanceCache {
   public:
    explicit DistanceCache(std::size_t cap) : cap_(cap), dist_(64, Hasher{}) {
      dist_.emplace(HeisenbergElement{}, 0);
      frontier_.push_back(HeisenbergElement{});
    }

    std::int64_t distance(const HeisenbergElement& g) {
      {
        std::shared_lock lock(mutex_);
        if (auto it = dist_.find(g); it != dist_.end()) return it->second;
      }
      std::unique_lock lock(mutex_);
      for (;;) {
        if (auto it = dist_.find(g); it != dist_.end()) return it->second;
        expand();
      }
    }

    std::int64_t radius() const {
      std::shared_lock lock(mutex_);
      return radius_;
    }

   private:
    struct Hasher {
      std::size_t operator()(const HeisenbergElement& g) const noexcept { return hash_element(g); }
    };

    void expand() {
      if (dist_.size() >= cap_) {
        std::vector<std::size_t> spheres(sphere_sizes_.begin(), sphere_sizes_.end());
        throw CapExceeded("Heisenberg distance table exceeded element cap at radius " + std::to_string(radius_),
                          spheres);
      }
      static const std::array<HeisenbergElement, 4> gens = {
          HeisenbergElement{{1, 0, 0}}, HeisenbergElement{{-1, 0, 0}}, HeisenbergElement{{0, 1, 0}},
          HeisenbergElement{{0, -1, 0}}};
      std::vector<HeisenbergElement> next;
      const std::int64_t r = radius_ + 1;
      for (const auto& v : frontier_) {
        for (const auto& s : gens) {
          HeisenbergElement w{{v.abc[0] + s.abc[0], v.abc[1] + s.abc[1], v.abc[2] + s.abc[2] - s.abc[0] * v.abc[1]}};
          if (dist_.emplace(w, r).second) next.push_back(w);
        }
      }
      frontier_ = std::move(next);
      sphere_sizes_.push_back(frontier_.size());
      radius_ = r;
    }

    std::size_t cap_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<HeisenbergElement, std::int64_t, Hasher> dist_;
    std::vector<HeisenbergElement> frontier_;
    std::vector<std::size_t> sphere_sizes_{1};
    std::int64_t radius_ = 0;
  };

  // One table per process (per cap value); word lengths do not depend on the instance.
  static std::shared_ptr<DistanceCache> shared_cache(std::size_t cap) {
    static std::mutex m;
    static std::map<std::size_t, std::shared_ptr<DistanceCache>> caches;
    std::lock_guard lock(m);
    auto& c = caches[cap];
    if (!c) c = std::make_shared<DistanceCache>(cap);
    return c;
  }

  std::shared_ptr<DistanceCache> cache_;
  std::vector<HeisenbergElement> gens_;
};

// ---------------------------------------------------------------------------
// Lamplighter Z_2 wr Z with generators {t (toggle), s, s^-1 (shift)}.
// Element (f, m): finite set f of lit lamps and head position m;
// (f, m)(f', m') = (f xor (f' + m), m + m').

struct LampState {
  std::vector<std::int32_t> lamps;  // sorted, distinct
  std::int32_t head = 0;
  friend bool operator==(const LampState&, const LampState&) = default;
};

class Lamplighter : public GroupBase<Lamplighter, LampState> {
 public:
  Lamplighter() {
    gens_ = {LampState{{0}, 0}, LampState{{}, 1}, LampState{{}, -1}};
  }

  LampState identity() const { return {}; }
  std::span<const LampState> generators() const noexcept { return gens_; }

  LampState mul(const LampState& a, const LampState& b) const {
    LampState r;
    r.head = a.head + b.head;
    std::vector<std::int32_t> shifted(b.lamps);
    for (auto& p : shifted) p += a.head;
    std::set_symmetric_difference(a.lamps.begin(), a.lamps.end(), shifted.begin(), shifted.end(),
                                  std::back_inserter(r.lamps));
    return r;
  }
  LampState inv(const LampState& a) const {
    LampState r;
    r.head = -a.head;
    r.lamps = a.lamps;
    for (auto& p : r.lamps) p -= a.head;
    return r;
  }

  // Toggles plus the shortest head walk from 0 that visits every lit lamp and ends at the head.
  std::int64_t word_length(const LampState& a) const noexcept {
    const std::int64_t m = a.head;
    std::int64_t lo = 0, hi = 0;
    if (!a.lamps.empty()) {
      lo = std::min<std::int64_t>(0, a.lamps.front());
      hi = std::max<std::int64_t>(0, a.lamps.back());
    }
    const std::int64_t left_first = -lo + (hi - lo) + std::abs(m - hi);
    const std::int64_t right_first = hi + (hi - lo) + std::abs(m - lo);
    return static_cast<std::int64_t>(a.lamps.size()) + std::min(left_first, right_first);
  }

  std::uint64_t hash(const LampState& a) const noexcept {
    std::uint64_t h = splitmix64(zigzag(a.head) ^ 0xA5A5A5A5ull);
    for (auto p : a.lamps) h = mix(h, zigzag(p));
    return h;
  }

  bool representation_less(const LampState& a, const LampState& b) const noexcept {
    if (a.head != b.head) return zigzag(a.head) < zigzag(b.head);
    return std::lexicographical_compare(a.lamps.begin(), a.lamps.end(), b.lamps.begin(), b.lamps.end(),
                                        [](std::int32_t x, std::int32_t y) { return zigzag(x) < zigzag(y); });
  }

  std::string name() const { return "lamp"; }

  std::string format(const LampState& a) const {
    std::string s = "[";
    for (std::size_t i = 0; i < a.lamps.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(a.lamps[i]);
    }
    return s + "]@" + std::to_string(a.head);
  }

  // Accepts "[l1,l2,...]@m" or words over t, s, S.
  LampState parse(std::string_view text) const {
    if (!text.empty() && text.front() == '[') {
      const auto close = text.find("]@");
      if (close == std::string_view::npos) throw UsageError("bad lamplighter literal '" + std::string(text) + "'");
      LampState r;
      std::string body(text.substr(1, close - 1));
      std::replace(body.begin(), body.end(), ',', ' ');
      std::istringstream in(body);
      std::int32_t p;
      while (in >> p) r.lamps.push_back(p);
      std::sort(r.lamps.begin(), r.lamps.end());
      if (std::adjacent_find(r.lamps.begin(), r.lamps.end()) != r.lamps.end()) {
        throw UsageError("repeated lamp in '" + std::string(text) + "'");
      }
      try {
        r.head = std::stoi(std::string(text.substr(close + 2)));
      } catch (const std::logic_error&) {
        throw UsageError("bad lamplighter head in '" + std::string(text) + "'");
      }
      return r;
    }
    LampState g;
    if (text == "e") return g;
    for (char ch : text) {
      switch (ch) {
        case 't': g = mul(g, gens_[0]); break;
        case 's': g = mul(g, gens_[1]); break;
        case 'S': g = mul(g, gens_[2]); break;
        default: throw UsageError("bad letter in lamplighter word '" + std::string(text) + "'");
      }
    }
    return g;
  }

 private:
  std::vector<LampState> gens_;
};

// ---------------------------------------------------------------------------
// Canopy tree truncated at path length D: path x_0 .. x_D, and x_i is the root
// of a binary tree of depth i. Vertices are addressed implicitly as
// (path index i, tree depth j <= i, branch bits), so D may be large.
// No group law; graph mode only.

struct CanopyVertex {
  std::uint32_t path = 0;
  std::uint32_t depth = 0;
  std::uint64_t bits = 0;
  friend bool operator==(const CanopyVertex&, const CanopyVertex&) = default;
};

class CanopyTree {
 public:
  using element_type = CanopyVertex;

  explicit CanopyTree(std::uint32_t depth) : depth_(depth) {
    if (depth < 1 || depth > 62) throw UsageError("canopy depth must be in 1..62");
  }

  std::uint32_t depth() const noexcept { return depth_; }
  CanopyVertex identity() const noexcept { return {}; }
  static CanopyVertex path_vertex(std::uint32_t i) noexcept { return {i, 0, 0}; }

  std::int64_t word_length(const CanopyVertex& v) const noexcept { return std::int64_t{v.path} + v.depth; }

  std::uint64_t hash(const CanopyVertex& v) const noexcept {
    return mix(splitmix64((std::uint64_t{v.path} << 32) | v.depth), v.bits);
  }

  template <class F>
  void for_each_step(const CanopyVertex& v, F&& f) const {
    if (v.depth == 0) {
      if (v.path > 0) f(CanopyVertex{v.path - 1, 0, 0});
      if (v.path < depth_) f(CanopyVertex{v.path + 1, 0, 0});
    } else {
      f(CanopyVertex{v.path, v.depth - 1, v.bits >> 1});
    }
    if (v.depth < v.path) {
      f(CanopyVertex{v.path, v.depth + 1, v.bits << 1});
      f(CanopyVertex{v.path, v.depth + 1, (v.bits << 1) | 1});
    }
  }

  std::size_t max_degree() const noexcept { return depth_ >= 2 ? 4 : 2; }

  bool canonical_less(const CanopyVertex& a, const CanopyVertex& b) const noexcept {
    const auto la = word_length(a), lb = word_length(b);
    if (la != lb) return la < lb;
    return std::tie(a.path, a.depth, a.bits) < std::tie(b.path, b.depth, b.bits);
  }

  std::string name() const { return "canopy:" + std::to_string(depth_); }

  std::string format(const CanopyVertex& v) const {
    return "x" + std::to_string(v.path) + "/" + std::to_string(v.depth) + ":" + std::to_string(v.bits);
  }

 private:
  std::uint32_t depth_;
};

// ---------------------------------------------------------------------------
// Undirected graph from an edge list. The root is the smallest vertex id.

struct GraphVertex {
  std::uint32_t index = 0;
  friend bool operator==(const GraphVertex&, const GraphVertex&) = default;
};

class ExplicitGraph {
 public:
  using element_type = GraphVertex;

  ExplicitGraph(std::vector<std::pair<std::int64_t, std::int64_t>> edges, std::string label = "graph")
      : label_(std::move(label)) {
    if (edges.empty()) throw UsageError("edge list is empty");
    for (const auto& [u, v] : edges) {
      ids_.push_back(u);
      ids_.push_back(v);
    }
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    adj_.resize(ids_.size());
    for (const auto& [u, v] : edges) {
      if (u == v) continue;
      const auto a = index_of(u), b = index_of(v);
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
    for (auto& nbrs : adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      max_degree_ = std::max(max_degree_, nbrs.size());
    }
    dist_.assign(ids_.size(), -1);
    std::vector<std::uint32_t> queue{0};
    dist_[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto v = queue[head];
      for (auto w : adj_[v]) {
        if (dist_[w] < 0) {
          dist_[w] = dist_[v] + 1;
          queue.push_back(w);
        }
      }
    }
  }

  static ExplicitGraph from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open edge list '" + path + "'");
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#') continue;
      std::istringstream ls(line);
      std::int64_t u, v;
      if (!(ls >> u >> v)) throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'u v'");
      edges.emplace_back(u, v);
    }
    return ExplicitGraph(std::move(edges), "graph:" + path);
  }

  std::size_t vertex_count() const noexcept { return ids_.size(); }
  std::size_t max_degree() const noexcept { return max_degree_; }
  std::int64_t id(GraphVertex v) const { return ids_.at(v.index); }

  GraphVertex vertex(std::int64_t id) const { return {index_of(id)}; }

  GraphVertex identity() const noexcept { return {0}; }

  // Vertices unreachable from the root report -1.
  std::int64_t word_length(GraphVertex v) const { return dist_.at(v.index); }
  std::uint64_t hash(GraphVertex v) const noexcept { return splitmix64(v.index); }

  template <class F>
  void for_each_step(GraphVertex v, F&& f) const {
    for (auto w : adj_[v.index]) f(GraphVertex{w});
  }

  bool canonical_less(GraphVertex a, GraphVertex b) const {
    const auto la = word_length(a), lb = word_length(b);
    if (la != lb) return la < lb;
    return a.index < b.index;
  }

  std::string name() const { return label_; }
  std::string format(GraphVertex v) const { return std::to_string(id(v)); }

 private:
  std::uint32_t index_of(std::int64_t id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) throw UsageError("unknown vertex id " + std::to_string(id));
    return static_cast<std::uint32_t>(it - ids_.begin());
  }

  std::string label_;
  std::vector<std::int64_t> ids_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::int64_t> dist_;
  std::size_t max_degree_ = 0;
};

static_assert(Group<Lattice>);
static_assert(Group<FreeGroup>);
static_assert(Group<Heisenberg>);
static_assert(Group<Lamplighter>);
static_assert(MetricSpace<CanopyTree>);
static_assert(MetricSpace<ExplicitGraph>);

// ---------------------------------------------------------------------------
// Balls, spheres and dyadic annuli.

template <class E>
struct Ball {
  std::int64_t radius = 0;
  std::vector<E> elements;               // by word length, then canonical order
  std::vector<std::size_t> sphere_sizes;  // sphere_sizes[m] = |S(m)|

  std::size_t size() const noexcept { return elements.size(); }

  // Elements of the sphere of radius m.
  std::span<const E> sphere(std::int64_t m) const {
    std::size_t start = 0;
    for (std::int64_t i = 0; i < m; ++i) start += sphere_sizes[static_cast<std::size_t>(i)];
    return {elements.data() + start, sphere_sizes[static_cast<std::size_t>(m)]};
  }
};

// Exact BFS enumeration of B(n) in the Cayley graph (or graph) of `space`.
template <MetricSpace S>
Ball<element_t<S>> ball(const S& space, std::int64_t n, std::size_t cap = kDefaultElementCap) {
  if (n < 0) throw UsageError("ball radius must be non-negative");
  using E = element_t<S>;
  Ball<E> b;
  b.radius = n;
  ElementSet<S> seen(64, SpaceHash<S>{&space});
  std::vector<E> sphere{space.identity()};
  seen.insert(space.identity());
  b.elements.push_back(space.identity());
  b.sphere_sizes.push_back(1);
  for (std::int64_t r = 1; r <= n; ++r) {
    std::vector<E> next;
    for (const auto& v : sphere) {
      space.for_each_step(v, [&](const E& w) {
        if (seen.insert(w).second) next.push_back(w);
      });
      if (seen.size() > cap) {
        b.sphere_sizes.push_back(next.size());
        throw CapExceeded("ball of radius " + std::to_string(n) + " in " + space.name() + " exceeds element cap " +
                              std::to_string(cap),
                          b.sphere_sizes);
      }
    }
    std::sort(next.begin(), next.end(), [&](const E& a, const E& c) { return space.canonical_less(a, c); });
    b.sphere_sizes.push_back(next.size());
    b.elements.insert(b.elements.end(), next.begin(), next.end());
    sphere = std::move(next);
  }
  return b;
}

// A_0 = B(M), A_i = B(M 2^i) \ B(M 2^(i-1)) for 1 <= i <= i_max.
template <MetricSpace S>
std::vector<std::vector<element_t<S>>> annuli(const S& space, std::int64_t M, int i_max,
                                              std::size_t cap = kDefaultElementCap) {
  if (M < 1) throw UsageError("annuli need M >= 1");
  if (i_max < 0 || i_max > 40) throw UsageError("annuli need 0 <= i_max <= 40");
  const auto big = ball(space, M << i_max, cap);
  std::vector<std::vector<element_t<S>>> out(static_cast<std::size_t>(i_max) + 1);
  std::size_t pos = 0;
  for (std::int64_t m = 0; m <= big.radius; ++m) {
    int i = 0;
    while (m > (M << i)) ++i;
    for (std::size_t j = 0; j < big.sphere_sizes[static_cast<std::size_t>(m)]; ++j) out[i].push_back(big.elements[pos++]);
  }
  return out;
}

// Index of the dyadic annulus containing word length m.
constexpr int annulus_index(std::int64_t m, std::int64_t M) noexcept {
  int i = 0;
  while (m > (M << i)) ++i;
  return i;
}

// ---------------------------------------------------------------------------
// Group specification strings: zd:<d>, free:<k>, heis, lamp, canopy:<D>,
// graph:<path>.

using AnySpace = std::variant<Lattice, FreeGroup, Heisenberg, Lamplighter, CanopyTree, ExplicitGraph>;

inline AnySpace parse_space(std::string_view spec) {
  auto arg_int = [&](std::string_view prefix) {
    const std::string tail(spec.substr(prefix.size()));
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tail, &used);
    } catch (const std::logic_error&) {
      throw UsageError("bad integer in group spec '" + std::string(spec) + "'");
    }
    if (used != tail.size()) throw UsageError("bad integer in group spec '" + std::string(spec) + "'");
    return v;
  };
  if (spec.starts_with("zd:")) return Lattice(arg_int("zd:"));
  if (spec.starts_with("free:")) return FreeGroup(arg_int("free:"));
  if (spec == "heis") return Heisenberg();
  if (spec == "lamp") return Lamplighter();
  if (spec.starts_with("canopy:")) {
    const int d = arg_int("canopy:");
    if (d < 1) throw UsageError("canopy depth must be positive");
    return CanopyTree(static_cast<std::uint32_t>(d));
  }
  if (spec.starts_with("graph:")) return ExplicitGraph::from_file(std::string(spec.substr(6)));
  throw UsageError("unknown group spec '" + std::string(spec) + "' (expected zd:<d>, free:<k>, heis, lamp, canopy:<D>, graph:<path>)");
}

}  // namespace pdim
