#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace pdim {

// Disjoint sets with union by size and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool connected(std::size_t a, std::size_t b) noexcept { return find(a) == find(b); }
  std::size_t component_size(std::size_t x) noexcept { return size_[find(x)]; }
  std::size_t element_count() const noexcept { return parent_.size(); }

  // Sizes of all components, one entry per root.
  std::vector<std::size_t> component_sizes() {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      if (find(i) == i) out.push_back(size_[i]);
    }
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace pdim
