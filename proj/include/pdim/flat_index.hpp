#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace pdim {

// Insertion-ordered element arena with an open-addressing index. Built for the
// exploration hot loop: clear() keeps capacity so one instance serves many
// trials. Hashes come from the caller (group contexts supply them).
template <class Element>
class FlatIndex {
 public:
  static constexpr std::uint32_t npos = 0xFFFFFFFFu;

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  const Element& operator[](std::uint32_t i) const noexcept { return elements_[i]; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  std::uint64_t hash_at(std::uint32_t i) const noexcept { return hashes_[i]; }

  void clear() noexcept {
    for (std::uint32_t pos : positions_) slots_[pos] = npos;
    elements_.clear();
    hashes_.clear();
    positions_.clear();
  }

  std::uint32_t find(const Element& e, std::uint64_t h) const noexcept {
    if (slots_.empty()) return npos;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t pos = h & mask;; pos = (pos + 1) & mask) {
      const std::uint32_t idx = slots_[pos];
      if (idx == npos) return npos;
      if (hashes_[idx] == h && elements_[idx] == e) return idx;
    }
  }

  // Returns (index, inserted).
  std::pair<std::uint32_t, bool> insert(const Element& e, std::uint64_t h) {
    if ((elements_.size() + 1) * 2 > slots_.size()) grow();
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t pos = h & mask;; pos = (pos + 1) & mask) {
      const std::uint32_t idx = slots_[pos];
      if (idx == npos) {
        const auto fresh = static_cast<std::uint32_t>(elements_.size());
        slots_[pos] = fresh;
        elements_.push_back(e);
        hashes_.push_back(h);
        positions_.push_back(static_cast<std::uint32_t>(pos));
        return {fresh, true};
      }
      if (hashes_[idx] == h && elements_[idx] == e) return {idx, false};
    }
  }

 private:
  void grow() {
    const std::size_t cap = slots_.empty() ? 64 : slots_.size() * 2;
    slots_.assign(cap, npos);
    const std::size_t mask = cap - 1;
    for (std::uint32_t i = 0; i < elements_.size(); ++i) {
      std::size_t pos = hashes_[i] & mask;
      while (slots_[pos] != npos) pos = (pos + 1) & mask;
      slots_[pos] = i;
      positions_[i] = static_cast<std::uint32_t>(pos);
    }
  }

  std::vector<Element> elements_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> positions_;
  std::vector<std::uint32_t> slots_;
};

}  // namespace pdim
