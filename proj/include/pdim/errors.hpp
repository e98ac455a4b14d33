#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdim {

// Violated precondition or malformed input.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration outgrew its configured element/node cap. Carries whatever
// was completed before the cap hit (sphere sizes for balls, finished depths
// for walk enumeration).
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::vector<std::size_t> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const std::vector<std::size_t>& partial() const noexcept { return partial_; }

 private:
  std::vector<std::size_t> partial_;
};

}  // namespace pdim
