#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pottsmc {

// Enumerated state space larger than the configured cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::size_t size, std::size_t cap)
      : std::runtime_error(what + ": state space " + std::to_string(size) +
                           " exceeds cap " + std::to_string(cap)),
        size_(size),
        cap_(cap) {}

  std::size_t size() const noexcept { return size_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t size_;
  std::size_t cap_;
};

// A matrix expected to be a reversible stochastic kernel is not one.
class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pottsmc
