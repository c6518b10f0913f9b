#pragma once

#include <stdexcept>
#include <string>

namespace infoplane {

// Malformed or inconsistent caller input (bad files, unknown axes, violated
// preconditions on shapes or labels).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical degeneracy or an internal-consistency failure (vanishing
// denominators, non-PSD matrices, non-finite losses).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace infoplane
