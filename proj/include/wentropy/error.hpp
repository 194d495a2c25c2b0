#pragma once

#include <stdexcept>
#include <string>

namespace wentropy {

// Malformed space strings, scenario files and command lines.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine could not produce a trustworthy result
// (singular solve, non-convergence, loss of positivity).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wentropy
