#pragma once

#include <stdexcept>
#include <string>

namespace frflow {

// Bad arguments, bad config files, inconsistent snapshots. CLI maps this to exit 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Blow-up detected at runtime: NaN/Inf in a state field, CFL violation. Exit 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace frflow
