#pragma once

#include <stdexcept>
#include <string>

namespace scengen {

// Error categories map onto CLI exit codes:
//   ValidationError -> 2, FitError -> 3, IoError -> 4.

// Bad inputs: parameter domains, malformed data, invariant violations.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Estimation failures: non-convergence, infeasible moments, sparse tails.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem and format failures.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scengen
