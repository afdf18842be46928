#pragma once

#include <stdexcept>
#include <string>

namespace sharpcheck {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension mismatch: " + what) {}
};

/// A precondition on the input domain was violated (point not in set, bad eps, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// Floating point breakdown (singular basis, cap exceeded, no convergence).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Malformed user input: expressions, problem documents, CLI flags.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

inline void require_dim(long got, long want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + " has dimension " + std::to_string(got) + ", expected " +
                         std::to_string(want));
  }
}

}  // namespace sharpcheck
