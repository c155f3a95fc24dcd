#pragma once

#include <stdexcept>
#include <string>

namespace patdist {

// Failure categories map onto CLI exit codes.
enum class ErrorKind {
  kInput = 2,     // malformed pattern, model, file or argument
  kMethod = 3,    // a numerical method gave up (spectral, convergence, MT)
  kInternal = 4,  // broken invariant
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what)
      : Error(ErrorKind::kInput, what) {}
};

// Pattern syntax error carrying the 0-based offset into the pattern text.
class SyntaxError : public InputError {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class MethodError : public Error {
 public:
  explicit MethodError(const std::string& what)
      : Error(ErrorKind::kMethod, what) {}
};

class SpectralError : public MethodError {
 public:
  explicit SpectralError(const std::string& what) : MethodError(what) {}
};

class ConvergenceError : public MethodError {
 public:
  explicit ConvergenceError(const std::string& what) : MethodError(what) {}
};

class ReconstructionError : public MethodError {
 public:
  explicit ReconstructionError(const std::string& what) : MethodError(what) {}
};

// Raised before an allocation that would exceed the configured memory budget
// (the "MT" failure mode of the series computation).
class MemoryBudgetError : public MethodError {
 public:
  explicit MemoryBudgetError(const std::string& what) : MethodError(what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorKind::kInternal, what) {}
};

}  // namespace patdist
