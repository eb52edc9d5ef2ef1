#pragma once

#include <stdexcept>
#include <string>

namespace gmimo {

// Base for every error raised by the toolkit. `module()` names the component
// that detected the problem so front ends can report provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Input outside an operation's domain (nonpositive frequency, coincident points, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Shape mismatch or a structural precondition (square, Hermitian) not met.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An algorithm failed to converge or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmimo
