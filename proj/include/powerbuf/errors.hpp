#pragma once

#include <stdexcept>
#include <string>

namespace powerbuf {

// Base of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter lies outside the domain of the model (nonpositive rate, p > 1, ...).
class domain_error : public error {
 public:
  using error::error;
};

// An operation was called on inputs that violate its stated precondition.
class precondition_error : public error {
 public:
  using error::error;
};

// The optimum does not exist for the given parameters (negative radicand).
class infeasible_error : public error {
 public:
  using error::error;
};

// The operation is not defined for this kind of input (e.g. sampling a
// moments-only size law).
class unsupported_error : public error {
 public:
  using error::error;
};

// Bracketing root search found no sign change.
class no_root_error : public error {
 public:
  using error::error;
};

// Malformed configuration file or command line.
class config_error : public error {
 public:
  using error::error;
};

namespace detail {

inline void require_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw domain_error(std::string(what) + " must be positive, got " + std::to_string(value));
  }
}

}  // namespace detail
}  // namespace powerbuf
