#pragma once

#include <stdexcept>
#include <string>

namespace weakkam {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidRescale : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class WindowExceeded : public Error {
 public:
  using Error::Error;
};

// An iterative procedure stopped before reaching its tolerance. Carries the
// residual of the last iterate so callers can report how close it got.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}

  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace weakkam
