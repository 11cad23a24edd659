#pragma once

#include <stdexcept>
#include <string>

namespace fsiga {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction or call parameters (degree, element counts, Δt, g, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside a parameter domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Signal-processing and fitting failures (too few zero crossings, too few rows).
class DiagnosticError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration errors; the message names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace fsiga
