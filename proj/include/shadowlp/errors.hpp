#pragma once

#include <stdexcept>
#include <string>

namespace shadowlp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// linalg
class SingularError : public Error {
 public:
  using Error::Error;
};

// randgen
class NormViolation : public Error {
 public:
  using Error::Error;
};

// pivot engine
class NumericalStall : public Error {
 public:
  using Error::Error;
};
class NegativeStep : public Error {
 public:
  using Error::Error;
};
class PivotLimitExceeded : public Error {
 public:
  using Error::Error;
};
class CycleDetected : public Error {
 public:
  using Error::Error;
};

// three-phase solver
class DimensionTooSmall : public Error {
 public:
  using Error::Error;
};
class RestartLimitExceeded : public Error {
 public:
  using Error::Error;
};
class CertificateInvalid : public Error {
 public:
  using Error::Error;
};

// oracle
class TooLarge : public Error {
 public:
  using Error::Error;
};
class DegenerateShadow : public Error {
 public:
  using Error::Error;
};
class Unreachable : public Error {
 public:
  using Error::Error;
};

// analysis
class ZeroVertex : public Error {
 public:
  using Error::Error;
};
class NonConvexInput : public Error {
 public:
  using Error::Error;
};

// lower bound
class AuditFailed : public Error {
 public:
  using Error::Error;
};
class NonpositiveRhs : public Error {
 public:
  using Error::Error;
};

// harness
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace shadowlp
