#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace acslab {

enum class ErrorKind {
  InputNotAntiInvariant,
  DegenerateMetric,
  IncompatiblePair,
  NotOnTwistorFiber,
  DegreeOverflow,
  SolverDivergence,
  DimensionMismatch,
  GapUndetected,
  NormViolation,
  IdenticalStructures,
  JacobiViolation,
  NotNilpotent,
  UnsupportedNonInvariant,
  UnknownPreset,
  FrameDegenerate,
  RhsNotInRange,
  DegenerateCandidate,
  NewtonDivergence,
  TamingLost,
  UnsupportedMetric,
  ConfigError,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace acslab
