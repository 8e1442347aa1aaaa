#include "acslab/errors.hpp"

namespace acslab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InputNotAntiInvariant: return "InputNotAntiInvariant";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::IncompatiblePair: return "IncompatiblePair";
    case ErrorKind::NotOnTwistorFiber: return "NotOnTwistorFiber";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::SolverDivergence: return "SolverDivergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::GapUndetected: return "GapUndetected";
    case ErrorKind::NormViolation: return "NormViolation";
    case ErrorKind::IdenticalStructures: return "IdenticalStructures";
    case ErrorKind::JacobiViolation: return "JacobiViolation";
    case ErrorKind::NotNilpotent: return "NotNilpotent";
    case ErrorKind::UnsupportedNonInvariant: return "UnsupportedNonInvariant";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::FrameDegenerate: return "FrameDegenerate";
    case ErrorKind::RhsNotInRange: return "RhsNotInRange";
    case ErrorKind::DegenerateCandidate: return "DegenerateCandidate";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::TamingLost: return "TamingLost";
    case ErrorKind::UnsupportedMetric: return "UnsupportedMetric";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace acslab
