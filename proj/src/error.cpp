#include "dgff/error.hpp"

namespace dgff {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NonPositiveConductance: return "NonPositiveConductance";
    case ErrorCode::ConflictingEdge: return "ConflictingEdge";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::OverlappingLayers: return "OverlappingLayers";
    case ErrorCode::EmptyLayer: return "EmptyLayer";
    case ErrorCode::LocalityViolation: return "LocalityViolation";
    case ErrorCode::CoverageViolation: return "CoverageViolation";
    case ErrorCode::NoExterior: return "NoExterior";
    case ErrorCode::RootsInExterior: return "RootsInExterior";
    case ErrorCode::ExteriorUnreachable: return "ExteriorUnreachable";
    case ErrorCode::InteriorUnreachable: return "InteriorUnreachable";
    case ErrorCode::SealedCluster: return "SealedCluster";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SupportViolation: return "SupportViolation";
  }
  return "Unknown";
}

ErrorKind kind_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError:
      return ErrorKind::Io;
    case ErrorCode::NotPD:
    case ErrorCode::NotPSD:
    case ErrorCode::NoConvergence:
      return ErrorKind::Numerical;
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::SupportViolation:
      return ErrorKind::Usage;
    default:
      return ErrorKind::Input;
  }
}

}  // namespace dgff
