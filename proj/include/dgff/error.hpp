#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dgff {

/// Named failure codes shared by every module and surfaced verbatim by the CLI.
enum class ErrorCode {
  IoError,
  ParseError,
  DuplicateVertex,
  UnknownVertex,
  SelfLoop,
  NonPositiveConductance,
  ConflictingEdge,
  Disconnected,
  OverlappingLayers,
  EmptyLayer,
  LocalityViolation,
  CoverageViolation,
  NoExterior,
  RootsInExterior,
  ExteriorUnreachable,
  InteriorUnreachable,
  SealedCluster,
  IndexOutOfRange,
  DimensionMismatch,
  NotPD,
  NotPSD,
  NoConvergence,
  SupportViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Which class of exit status an error maps to on the command line.
enum class ErrorKind { Io, Input, Numerical, Usage };

ErrorKind kind_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dgff
