#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oscul {

enum class ErrorCode {
  InvalidInput,
  DimensionMismatch,
  CoincidentPoints,
  EpsilonOutOfRange,
  TooFewPoints,
  PathNotSimple,
  DeltaTooLarge,
  ApexNotOnSphere,
  NoIntersection,
  CapsOverlap,
  RoutingFailed,
  ComponentMismatch,
  NoMesh,
  DegeneratePath,
  ChartMismatch,
  LevelInfeasible,
  EmptyProfile,
  RaggedRows,
  NonNumericCell,
  EmptyFile,
  IoFailure,
  UnsupportedDimension,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace oscul
