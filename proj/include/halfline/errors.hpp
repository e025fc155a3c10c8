#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halfline {

enum class ErrorKind {
  Configuration,
  GridTooCoarse,
  InvalidInput,
  TruncationTooSmall,
  ClusterDetected,
  NotAnEigenpair,
  SeedResidualTooLarge,
  GroundStateHasZeros,
  SameEigenvalue,
  HypothesisViolated,
  DominanceViolated,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Configuration: return "ConfigurationError";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::ClusterDetected: return "ClusterDetected";
    case ErrorKind::NotAnEigenpair: return "NotAnEigenpair";
    case ErrorKind::SeedResidualTooLarge: return "SeedResidualTooLarge";
    case ErrorKind::GroundStateHasZeros: return "GroundStateHasZeros";
    case ErrorKind::SameEigenvalue: return "SameEigenvalue";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::DominanceViolated: return "DominanceViolated";
  }
  return "Error";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to a stable name without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace halfline
