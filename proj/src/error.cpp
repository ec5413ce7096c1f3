#include "movwave/error.hpp"

namespace movwave {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NonPositiveScale: return "NonPositiveScale";
    case Errc::LevelOutOfRange: return "LevelOutOfRange";
    case Errc::GradientVanishes: return "GradientVanishes";
    case Errc::FlowEscape: return "FlowEscape";
    case Errc::DegenerateNormal: return "DegenerateNormal";
    case Errc::NotElliptic: return "NotElliptic";
    case Errc::BoundaryMismatch: return "BoundaryMismatch";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::BlowUp: return "BlowUp";
    case Errc::CflViolation: return "CflViolation";
    case Errc::NotMonotone: return "NotMonotone";
    case Errc::CompatibilityViolated: return "CompatibilityViolated";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::SupersonicSpeed: return "SupersonicSpeed";
    case Errc::NonPositiveToughness: return "NonPositiveToughness";
    case Errc::SupersonicStep: return "SupersonicStep";
    case Errc::HorizonReached: return "HorizonReached";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::MissingRequired: return "MissingRequired";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::UnknownSuite: return "UnknownSuite";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

bool is_input_error(Errc code) {
  switch (code) {
    case Errc::UnknownKey:
    case Errc::MissingRequired:
    case Errc::TypeMismatch:
    case Errc::UnknownSuite:
    case Errc::InvalidArgument:
    case Errc::NonPositiveScale:
    case Errc::LevelOutOfRange:
    case Errc::GradientVanishes:
    case Errc::NonPositiveToughness:
    case Errc::CompatibilityViolated:
    case Errc::BoundaryMismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace movwave
