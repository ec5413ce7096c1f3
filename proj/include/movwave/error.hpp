#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace movwave {

enum class Errc {
  NonPositiveScale,
  LevelOutOfRange,
  GradientVanishes,
  FlowEscape,
  DegenerateNormal,
  NotElliptic,
  BoundaryMismatch,
  QuadratureFailure,
  BlowUp,
  CflViolation,
  NotMonotone,
  CompatibilityViolated,
  TooFewSamples,
  SupersonicSpeed,
  NonPositiveToughness,
  SupersonicStep,
  HorizonReached,
  UnknownKey,
  MissingRequired,
  TypeMismatch,
  UnknownSuite,
  InvalidArgument,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Parse/usage failures map to exit status 2, numerical ones to 3.
bool is_input_error(Errc code);

}  // namespace movwave
