#pragma once
#include <stdexcept>
#include <string>

namespace disperse1d {

//! Every failure mode the library can signal. The CLI maps these onto exit
//! codes and names them in its reports.
enum class ErrorKind {
  NonFiniteParameter,
  EmptyTable,
  DivergentMoment,
  StepFailure,
  WronskianDrift,
  NonRealKernel,
  InteriorZero,
  MissedRootSuspected,
  NoLimitAtInfinity,
  ResonantInput,
  SlowConvergence,
  NoConvergence,
  BoundViolated,
  TooLarge,
  NegativeFrequency,
  ZeroTime,
  NonPositiveValue,
  SpectralLeakage,
  NonFiniteMass,
  ParseError,
  InvalidArgument,
  IoFailure
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace disperse1d
