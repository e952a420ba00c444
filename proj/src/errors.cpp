#include "disperse1d/errors.hpp"

namespace disperse1d {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::NonFiniteParameter: return "NonFiniteParameter";
  case ErrorKind::EmptyTable: return "EmptyTable";
  case ErrorKind::DivergentMoment: return "DivergentMoment";
  case ErrorKind::StepFailure: return "StepFailure";
  case ErrorKind::WronskianDrift: return "WronskianDrift";
  case ErrorKind::NonRealKernel: return "NonRealKernel";
  case ErrorKind::InteriorZero: return "InteriorZero";
  case ErrorKind::MissedRootSuspected: return "MissedRootSuspected";
  case ErrorKind::NoLimitAtInfinity: return "NoLimitAtInfinity";
  case ErrorKind::ResonantInput: return "ResonantInput";
  case ErrorKind::SlowConvergence: return "SlowConvergence";
  case ErrorKind::NoConvergence: return "NoConvergence";
  case ErrorKind::BoundViolated: return "BoundViolated";
  case ErrorKind::TooLarge: return "TooLarge";
  case ErrorKind::NegativeFrequency: return "NegativeFrequency";
  case ErrorKind::ZeroTime: return "ZeroTime";
  case ErrorKind::NonPositiveValue: return "NonPositiveValue";
  case ErrorKind::SpectralLeakage: return "SpectralLeakage";
  case ErrorKind::NonFiniteMass: return "NonFiniteMass";
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

} // namespace disperse1d
