#pragma once

#include <stdexcept>
#include <string>

namespace hybridpulse {

// Error categories map one-to-one onto CLI exit codes (see tools/hybridpulse.cpp).
enum class ErrorKind {
  Parameter,  // value outside its admissible range
  Input,      // malformed or inconsistent input data
  Capacity,   // problem exceeds a hard simulator/enumeration limit
  Schedule,   // pulse schedule violates channel exclusivity
  Numerical,  // a numerical procedure failed (singular system, infeasible root)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(ErrorKind::Parameter, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(ErrorKind::Capacity, what) {}
};

class ScheduleError : public Error {
 public:
  explicit ScheduleError(const std::string& what) : Error(ErrorKind::Schedule, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Raised by amplitude calibration when the requested rotation needs |amp| > 1.
class InfeasibleDurationError : public NumericalError {
 public:
  explicit InfeasibleDurationError(const std::string& what) : NumericalError(what) {}
};

/// Raised by readout mitigation; callers fall back to the raw distribution.
class MitigationFailedError : public NumericalError {
 public:
  explicit MitigationFailedError(const std::string& what) : NumericalError(what) {}
};

}  // namespace hybridpulse
