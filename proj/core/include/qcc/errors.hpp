#pragma once

#include <stdexcept>
#include <string>

namespace qcc {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operands act on different numbers of qubits.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A precondition on an argument was violated.
class ContractError : public Error {
  public:
    using Error::Error;
};

/// Malformed input file; message starts with "<path>:<line>:".
class ParseError : public Error {
  public:
    using Error::Error;
};

/// A computation left its numerical domain (non-finite objective,
/// reference instability, ...).
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// An iterative solver hit its iteration cap. Carries the last iterate.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double last_iterate)
        : Error(what), last_iterate_(last_iterate) {}
    double last_iterate() const { return last_iterate_; }

  private:
    double last_iterate_ = 0.0;
};

/// A requested computation exceeds a configured size cap.
class CapacityError : public Error {
  public:
    using Error::Error;
};

}  // namespace qcc
