#pragma once

#include <stdexcept>
#include <string>

namespace scbf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix shapes disagree with the declared (n, m, d).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A field or compensator was evaluated outside its validity region.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument violates its documented range (gamma <= 0, empty grid, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Derived example parameters violate a constraint of their construction.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Min-norm compensator hit L_g h = 0 while the constraint is still active.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Simulation produced a non-finite state or input.
class NumericalBlowup : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration is malformed; the message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace scbf
