#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace sar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class GraphError : public Error
{
public:
  enum class Kind { CycleDetected, MultipleParents, Disconnected, WrongEdgeCount, IndexOutOfRange };

  GraphError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// A state or edge configuration violates the rod-length or velocity constraints.
class ConstraintViolation : public Error
{
public:
  using Error::Error;
};

class OrthogonalityViolation : public Error
{
public:
  using Error::Error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// Raised when the multiplier matrix fails its Cholesky factorization.
/// `time()` is the simulation time of the offending evaluation (NaN outside a run).
class NotPositiveDefinite : public Error
{
public:
  explicit NotPositiveDefinite(const std::string& what, double t = std::numeric_limits<double>::quiet_NaN())
    : Error(what), time_(t)
  {}

  double time() const noexcept { return time_; }

private:
  double time_;
};

class NonFiniteState : public Error
{
public:
  NonFiniteState(const std::string& what, double t) : Error(what), time_(t) {}

  double time() const noexcept { return time_; }

private:
  double time_;
};

} // namespace sar
