#pragma once

#include <stdexcept>
#include <string>

namespace garchmom {

/// Coarse failure classes. The CLI maps each one onto a stable exit code.
enum class ErrorKind {
  io,             // unreadable or malformed input
  infeasible,     // inputs outside what the model family can represent
  out_of_region,  // moments outside the attainable (Gamma4, Gamma6) set
  numerical,      // divergence, overflow, poles, failed convergence
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ErrorKind::infeasible, what) {}
};

/// Mixture inputs sitting on the eta6 = (15/9) eta4^2 line.
class BoundaryError : public InfeasibleError {
 public:
  explicit BoundaryError(const std::string& what) : InfeasibleError(what) {}
};

class OutOfRegionError : public Error {
 public:
  OutOfRegionError(const std::string& what, double lo, double hi)
      : Error(ErrorKind::out_of_region, what), lo_(lo), hi_(hi) {}

  /// Attainable Gamma6 range that the request fell outside of.
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

/// Raised when mu(alpha1, beta1, n) >= 1; order() is the smallest such n.
class DivergentMomentError : public NumericalError {
 public:
  DivergentMomentError(const std::string& what, int order)
      : NumericalError(what), order_(order) {}

  int order() const noexcept { return order_; }

 private:
  int order_;
};

class SimulationOverflowError : public NumericalError {
 public:
  SimulationOverflowError(const std::string& what, long long step, double value)
      : NumericalError(what), step_(step), value_(value) {}

  long long step() const noexcept { return step_; }
  double value() const noexcept { return value_; }

 private:
  long long step_;
  double value_;
};

}  // namespace garchmom
