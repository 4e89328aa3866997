#pragma once

#include <stdexcept>
#include <string>

namespace fsim {

/// A point (solid node or quadrature point) left the background domain.
/// The time loop treats this as fatal: clamping would silently corrupt the physics.
class OutOfDomainError : public std::runtime_error {
  public:
    OutOfDomainError(double x, double y, const std::string& context)
        : std::runtime_error("point (" + std::to_string(x) + ", " + std::to_string(y) +
                             ") is outside the background domain: " + context),
          x_(x), y_(y) {}
    double x() const { return x_; }
    double y() const { return y_; }

  private:
    double x_, y_;
};

/// A TransferMap was used after the solid mesh moved past the revision it was built for.
class StaleMapError : public std::runtime_error {
  public:
    StaleMapError() : std::runtime_error("transfer map is stale: solid mesh moved since build") {}
};

/// An iterative linear solve missed its tolerance within the iteration cap.
class SolverFailure : public std::runtime_error {
  public:
    SolverFailure(const std::string& what, double residual, int iterations)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + " after " +
                             std::to_string(iterations) + " iterations)"),
          residual_(residual), iterations_(iterations) {}
    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

  private:
    double residual_;
    int iterations_;
};

/// The implicit-forcing fixed point hit its iteration cap; carries the last error.
class FixedPointFailure : public std::runtime_error {
  public:
    FixedPointFailure(double last_error, int iterations)
        : std::runtime_error("fixed-point iteration did not converge: error " +
                             std::to_string(last_error) + " after " + std::to_string(iterations) +
                             " iterations"),
          last_error_(last_error), iterations_(iterations) {}
    double last_error() const { return last_error_; }
    int iterations() const { return iterations_; }

  private:
    double last_error_;
    int iterations_;
};

/// NaN/Inf detected in a sub-step solution.
class DivergenceError : public std::runtime_error {
  public:
    explicit DivergenceError(const std::string& substep)
        : std::runtime_error("solution diverged (NaN/Inf) in sub-step: " + substep),
          substep_(substep) {}
    const std::string& substep() const { return substep_; }

  private:
    std::string substep_;
};

/// Configuration file problem; carries the 1-based line number when known.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

} // namespace fsim
