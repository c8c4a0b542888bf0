#pragma once

#include <stdexcept>
#include <string>

#include "riem/types.hpp"

namespace riem {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed arguments: shape mismatches, non-finite entries, bad options.
class InvalidInputError : public Error {
    using Error::Error;
};

/// Unknown builtin names, unreadable definition files, bad CLI flags.
class ConfigError : public Error {
    using Error::Error;
};

/// Point violates the level-set constraint beyond tolerance, or a
/// trajectory drifted off the manifold.
class ConstraintViolationError : public Error {
    using Error::Error;
};

/// dF rank-deficient at the query point; no tangent basis available.
class DegeneratePointError : public Error {
    using Error::Error;
};

/// Parametric geodesic left the chart domain.
class ChartExitError : public Error {
    using Error::Error;
};

/// Manifold lacks the derivative data an operation requires.
class CapabilityError : public Error {
    using Error::Error;
};

/// Function evaluation produced non-finite values.
class EvaluationError : public Error {
    using Error::Error;
};

/// Step underflow or step budget exhausted. Carries the last valid state.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double t_last, Vec y_last)
        : Error(what), t_last(t_last), y_last(std::move(y_last)) {}
    double t_last;
    Vec y_last;
};

/// Iterative solver failed to reach its tolerance; carries the best
/// residual seen so far.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& what, double best_residual)
        : Error(what), best_residual(best_residual) {}
    double best_residual;
};

/// Singular differential (e.g. dExp at a conjugate point).
class SingularityError : public Error {
    using Error::Error;
};

/// Rank-deficient restricted Hessian in the projection differential.
class DegenerateConfigurationError : public Error {
    using Error::Error;
};

}  // namespace riem
