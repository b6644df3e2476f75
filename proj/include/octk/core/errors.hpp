#pragma once

#include <stdexcept>
#include <string>

namespace octk {

/// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Query outside grid bounds, disjoint time ranges, trajectory leaving a field.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Grid axis too short for the requested stencil.
class DegenerateGridError : public Error {
public:
    explicit DegenerateGridError(const std::string& msg) : Error(msg) {}
};

/// Fields that must share a grid do not.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

/// Zero pivot in a direct linear solve.
class SingularSystemError : public Error {
public:
    explicit SingularSystemError(const std::string& msg) : Error(msg) {}
};

/// Objective or constraint returned NaN/Inf at a probe point.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& msg, double point)
        : Error(msg + " (at point " + std::to_string(point) + ")"), point(point) {}
    double point;
};

/// Iterative solver ran out of iterations; carries the best iterate seen.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& msg, double best_iterate, double best_value)
        : Error(msg), best_iterate(best_iterate), best_value(best_value) {}
    double best_iterate;
    double best_value;
};

/// Time integration produced a non-finite state.
class PropagationError : public Error {
public:
    PropagationError(const std::string& msg, double t)
        : Error(msg + " (t = " + std::to_string(t) + ")"), time(t) {}
    double time;
};

/// Operation requires a structure the system does not expose.
class UnsupportedSystemError : public Error {
public:
    explicit UnsupportedSystemError(const std::string& msg) : Error(msg) {}
};

/// Invalid solver or scenario configuration.
class ConfigurationError : public Error {
public:
    explicit ConfigurationError(const std::string& msg) : Error(msg) {}
};

/// Zero-magnitude sample in a logarithm/phase extraction; carries the index.
class NodeError : public Error {
public:
    NodeError(const std::string& msg, std::size_t index)
        : Error(msg + " (index " + std::to_string(index) + ")"), index(index) {}
    std::size_t index;
};

/// Evaluation of a generating function at a singular time.
class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& msg) : Error(msg) {}
};

/// Continuation failed at the very first node of a constraint solve.
class SeedError : public Error {
public:
    explicit SeedError(const std::string& msg) : Error(msg) {}
};

/// Root solve failed while rebuilding a trajectory from a constant line.
class ReconstructionError : public Error {
public:
    ReconstructionError(const std::string& msg, double t)
        : Error(msg + " (t = " + std::to_string(t) + ")"), time(t) {}
    double time;
};

/// Trajectory samples do not satisfy the declared dynamics.
class InconsistentTrajectoryError : public Error {
public:
    explicit InconsistentTrajectoryError(const std::string& msg) : Error(msg) {}
};

/// Grid cannot resolve a requested eigenstate.
class GridResolutionError : public Error {
public:
    explicit GridResolutionError(const std::string& msg) : Error(msg) {}
};

/// A whole time slice fell below the magnitude floor of a log extraction.
class DegenerateStateError : public Error {
public:
    explicit DegenerateStateError(const std::string& msg) : Error(msg) {}
};

/// Phase-tower level has no usable window; carries the depth reached.
class TowerTruncationError : public Error {
public:
    TowerTruncationError(const std::string& msg, int achieved_depth)
        : Error(msg), achieved_depth(achieved_depth) {}
    int achieved_depth;
};

}  // namespace octk
