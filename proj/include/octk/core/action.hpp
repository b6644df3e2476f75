#pragma once

#include <cmath>
#include <string>

#include "octk/core/errors.hpp"
#include "octk/core/types.hpp"

namespace octk {

/// Payoff accumulated along a trajectory: trapezoidal quadrature of
/// F(x(t), u(t), t). Along a curve satisfying the dynamics this equals the
/// compact action written with the control Hamiltonian. The sampled states
/// are first checked, by central differencing, to satisfy x' = f within
/// dyn_tol.
inline double action_value(const ControlProblem& problem, const Trajectory& traj,
                           double dyn_tol = 1e-3) {
    traj.validate();
    if (!traj.has_controls())
        throw InconsistentTrajectoryError("action_value: trajectory carries no controls");
    const std::size_t n = traj.size();
    if (n < 2) throw DomainError("action_value: need at least two samples");

    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double xdot =
            (traj.states[k + 1] - traj.states[k - 1]) / (traj.times[k + 1] - traj.times[k - 1]);
        const double rhs = problem.f(traj.states[k], traj.controls[k], traj.times[k]);
        if (std::abs(xdot - rhs) > dyn_tol * (1.0 + std::abs(rhs)))
            throw InconsistentTrajectoryError(
                "action_value: sampled states violate the dynamics at t = " +
                std::to_string(traj.times[k]) + " (|xdot - f| = " +
                std::to_string(std::abs(xdot - rhs)) + ")");
    }

    double acc = 0.0;
    double prev = problem.F(traj.states[0], traj.controls[0], traj.times[0]);
    for (std::size_t k = 1; k < n; ++k) {
        const double cur = problem.F(traj.states[k], traj.controls[k], traj.times[k]);
        acc += 0.5 * (prev + cur) * (traj.times[k] - traj.times[k - 1]);
        prev = cur;
    }
    return acc;
}

}  // namespace octk
