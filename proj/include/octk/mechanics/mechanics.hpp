#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/finite_diff.hpp"
#include "octk/core/integrate.hpp"
#include "octk/core/interpolate.hpp"
#include "octk/core/residual.hpp"
#include "octk/core/root_find.hpp"
#include "octk/core/types.hpp"

namespace octk::mechanics {

/// Integrate the canonical equations x' = dH/dp, p' = -dH/dx. Separable
/// systems use the symplectic leapfrog; anything else falls back to RK4.
inline Trajectory hamilton_flow(const HamiltonianSystem& system, double x0, double p0,
                                double t0, double dt, std::size_t steps) {
    system.validate();
    if (steps < 1) throw ConfigurationError("hamilton_flow: need at least one step");

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.costates.reserve(steps + 1);
    double x = x0, p = p0;
    traj.times.push_back(t0);
    traj.states.push_back(x);
    traj.costates.push_back(p);

    if (system.separable) {
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = t0 + static_cast<double>(k) * dt;
            std::tie(x, p) = leapfrog_step(system, x, p, t, dt);
            traj.times.push_back(t0 + static_cast<double>(k + 1) * dt);
            traj.states.push_back(x);
            traj.costates.push_back(p);
        }
    } else {
        auto rhs = [&](const std::array<double, 2>& y, double t) {
            return std::array<double, 2>{system.dH_dp(y[0], y[1], t),
                                         -system.dH_dx(y[0], y[1], t)};
        };
        std::array<double, 2> y{x, p};
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = t0 + static_cast<double>(k) * dt;
            y = rk4_step<2>(rhs, y, t, dt);
            traj.times.push_back(t0 + static_cast<double>(k + 1) * dt);
            traj.states.push_back(y[0]);
            traj.costates.push_back(y[1]);
        }
    }
    traj.validate();
    return traj;
}

/// Solve the phase-space constraint Phi(x, p, t) = 0 for p(x,t) nodewise.
/// The branch is picked by the seed function at the first node and then
/// carried by continuation, first along x, then along t. Nodes where the
/// root solve fails are masked.
inline ScalarField solve_phase_constraint(const Fn3& Phi, const GridSpec& grid,
                                          const Fn1& p_seed) {
    grid.validate();
    ScalarField p = ScalarField::over_xt(grid);
    p.ensure_mask();

    const double tol = 1e-12;
    bool any_solved = false;
    for (std::size_t k = 0; k < grid.nt; ++k) {
        const double t = grid.t(k);
        double carry = 0.0;
        bool have_carry = false;
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            double seed;
            if (k > 0 && p.valid(i, k - 1))
                seed = p.at(i, k - 1);
            else if (have_carry)
                seed = carry;
            else
                seed = p_seed(x);
            const double delta = 1e-4 * (1.0 + std::abs(seed));
            try {
                const double root = root_find_1d(
                    [&](double q) { return Phi(x, q, t); }, SeedPair{seed, seed + delta}, tol);
                p.at(i, k) = root;
                carry = root;
                have_carry = true;
                any_solved = true;
            } catch (const Error&) {
                if (!any_solved && i == 0 && k == 0)
                    throw SeedError(
                        "solve_phase_constraint: no root from the seed at the first node");
                p.at(i, k) = 0.0;
                p.invalidate(i, k);
            }
        }
    }
    if (p.coverage() == 1.0) p.mask.clear();
    return p;
}

/// Closed-loop momentum from an action-type function: p(x,t) = dS/dx.
inline ScalarField momentum_from_action(const ScalarField& S) {
    return fd_partial(S, Axis::Space);
}

/// Defect of the Hamilton-Jacobi equation, e = -S_t - H(x, S_x, t). The
/// per-time mean estimates the inhomogeneity g(t); a genuine solution has
/// both mean and spread at discretization level.
inline ResidualReport hj_residual(const ScalarField& S, const HamiltonianSystem& system) {
    system.validate();
    const ScalarField sx = fd_partial(S, Axis::Space);
    const ScalarField st = fd_partial(S, Axis::Time);
    ScalarField e = S;
    e.ensure_mask();
    for (std::size_t k = 0; k < S.slices(); ++k) {
        const double t = S.grid.t(k);
        for (std::size_t i = 0; i < S.nx(); ++i) {
            if (sx.valid(i, k) && st.valid(i, k))
                e.at(i, k) = -st.at(i, k) - system.H(S.grid.x(i), sx.at(i, k), t);
            else
                e.invalidate(i, k);
        }
    }
    return summarize_residual(e);
}

/// Sample a closed-loop momentum field along a trajectory, producing the
/// equivalent open-loop table p(t) = p(x(t), t).
inline OpenLoop closed_to_open_momentum(const ScalarField& p_field, const Trajectory& traj) {
    traj.validate();
    OpenLoop open;
    open.times = traj.times;
    open.values.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k)
        open.values.push_back(interpolate(p_field, traj.states[k], traj.times[k]));
    return open;
}

/// Rule-based overload for analytic strategies p(x,t).
inline OpenLoop closed_to_open_momentum(const std::function<double(double, double)>& p_rule,
                                        const Trajectory& traj) {
    traj.validate();
    OpenLoop open;
    open.times = traj.times;
    open.values.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k)
        open.values.push_back(p_rule(traj.states[k], traj.times[k]));
    return open;
}

}  // namespace octk::mechanics
