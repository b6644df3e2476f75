#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "octk/control/pontryagin.hpp"
#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/finite_diff.hpp"
#include "octk/core/integrate.hpp"
#include "octk/core/interpolate.hpp"
#include "octk/core/optimize.hpp"
#include "octk/core/residual.hpp"
#include "octk/core/types.hpp"

namespace octk::bellman {

/// Value function and derived feedback fields from a backward HJB solve.
/// Boundary rows use one-sided differences and are low-confidence; residual
/// reports exclude them.
struct HjbSolution {
    ScalarField J;       // value function over (x,t)
    ScalarField u_star;  // maximizing control field
    ScalarField lam;     // costate field dJ/dx
    GridSpec grid;
    double cfl_ratio = 0.0;
};

namespace detail {

inline double estimate_dynamics_bound(const ControlProblem& problem, const GridSpec& grid) {
    double fmax = 0.0;
    constexpr std::size_t nu = 17, ntt = 5;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        for (std::size_t j = 0; j < nu; ++j) {
            const double u =
                problem.u_lo + (problem.u_hi - problem.u_lo) * static_cast<double>(j) / (nu - 1);
            for (std::size_t m = 0; m < ntt; ++m) {
                const double t =
                    grid.t0 + (grid.t1 - grid.t0) * static_cast<double>(m) / (ntt - 1);
                fmax = std::max(fmax, std::abs(problem.f(x, u, t)));
            }
        }
    }
    return fmax;
}

}  // namespace detail

/// Backward dynamic-programming solve of
///   max_u ( F + J_x f ) = -J_t,   J(. , t1) = terminal.
/// Explicit Euler in time; J_x inside the max is upwinded against the sign
/// of f (central where |f| < 1e-12); the maximization reuses the scalar
/// maximizer at every node. After the sweep the costate field lam = dJ/dx
/// is formed with the second-order stencils and u* is re-eliminated from it
/// nodewise, which is the closed-loop u*(x, dJ/dx, t).
inline HjbSolution solve_hjb(const ControlProblem& problem, const GridSpec& grid,
                             const std::function<double(double)>& terminal) {
    problem.validate();
    grid.validate();
    if (grid.t0 != problem.t0 || grid.t1 != problem.t1)
        throw ConfigurationError("solve_hjb: grid horizon must match the problem horizon");

    const double dx = grid.dx();
    const double dt = grid.dt();
    const double fmax = detail::estimate_dynamics_bound(problem, grid);
    const double cfl = dt * fmax / dx;
    if (cfl > 0.5 + 1e-12) {
        const auto nt_needed = static_cast<std::size_t>(
            std::ceil((grid.t1 - grid.t0) * fmax / (0.5 * dx))) + 1;
        throw ConfigurationError("solve_hjb: CFL ratio " + std::to_string(cfl) +
                                 " exceeds 0.5; need nt >= " + std::to_string(nt_needed));
    }

    HjbSolution sol;
    sol.grid = grid;
    sol.cfl_ratio = cfl;
    sol.J = ScalarField::over_xt(grid);
    const std::size_t nx = grid.nx;
    const std::size_t nt = grid.nt;

    for (std::size_t i = 0; i < nx; ++i) sol.J.at(i, nt - 1) = terminal(grid.x(i));

    const double span = problem.u_hi - problem.u_lo;
    const double tol_u = 1e-6 * std::max(1.0, span);

    std::vector<double> fwd(nx), bwd(nx), cen(nx);
    for (std::size_t k = nt - 1; k-- > 0;) {
        const double t_known = grid.t(k + 1);
        // one-sided/central slope tables from the known slice
        for (std::size_t i = 0; i < nx; ++i) {
            const double jm = (i > 0) ? sol.J.at(i - 1, k + 1) : 0.0;
            const double jc = sol.J.at(i, k + 1);
            const double jp = (i + 1 < nx) ? sol.J.at(i + 1, k + 1) : 0.0;
            fwd[i] = (i + 1 < nx) ? (jp - jc) / dx : (jc - sol.J.at(i - 1, k + 1)) / dx;
            bwd[i] = (i > 0) ? (jc - jm) / dx : fwd[i];
            cen[i] = (i > 0 && i + 1 < nx) ? (jp - jm) / (2.0 * dx) : fwd[i];
        }
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = grid.x(i);
            auto objective = [&](double u) {
                const double fv = problem.f(x, u, t_known);
                const double jx = (fv > 1e-12) ? fwd[i] : (fv < -1e-12 ? bwd[i] : cen[i]);
                return problem.F(x, u, t_known) + jx * fv;
            };
            const auto best = maximize_scalar(objective, problem.u_lo, problem.u_hi, tol_u);
            sol.J.at(i, k) = sol.J.at(i, k + 1) + dt * best.value;
        }
    }

    sol.lam = fd_partial(sol.J, Axis::Space);
    sol.u_star = ScalarField::over_xt(grid);
    for (std::size_t k = 0; k < nt; ++k) {
        const double t = grid.t(k);
        for (std::size_t i = 0; i < nx; ++i)
            sol.u_star.at(i, k) =
                control::eliminate_control(problem, grid.x(i), sol.lam.at(i, k), t).u;
    }
    return sol;
}

inline HjbSolution solve_hjb(const ControlProblem& problem, const GridSpec& grid) {
    return solve_hjb(problem, grid, [](double) { return 0.0; });
}

/// Closed-loop costate field lambda(x,t) = dJ/dx.
inline ScalarField costate_field(const HjbSolution& sol) {
    return fd_partial(sol.J, Axis::Space);
}

/// Reduced Hamiltonian H*(x,t) = H(x, u*(x,t), lambda(x,t), t) nodewise.
inline ScalarField reduced_hamiltonian_field(const ControlProblem& problem,
                                             const HjbSolution& sol) {
    ScalarField h = ScalarField::over_xt(sol.grid);
    for (std::size_t k = 0; k < sol.grid.nt; ++k) {
        const double t = sol.grid.t(k);
        for (std::size_t i = 0; i < sol.grid.nx; ++i) {
            const double x = sol.grid.x(i);
            const double u = sol.u_star.at(i, k);
            h.at(i, k) = problem.F(x, u, t) + sol.lam.at(i, k) * problem.f(x, u, t);
        }
    }
    return h;
}

/// Residual of the costate consistency condition dH*/dx + d(lambda)/dt on
/// the HJB output, interior nodes only.
inline ResidualReport hjb_consistency(const ControlProblem& problem, const HjbSolution& sol) {
    return consistency_residual(reduced_hamiltonian_field(problem, sol), sol.lam,
                                /*interior_only=*/true);
}

/// Nodewise defect of the value equation, e = F + J_x f + J_t at the
/// eliminated control. Its per-time mean estimates the inhomogeneity g(t);
/// the per-time spread must be small for a valid solution.
inline ResidualReport inhomogeneity_report(const ControlProblem& problem,
                                           const HjbSolution& sol) {
    const ScalarField jt = fd_partial(sol.J, Axis::Time);
    ScalarField e = ScalarField::over_xt(sol.grid);
    for (std::size_t k = 0; k < sol.grid.nt; ++k) {
        const double t = sol.grid.t(k);
        for (std::size_t i = 0; i < sol.grid.nx; ++i) {
            const double x = sol.grid.x(i);
            const double u = sol.u_star.at(i, k);
            e.at(i, k) = problem.F(x, u, t) + sol.lam.at(i, k) * problem.f(x, u, t) +
                         jt.at(i, k);
        }
    }
    return summarize_residual(e, /*interior_only=*/true);
}

/// Roll the state equation forward under the closed-loop fields:
/// x' = f(x, u*(x,t), t); u* and lambda are sampled by interpolation.
inline Trajectory closed_loop_trajectory(const ControlProblem& problem, const HjbSolution& sol,
                                         double x0, double dt) {
    if (!(dt > 0.0)) throw ConfigurationError("closed_loop_trajectory: dt must be positive");
    if (x0 <= sol.grid.x_min || x0 >= sol.grid.x_max)
        throw DomainError("closed_loop_trajectory: x0 must be in the grid interior");

    const auto steps =
        static_cast<std::size_t>(std::llround((sol.grid.t1 - sol.grid.t0) / dt));
    if (steps == 0) throw ConfigurationError("closed_loop_trajectory: dt exceeds the horizon");
    const double h = (sol.grid.t1 - sol.grid.t0) / static_cast<double>(steps);

    auto rhs = [&](const std::array<double, 1>& y, double t) {
        const double u = interpolate(sol.u_star, y[0], t);
        return std::array<double, 1>{problem.f(y[0], u, t)};
    };

    Trajectory traj;
    double x = x0;
    for (std::size_t k = 0;; ++k) {
        const double t = sol.grid.t0 + static_cast<double>(k) * h;
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.costates.push_back(interpolate(sol.lam, x, t));
        traj.controls.push_back(interpolate(sol.u_star, x, t));
        if (k == steps) break;
        try {
            x = rk4_step<1>(rhs, {x}, t, h)[0];
        } catch (const DomainError&) {
            throw DomainError("closed_loop_trajectory: trajectory left the grid at t = " +
                              std::to_string(t + h));
        }
    }
    traj.validate();
    return traj;
}

/// Componentwise sup-norm differences between two trajectories after
/// resampling both, by linear interpolation, onto the coarser time grid of
/// their overlap.
struct TrajectoryDiff {
    double sup_dx = 0.0;
    double sup_dlam = 0.0;
    std::optional<double> sup_du;
};

namespace detail {

inline double sample_column(const std::vector<double>& times, const std::vector<double>& col,
                            double t) {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return col.front();
    if (it == times.end()) return col.back();
    const auto hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return col[lo] * (1.0 - w) + col[hi] * w;
}

}  // namespace detail

inline TrajectoryDiff compare_open_closed(const Trajectory& open, const Trajectory& closed) {
    open.validate();
    closed.validate();
    const double lo = std::max(open.times.front(), closed.times.front());
    const double hi = std::min(open.times.back(), closed.times.back());
    if (!(hi > lo)) throw DomainError("compare_open_closed: time ranges do not overlap");

    const Trajectory& coarser = (open.size() <= closed.size()) ? open : closed;
    TrajectoryDiff d;
    const bool both_u = open.has_controls() && closed.has_controls();
    if (both_u) d.sup_du = 0.0;
    for (double t : coarser.times) {
        if (t < lo || t > hi) continue;
        d.sup_dx = std::max(d.sup_dx,
                            std::abs(detail::sample_column(open.times, open.states, t) -
                                     detail::sample_column(closed.times, closed.states, t)));
        d.sup_dlam = std::max(d.sup_dlam,
                              std::abs(detail::sample_column(open.times, open.costates, t) -
                                       detail::sample_column(closed.times, closed.costates, t)));
        if (both_u)
            d.sup_du = std::max(*d.sup_du,
                                std::abs(detail::sample_column(open.times, open.controls, t) -
                                         detail::sample_column(closed.times, closed.controls, t)));
    }
    return d;
}

}  // namespace octk::bellman
