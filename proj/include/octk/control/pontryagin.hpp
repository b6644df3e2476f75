#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "octk/core/errors.hpp"
#include "octk/core/integrate.hpp"
#include "octk/core/optimize.hpp"
#include "octk/core/types.hpp"

namespace octk::control {

/// Control Hamiltonian H = F + lambda * f.
inline double control_hamiltonian(const ControlProblem& problem, double x, double u,
                                  double lambda, double t) {
    return problem.F(x, u, t) + lambda * problem.f(x, u, t);
}

/// dH/du with the problem's analytic partials.
inline double control_hamiltonian_du(const ControlProblem& problem, double x, double u,
                                     double lambda, double t) {
    return problem.F_u(x, u, t) + lambda * problem.f_u(x, u, t);
}

struct ControlChoice {
    double u;
    bool at_bound;  // argmax landed on u_lo or u_hi
};

/// Solve the algebraic optimality condition dH/du = 0 by maximizing
/// H(x, . , lambda, t) over the admissible interval: seeded golden-section
/// scan, then Newton polish on dH/du with the analytic partials. Boundary
/// maxima are accepted and flagged rather than rejected.
inline ControlChoice eliminate_control(const ControlProblem& problem, double x, double lambda,
                                       double t) {
    const double span = problem.u_hi - problem.u_lo;
    const double tol = 1e-6 * std::max(1.0, span);
    auto H = [&](double u) { return control_hamiltonian(problem, x, u, lambda, t); };
    auto Hu = [&](double u) { return control_hamiltonian_du(problem, x, u, lambda, t); };

    double u = maximize_scalar(H, problem.u_lo, problem.u_hi, tol).arg;
    double hu = Hu(u);
    double hval = H(u);
    for (int iter = 0; iter < 8 && std::abs(hu) > 1e-13 * (1.0 + std::abs(hval)); ++iter) {
        const double h = 1e-6 * (1.0 + std::abs(u));
        const double huu = (Hu(u + h) - Hu(u - h)) / (2.0 * h);
        if (!(huu < 0.0)) break;  // not locally concave; trust the scan
        double u_new = u - hu / huu;
        u_new = std::min(problem.u_hi, std::max(problem.u_lo, u_new));
        const double hu_new = Hu(u_new);
        const double hval_new = H(u_new);
        if (std::abs(hu_new) >= std::abs(hu) || hval_new + 1e-14 * std::abs(hval) < hval) break;
        u = u_new;
        hu = hu_new;
        hval = hval_new;
    }

    const double edge = 1e-12 * std::max(1.0, span);
    const bool at_bound = (u - problem.u_lo) <= edge || (problem.u_hi - u) <= edge;
    return {u, at_bound};
}

/// Right-hand side of the reduced two-equation system obtained after the
/// control has been eliminated: x' = dH/dlambda, lambda' = -dH/dx, both at
/// u*(x, lambda, t).
inline std::pair<double, double> pontryagin_rhs(const ControlProblem& problem, double x,
                                                double lambda, double t) {
    const double u = eliminate_control(problem, x, lambda, t).u;
    const double xdot = problem.f(x, u, t);
    const double ldot = -(problem.F_x(x, u, t) + lambda * problem.f_x(x, u, t));
    return {xdot, ldot};
}

/// Shooting configuration for the two-point boundary value problem with the
/// terminal transversality condition lambda(t1) = 0.
struct ShootingConfig {
    double seed0 = 0.0;
    double seed1 = -0.5;
    double dt = 1e-3;
    double tolerance = 1e-10;  // on |lambda(t1)|
    int max_iterations = 60;

    void validate() const {
        if (!(dt > 0.0)) throw ConfigurationError("ShootingConfig: dt must be positive");
        if (!(tolerance > 0.0))
            throw ConfigurationError("ShootingConfig: tolerance must be positive");
        if (seed0 == seed1)
            throw ConfigurationError("ShootingConfig: costate seeds must differ");
    }
};

/// Default seeds: zero costate (exact for payoff-free problems) plus a
/// second seed offset against the payoff gradient at the start point.
inline ShootingConfig default_shooting_config(const ControlProblem& problem) {
    ShootingConfig cfg;
    const double u_mid = 0.5 * (problem.u_lo + problem.u_hi);
    const double g = problem.F_x(problem.x0, u_mid, problem.t0);
    cfg.seed0 = 0.0;
    cfg.seed1 = (g >= 0.0) ? -0.5 : 0.5;
    return cfg;
}

struct OpenLoopSolution {
    Trajectory trajectory;
    double lambda0 = 0.0;          // converged initial costate
    double terminal_costate = 0.0; // |lambda(t1)| actually reached
    int secant_iterations = 0;
};

namespace detail {

template <typename Record>
inline double integrate_pontryagin(const ControlProblem& problem, double lambda0,
                                   std::size_t steps, double dt, Record&& record) {
    std::array<double, 2> y{problem.x0, lambda0};
    double t = problem.t0;
    record(t, y);
    auto rhs = [&](const std::array<double, 2>& s, double at) {
        const auto [xdot, ldot] = pontryagin_rhs(problem, s[0], s[1], at);
        return std::array<double, 2>{xdot, ldot};
    };
    for (std::size_t k = 0; k < steps; ++k) {
        y = rk4_step<2>(rhs, y, t, dt);
        t = problem.t0 + static_cast<double>(k + 1) * dt;
        record(t, y);
    }
    return y[1];
}

}  // namespace detail

/// Open-loop solution by secant shooting on the initial costate: integrate
/// the reduced Pontryagin system with RK4 and iterate lambda(t0) until the
/// transversality condition |lambda(t1)| <= tolerance holds.
inline OpenLoopSolution solve_open_loop(const ControlProblem& problem,
                                        const ShootingConfig& cfg) {
    problem.validate();
    cfg.validate();

    const auto steps =
        static_cast<std::size_t>(std::llround((problem.t1 - problem.t0) / cfg.dt));
    if (steps == 0) throw ConfigurationError("solve_open_loop: dt exceeds the horizon");
    const double dt = (problem.t1 - problem.t0) / static_cast<double>(steps);

    auto shoot = [&](double s) {
        return detail::integrate_pontryagin(problem, s, steps, dt,
                                            [](double, const std::array<double, 2>&) {});
    };

    double s0 = cfg.seed0, s1 = cfg.seed1;
    double r0 = shoot(s0);
    int iterations = 0;
    double s_best = s0, r_best = std::abs(r0);

    double s_conv = s0, r_conv = r0;
    bool converged = std::abs(r0) <= cfg.tolerance;
    if (!converged) {
        double r1 = shoot(s1);
        if (std::abs(r1) < r_best) {
            s_best = s1;
            r_best = std::abs(r1);
        }
        converged = std::abs(r1) <= cfg.tolerance;
        s_conv = s1;
        r_conv = r1;
        while (!converged) {
            if (++iterations > cfg.max_iterations)
                throw NoConvergenceError(
                    "solve_open_loop: secant exceeded max iterations (best |lambda(t1)| = " +
                        std::to_string(r_best) + ")",
                    s_best, r_best);
            const double denom = r1 - r0;
            if (denom == 0.0)
                throw NoConvergenceError("solve_open_loop: flat shooting function", s_best,
                                         r_best);
            const double s2 = s1 - r1 * (s1 - s0) / denom;
            if (!std::isfinite(s2))
                throw NoConvergenceError("solve_open_loop: secant diverged", s_best, r_best);
            const double r2 = shoot(s2);
            if (std::abs(r2) < r_best) {
                s_best = s2;
                r_best = std::abs(r2);
            }
            s0 = s1;
            r0 = r1;
            s1 = s2;
            r1 = r2;
            s_conv = s2;
            r_conv = r2;
            converged = std::abs(r2) <= cfg.tolerance;
        }
    }

    OpenLoopSolution sol;
    sol.lambda0 = s_conv;
    sol.secant_iterations = iterations;
    sol.terminal_costate = std::abs(r_conv);
    auto& traj = sol.trajectory;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.costates.reserve(steps + 1);
    traj.controls.reserve(steps + 1);
    detail::integrate_pontryagin(problem, s_conv, steps, dt,
                                 [&](double t, const std::array<double, 2>& y) {
                                     traj.times.push_back(t);
                                     traj.states.push_back(y[0]);
                                     traj.costates.push_back(y[1]);
                                     traj.controls.push_back(
                                         eliminate_control(problem, y[0], y[1], t).u);
                                 });
    traj.validate();
    return sol;
}

/// Flow generated by an arbitrary closed-loop rule u(x, lambda, t). The
/// equations of motion pick up dH/du terms that vanish only for the optimal
/// rule:
///   x'      =  dH/dlambda + (dH/du)(du/dlambda)
///   lambda' = -dH/dx      - (dH/du)(du/dx)
/// Rule derivatives are central differences with relative step 1e-6.
inline Trajectory arbitrary_closed_loop_flow(const ControlProblem& problem, const Fn3& rule,
                                             double x0, double lambda0, double dt) {
    problem.validate();
    if (!(dt > 0.0)) throw ConfigurationError("arbitrary_closed_loop_flow: dt must be positive");
    const auto steps =
        static_cast<std::size_t>(std::llround((problem.t1 - problem.t0) / dt));
    if (steps == 0)
        throw ConfigurationError("arbitrary_closed_loop_flow: dt exceeds the horizon");
    const double h = (problem.t1 - problem.t0) / static_cast<double>(steps);

    auto rhs = [&](const std::array<double, 2>& s, double t) {
        const double x = s[0], lam = s[1];
        const double u = rule(x, lam, t);
        const double hx = 1e-6 * (1.0 + std::abs(x));
        const double hl = 1e-6 * (1.0 + std::abs(lam));
        const double du_dx = (rule(x + hx, lam, t) - rule(x - hx, lam, t)) / (2.0 * hx);
        const double du_dl = (rule(x, lam + hl, t) - rule(x, lam - hl, t)) / (2.0 * hl);
        const double Hu = control_hamiltonian_du(problem, x, u, lam, t);
        const double xdot = problem.f(x, u, t) + Hu * du_dl;
        const double ldot = -(problem.F_x(x, u, t) + lam * problem.f_x(x, u, t)) - Hu * du_dx;
        return std::array<double, 2>{xdot, ldot};
    };

    Trajectory traj;
    std::array<double, 2> y{x0, lambda0};
    double t = problem.t0;
    for (std::size_t k = 0;; ++k) {
        traj.times.push_back(t);
        traj.states.push_back(y[0]);
        traj.costates.push_back(y[1]);
        traj.controls.push_back(rule(y[0], y[1], t));
        if (k == steps) break;
        y = rk4_step<2>(rhs, y, t, h);
        t = problem.t0 + static_cast<double>(k + 1) * h;
    }
    traj.validate();
    return traj;
}

/// Tabulate a closed-loop rule along a trajectory, which turns it into the
/// equivalent open-loop strategy u(t) = u(x(t), lambda(t), t).
inline OpenLoop extract_open_loop(const Trajectory& traj, const Fn3& rule) {
    traj.validate();
    OpenLoop open;
    open.times = traj.times;
    open.values.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k)
        open.values.push_back(rule(traj.states[k], traj.costates[k], traj.times[k]));
    return open;
}

}  // namespace octk::control
