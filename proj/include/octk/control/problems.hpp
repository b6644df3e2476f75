#pragma once

#include <cmath>

#include "octk/core/types.hpp"

namespace octk::control {

/// Linear-quadratic catalog problem: F = -(x^2 + u^2)/2, f = u, x(0) = 1,
/// horizon [0,1], u in [-5,5]. Everything about it is known in closed form,
/// so it exercises every control operation against an analytic reference.
inline ControlProblem make_lq_problem() {
    ControlProblem p;
    p.F = [](double x, double u, double) { return -0.5 * (x * x + u * u); };
    p.f = [](double, double u, double) { return u; };
    p.F_x = [](double x, double, double) { return -x; };
    p.F_u = [](double, double u, double) { return -u; };
    p.f_x = [](double, double, double) { return 0.0; };
    p.f_u = [](double, double, double) { return 1.0; };
    p.t0 = 0.0;
    p.t1 = 1.0;
    p.x0 = 1.0;
    p.u_lo = -5.0;
    p.u_hi = 5.0;
    p.name = "lq";
    return p;
}

/// Closed-form solution of the LQ problem under the maximization
/// convention.
struct LqReference {
    static double x(double t) { return std::cosh(1.0 - t) / std::cosh(1.0); }
    static double lambda(double t) { return -std::sinh(1.0 - t) / std::cosh(1.0); }
    static double u(double t) { return lambda(t); }
    static double J(double x, double t) { return -0.5 * x * x * std::tanh(1.0 - t); }
    static double lambda_field(double x, double t) { return -x * std::tanh(1.0 - t); }
};

/// Payoff-free problem: F = 0, f = u. The zero costate solves both adjoint
/// conditions.
inline ControlProblem make_payoff_free_problem() {
    ControlProblem p;
    p.F = [](double, double, double) { return 0.0; };
    p.f = [](double, double u, double) { return u; };
    p.F_x = [](double, double, double) { return 0.0; };
    p.F_u = [](double, double, double) { return 0.0; };
    p.f_x = [](double, double, double) { return 0.0; };
    p.f_u = [](double, double, double) { return 1.0; };
    p.t0 = 0.0;
    p.t1 = 1.0;
    p.x0 = 0.5;
    p.u_lo = -1.0;
    p.u_hi = 1.0;
    p.name = "payoff-free";
    return p;
}

/// Frozen-state problem: f = 0, so the value function is a pure time
/// integral of the maximized payoff.
inline ControlProblem make_frozen_state_problem() {
    ControlProblem p;
    p.F = [](double x, double u, double t) { return -(u - 0.3) * (u - 0.3) + x * t; };
    p.f = [](double, double, double) { return 0.0; };
    p.F_x = [](double, double, double t) { return t; };
    p.F_u = [](double, double u, double) { return -2.0 * (u - 0.3); };
    p.f_x = [](double, double, double) { return 0.0; };
    p.f_u = [](double, double, double) { return 0.0; };
    p.t0 = 0.0;
    p.t1 = 1.0;
    p.x0 = 0.5;
    p.u_lo = -1.0;
    p.u_hi = 1.0;
    p.name = "frozen-state";
    return p;
}

}  // namespace octk::control
