#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <utility>

#include "octk/core/errors.hpp"
#include "octk/core/types.hpp"

namespace octk {

/// One classical fourth-order Runge-Kutta step. Negative dt integrates
/// backward. Throws PropagationError when the right-hand side goes
/// non-finite.
template <std::size_t N, typename Rhs>
std::array<double, N> rk4_step(Rhs&& rhs, const std::array<double, N>& y, double t, double dt) {
    auto check = [&](const std::array<double, N>& v, double at) {
        for (double c : v)
            if (!std::isfinite(c)) throw PropagationError("rk4_step: non-finite derivative", at);
        return v;
    };
    auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
        std::array<double, N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
        return r;
    };

    const auto k1 = check(rhs(y, t), t);
    const auto k2 = check(rhs(axpy(y, 0.5 * dt, k1), t + 0.5 * dt), t + 0.5 * dt);
    const auto k3 = check(rhs(axpy(y, 0.5 * dt, k2), t + 0.5 * dt), t + 0.5 * dt);
    const auto k4 = check(rhs(axpy(y, dt, k3), t + dt), t + dt);

    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// Stormer-Verlet kick-drift-kick step for a separable Hamiltonian.
/// Symplectic and time-reversible: composing with dt -> -dt restores the
/// initial point to round-off.
inline std::pair<double, double> leapfrog_step(const HamiltonianSystem& system, double x,
                                               double p, double t, double dt) {
    if (!system.separable)
        throw UnsupportedSystemError("leapfrog_step: system has no separable form");
    const auto& sep = *system.separable;
    const double p_half = p - 0.5 * dt * sep.dU_dx(x);
    const double x_new = x + dt * p_half / sep.mass;
    const double p_new = p_half - 0.5 * dt * sep.dU_dx(x_new);
    if (!std::isfinite(x_new) || !std::isfinite(p_new))
        throw PropagationError("leapfrog_step: non-finite update", t + dt);
    return {x_new, p_new};
}

}  // namespace octk
