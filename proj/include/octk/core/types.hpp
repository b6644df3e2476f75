#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"

namespace octk {

using Fn3 = std::function<double(double, double, double)>;  // (x,u,t) or (x,p,t)
using Fn1 = std::function<double(double)>;

namespace detail {

// splitmix64: fixed-seed probe points for partial-derivative consistency
// checks. Deterministic across platforms.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

inline double central_diff(const std::function<double(double)>& g, double v) {
    const double h = 1e-6 * (1.0 + std::abs(v));
    return (g(v + h) - g(v - h)) / (2.0 * h);
}

inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace detail

/// Scalar optimal control problem: maximize the integral of F(x,u,t)
/// subject to x' = f(x,u,t), x(t0) = x0, u in [u_lo, u_hi].
/// Partials are supplied analytically per catalog problem.
struct ControlProblem {
    Fn3 F;    // payoff rate
    Fn3 f;    // dynamics
    Fn3 F_x;
    Fn3 F_u;
    Fn3 f_x;
    Fn3 f_u;
    double t0 = 0.0;
    double t1 = 1.0;
    double x0 = 0.0;
    double u_lo = -1.0;
    double u_hi = 1.0;
    std::string name;

    void validate() const {
        if (!(t1 > t0)) throw ConfigurationError("ControlProblem: t1 must exceed t0");
        if (!(u_lo < u_hi)) throw ConfigurationError("ControlProblem: u_lo must be below u_hi");
        if (!F || !f || !F_x || !F_u || !f_x || !f_u)
            throw ConfigurationError("ControlProblem: all functions and partials required");
    }

    /// Compare supplied partials with central differences at fixed-seed
    /// probe points; returns the worst relative mismatch.
    double probe_partials(std::size_t n_probes = 24, std::uint64_t seed = 0x0c7c5eedULL) const {
        std::uint64_t state = seed;
        double worst = 0.0;
        for (std::size_t p = 0; p < n_probes; ++p) {
            const double x = x0 + 2.0 * (detail::unit_double(state) - 0.5) * (1.0 + std::abs(x0));
            const double u = u_lo + detail::unit_double(state) * (u_hi - u_lo);
            const double t = t0 + detail::unit_double(state) * (t1 - t0);
            auto chk = [&](const Fn3& g, const Fn3& gx, const Fn3& gu) {
                double ex = detail::central_diff([&](double v) { return g(v, u, t); }, x);
                double eu = detail::central_diff([&](double v) { return g(x, v, t); }, u);
                worst = std::max(worst, std::abs(gx(x, u, t) - ex) / (1.0 + std::abs(ex)));
                worst = std::max(worst, std::abs(gu(x, u, t) - eu) / (1.0 + std::abs(eu)));
            };
            chk(F, F_x, F_u);
            chk(f, f_x, f_u);
        }
        return worst;
    }
};

/// Hamiltonian H(x,p,t) with analytic partials; optionally separable as
/// p^2/(2m) + U(x), which unlocks the symplectic integrator.
struct HamiltonianSystem {
    Fn3 H;
    Fn3 dH_dx;
    Fn3 dH_dp;

    struct Separable {
        double mass = 1.0;
        Fn1 U;
        Fn1 dU_dx;
    };
    std::optional<Separable> separable;
    std::string name;

    void validate() const {
        if (!H || !dH_dx || !dH_dp)
            throw ConfigurationError("HamiltonianSystem: H and both partials required");
        if (separable && !(separable->mass > 0.0))
            throw ConfigurationError("HamiltonianSystem: mass must be positive");
    }

    /// Worst relative mismatch between H and p^2/2m + U on probe points
    /// (only meaningful when a separable form is declared).
    double probe_separable(std::size_t n_probes = 24, std::uint64_t seed = 0x5e9a7a8eULL) const {
        if (!separable) return 0.0;
        std::uint64_t state = seed;
        double worst = 0.0;
        for (std::size_t p = 0; p < n_probes; ++p) {
            const double x = 4.0 * (detail::unit_double(state) - 0.5);
            const double mom = 4.0 * (detail::unit_double(state) - 0.5);
            const double t = detail::unit_double(state);
            const double split = mom * mom / (2.0 * separable->mass) + separable->U(x);
            const double full = H(x, mom, t);
            worst = std::max(worst, std::abs(full - split) / (1.0 + std::abs(full)));
        }
        return worst;
    }
};

/// Build a separable system from mass and potential.
inline HamiltonianSystem make_separable_system(double mass, Fn1 U, Fn1 dU_dx,
                                               std::string name = "") {
    HamiltonianSystem sys;
    sys.H = [mass, U](double x, double p, double) { return p * p / (2.0 * mass) + U(x); };
    sys.dH_dx = [dU_dx](double x, double, double) { return dU_dx(x); };
    sys.dH_dp = [mass](double, double p, double) { return p / mass; };
    sys.separable = HamiltonianSystem::Separable{mass, std::move(U), std::move(dU_dx)};
    sys.name = std::move(name);
    return sys;
}

/// Time-indexed samples of state, costate (alias momentum) and control.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> states;
    std::vector<double> costates;   // lambda or p
    std::vector<double> controls;   // may be empty

    bool has_controls() const { return !controls.empty(); }
    std::size_t size() const { return times.size(); }

    void validate() const {
        if (states.size() != times.size() || costates.size() != times.size())
            throw ShapeError("Trajectory: column lengths differ");
        if (!controls.empty() && controls.size() != times.size())
            throw ShapeError("Trajectory: control column length differs");
        for (std::size_t k = 0; k + 1 < times.size(); ++k)
            if (!(times[k + 1] > times[k]))
                throw DomainError("Trajectory: times must be strictly increasing");
        for (double v : times)
            if (!std::isfinite(v)) throw DomainError("Trajectory: non-finite time");
        for (double v : states)
            if (!std::isfinite(v)) throw DomainError("Trajectory: non-finite state");
        for (double v : costates)
            if (!std::isfinite(v)) throw DomainError("Trajectory: non-finite costate");
        for (double v : controls)
            if (!std::isfinite(v)) throw DomainError("Trajectory: non-finite control");
    }
};

/// Control or costate strategy in one of the three forms the control
/// formalism distinguishes.
struct OpenLoop {
    std::vector<double> times;
    std::vector<double> values;

    void validate() const {
        if (times.size() != values.size()) throw ShapeError("OpenLoop: column lengths differ");
        for (std::size_t k = 0; k + 1 < times.size(); ++k)
            if (!(times[k + 1] > times[k]))
                throw DomainError("OpenLoop: times must be strictly increasing");
    }
};

struct ControlClosedLoop {
    Fn3 rule;  // u(x, lambda, t)
};

struct CostateClosedLoop {
    ScalarField lam;  // lambda(x,t)
};

using Strategy = std::variant<OpenLoop, ControlClosedLoop, CostateClosedLoop>;

}  // namespace octk
