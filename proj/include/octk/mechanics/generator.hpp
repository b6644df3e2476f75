#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/root_find.hpp"
#include "octk/core/types.hpp"

namespace octk::mechanics {

/// Analytic S-type generating function S(x,P,t) of a canonical
/// transformation to constants of motion, with its exact partials. The
/// transformation is rebuilt through p = dS/dx and Q = dS/dP; a constant
/// P-line yields a genuine closed-loop momentum strategy p(x,t) =
/// dS/dx(x,P0,t), while a constant Q-line alone determines trajectories but
/// never a momentum field (there is deliberately no operation that builds
/// one from it).
struct GeneratorFamily {
    std::function<double(double, double, double)> S;      // (x,P,t)
    std::function<double(double, double, double)> dS_dx;
    std::function<double(double, double, double)> dS_dP;
    std::function<bool(double, double)> defined;          // (P,t) away from singular times
    std::string singular_times;
    std::string name;

    void require_defined(double P, double t) const {
        if (!defined(P, t))
            throw SingularityError(name + ": generating function undefined at P = " +
                                   std::to_string(P) + ", t = " + std::to_string(t) +
                                   " (singular set: " + singular_times + ")");
    }

    double eval(double x, double P, double t) const {
        require_defined(P, t);
        return S(x, P, t);
    }
    double eval_dx(double x, double P, double t) const {
        require_defined(P, t);
        return dS_dx(x, P, t);
    }
    double eval_dP(double x, double P, double t) const {
        require_defined(P, t);
        return dS_dP(x, P, t);
    }
};

/// Level set of one transformed coordinate, acting as a phase-space
/// constraint for the original observer.
struct ConstantLine {
    enum class Kind { PLine, QLine };
    Kind kind;
    double level;
};

/// Free particle: S(x,P,t) = -x^2 / (2 (P - t/m)), singular at t = m P.
inline GeneratorFamily free_particle_generator(double P0, double m) {
    if (!(m > 0.0)) throw ConfigurationError("free_particle_generator: mass must be positive");
    GeneratorFamily gen;
    gen.S = [m](double x, double P, double t) { return -x * x / (2.0 * (P - t / m)); };
    gen.dS_dx = [m](double x, double P, double t) { return -x / (P - t / m); };
    gen.dS_dP = [m](double x, double P, double t) {
        const double d = P - t / m;
        return x * x / (2.0 * d * d);
    };
    gen.defined = [m](double P, double t) {
        return std::abs(P - t / m) > 1e-12 * (1.0 + std::abs(P) + std::abs(t / m));
    };
    gen.singular_times = "t = m P (for the reference line, t = " + std::to_string(m * P0) + ")";
    gen.name = "free-particle generator";
    return gen;
}

/// Harmonic oscillator: S(x,P,t) = (m w x^2 / 2) tan(w (P - t)), singular
/// where cos(w (P - t)) = 0. Solves the oscillator Hamilton-Jacobi equation
/// exactly, which the tests confirm by quadrature-level residual checks.
inline GeneratorFamily harmonic_generator(double m, double omega) {
    if (!(m > 0.0) || !(omega > 0.0))
        throw ConfigurationError("harmonic_generator: mass and frequency must be positive");
    GeneratorFamily gen;
    gen.S = [m, omega](double x, double P, double t) {
        return 0.5 * m * omega * x * x * std::tan(omega * (P - t));
    };
    gen.dS_dx = [m, omega](double x, double P, double t) {
        return m * omega * x * std::tan(omega * (P - t));
    };
    gen.dS_dP = [m, omega](double x, double P, double t) {
        const double c = std::cos(omega * (P - t));
        return 0.5 * m * omega * omega * x * x / (c * c);
    };
    gen.defined = [omega](double P, double t) {
        return std::abs(std::cos(omega * (P - t))) > 1e-9;
    };
    gen.singular_times = "w (P - t) = pi/2 + k pi";
    gen.name = "harmonic generator";
    return gen;
}

/// The closed-loop momentum strategy generated by a constant P-line:
/// p(x,t) = dS/dx(x, P0, t).
inline std::function<double(double, double)> p_line_strategy(const GeneratorFamily& gen,
                                                             double P0) {
    return [gen, P0](double x, double t) { return gen.eval_dx(x, P0, t); };
}

namespace detail {

inline double first_reconstruction_root(const GeneratorFamily& gen, double P0, double Q0,
                                        double t) {
    auto g = [&](double x) { return gen.eval_dP(x, P0, t) - Q0; };
    // scan the positive half-axis first; the positive root is the catalog
    // convention for sqrt(2 Q0)-type lines
    const double reach = 4.0 * (1.0 + std::sqrt(2.0 * std::abs(Q0)));
    constexpr int n_scan = 65;
    for (int half = 0; half < 2; ++half) {
        const double sign = (half == 0) ? 1.0 : -1.0;
        double prev_x = 0.0;
        double prev_g = g(0.0);
        for (int j = 1; j < n_scan; ++j) {
            const double x = sign * reach * static_cast<double>(j) / (n_scan - 1);
            const double cur = g(x);
            if (std::isfinite(cur) && std::isfinite(prev_g) && prev_g * cur <= 0.0)
                return root_find_1d(g, Bracket{prev_x, x}, 1e-12);
            prev_x = x;
            prev_g = cur;
        }
    }
    throw ReconstructionError("reconstruct_from_constant_line: no starting root", t);
}

}  // namespace detail

/// Rebuild the first-observer trajectory from the two constant coordinate
/// lines: solve Q0 = dS/dP(x, P0, t) for x(t) and read the momentum off the
/// P-line, p(t) = dS/dx(x(t), P0, t). The root solve continues from the
/// previous time's solution; an optional explicit seed overrides the
/// positive-root scan at the first time.
inline Trajectory reconstruct_from_constant_line(const GeneratorFamily& gen, double P0,
                                                 double Q0, const std::vector<double>& times,
                                                 std::optional<double> x0_seed = std::nullopt) {
    if (times.empty())
        throw ConfigurationError("reconstruct_from_constant_line: empty time list");

    Trajectory traj;
    traj.times.reserve(times.size());
    traj.states.reserve(times.size());
    traj.costates.reserve(times.size());

    bool have_prev = false;
    double x_prev = 0.0;
    for (double t : times) {
        gen.require_defined(P0, t);
        auto g = [&](double x) { return gen.eval_dP(x, P0, t) - Q0; };
        double x;
        try {
            if (!have_prev) {
                x = x0_seed ? root_find_1d(g, SeedPair{*x0_seed, *x0_seed * (1.0 + 1e-4) + 1e-6},
                                           1e-12)
                            : detail::first_reconstruction_root(gen, P0, Q0, t);
            } else {
                x = root_find_1d(g, SeedPair{x_prev, x_prev * (1.0 + 1e-4) + 1e-6}, 1e-12);
            }
        } catch (const NoConvergenceError&) {
            throw ReconstructionError("reconstruct_from_constant_line: root solve failed", t);
        } catch (const ConfigurationError&) {
            throw ReconstructionError("reconstruct_from_constant_line: root solve failed", t);
        }
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.costates.push_back(gen.eval_dx(x, P0, t));
        x_prev = x;
        have_prev = true;
    }
    traj.validate();
    return traj;
}

}  // namespace octk::mechanics
