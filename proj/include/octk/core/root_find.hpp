#pragma once

#include <cmath>
#include <functional>

#include "octk/core/errors.hpp"

namespace octk {

struct Bracket {
    double lo;
    double hi;
};

struct SeedPair {
    double a;
    double b;
};

namespace detail {

inline double checked_eval(const std::function<double(double)>& g, double z) {
    const double v = g(z);
    if (!std::isfinite(v)) throw EvaluationError("root_find_1d: non-finite function value", z);
    return v;
}

}  // namespace detail

/// Bisection on a sign-change bracket; guaranteed for continuous g.
inline double root_find_1d(const std::function<double(double)>& g, Bracket br, double tol) {
    if (!(tol > 0.0)) throw ConfigurationError("root_find_1d: need tol > 0");
    double a = br.lo, b = br.hi;
    double fa = detail::checked_eval(g, a);
    double fb = detail::checked_eval(g, b);
    if (std::abs(fa) <= tol) return a;
    if (std::abs(fb) <= tol) return b;
    if (fa * fb > 0.0)
        throw ConfigurationError("root_find_1d: bracket endpoints have the same sign");

    double best = std::abs(fa) < std::abs(fb) ? a : b;
    double best_f = std::min(std::abs(fa), std::abs(fb));
    for (int iter = 0; iter < 200; ++iter) {
        const double m = 0.5 * (a + b);
        const double fm = detail::checked_eval(g, m);
        if (std::abs(fm) < best_f) {
            best = m;
            best_f = std::abs(fm);
        }
        if (std::abs(fm) <= tol) return m;
        if (fa * fm <= 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
        (void)fb;
    }
    throw NoConvergenceError("root_find_1d: bisection stalled above tolerance", best, best_f);
}

/// Secant iteration from a seed pair. Switches to bisection if the iterates
/// ever straddle a sign change.
inline double root_find_1d(const std::function<double(double)>& g, SeedPair seeds, double tol) {
    if (!(tol > 0.0)) throw ConfigurationError("root_find_1d: need tol > 0");
    double x0 = seeds.a, x1 = seeds.b;
    double f0 = detail::checked_eval(g, x0);
    if (std::abs(f0) <= tol) return x0;
    double f1 = detail::checked_eval(g, x1);
    if (std::abs(f1) <= tol) return x1;
    if (f0 * f1 < 0.0) return root_find_1d(g, Bracket{x0, x1}, tol);

    double best = std::abs(f0) < std::abs(f1) ? x0 : x1;
    double best_f = std::min(std::abs(f0), std::abs(f1));
    for (int iter = 0; iter < 200; ++iter) {
        const double denom = f1 - f0;
        if (denom == 0.0)
            throw NoConvergenceError("root_find_1d: flat secant", best, best_f);
        const double x2 = x1 - f1 * (x1 - x0) / denom;
        if (!std::isfinite(x2))
            throw NoConvergenceError("root_find_1d: secant diverged", best, best_f);
        const double f2 = g(x2);
        if (!std::isfinite(f2))
            throw NoConvergenceError("root_find_1d: secant left the finite domain", best,
                                     best_f);
        if (std::abs(f2) < best_f) {
            best = x2;
            best_f = std::abs(f2);
        }
        if (std::abs(f2) <= tol) return x2;
        if (f1 * f2 < 0.0) return root_find_1d(g, Bracket{x1, x2}, tol);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    throw NoConvergenceError("root_find_1d: secant did not converge in 200 iterations", best,
                             best_f);
}

}  // namespace octk
