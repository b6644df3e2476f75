#pragma once

#include <cmath>
#include <functional>

#include "octk/core/errors.hpp"

namespace octk {

struct MaxResult {
    double arg;
    double value;
};

/// Maximize g over [lo, hi]: coarse scan over 8 equally spaced seeds, then
/// golden-section refinement in the bracket around the best seed. For a
/// unimodal g the argmax is located within tol; for multimodal g the result
/// is a local maximum no worse than the best scan seed.
inline MaxResult maximize_scalar(const std::function<double(double)>& g, double lo, double hi,
                                 double tol) {
    if (!(lo < hi)) throw ConfigurationError("maximize_scalar: need lo < hi");
    if (!(tol > 0.0)) throw ConfigurationError("maximize_scalar: need tol > 0");

    auto eval = [&](double u) {
        const double v = g(u);
        if (!std::isfinite(v)) throw EvaluationError("maximize_scalar: non-finite objective", u);
        return v;
    };

    constexpr int n_seeds = 8;
    double best_u = lo;
    double best_v = eval(lo);
    int best_j = 0;
    for (int j = 1; j < n_seeds; ++j) {
        const double u = lo + (hi - lo) * static_cast<double>(j) / (n_seeds - 1);
        const double v = eval(u);
        if (v > best_v) {
            best_v = v;
            best_u = u;
            best_j = j;
        }
    }

    const double step = (hi - lo) / (n_seeds - 1);
    double a = std::max(lo, best_u - step);
    double b = std::min(hi, best_u + step);
    (void)best_j;

    // golden-section search for the maximum
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
        }
    }

    const double u_mid = 0.5 * (a + b);
    const double v_mid = eval(u_mid);
    MaxResult r{u_mid, v_mid};
    if (f1 > r.value) r = {x1, f1};
    if (f2 > r.value) r = {x2, f2};
    if (best_v > r.value) r = {best_u, best_v};
    return r;
}

}  // namespace octk
