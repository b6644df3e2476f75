#pragma once

#include <cmath>
#include <string>

#include "octk/core/field.hpp"

namespace octk {

namespace detail {

// Locate a query on a uniform axis. Weights within 1e-9 of a node snap to
// it, so node queries reproduce stored values exactly. Queries up to
// 1e-9*span beyond the ends clamp; anything farther is out of bounds.
struct AxisPos {
    std::size_t lo;
    double w;  // in [0,1]
};

inline AxisPos locate(double q, double lo, double hi, std::size_t n, const char* what) {
    const double span = hi - lo;
    const double slack = 1e-9 * span;
    if (q < lo - slack || q > hi + slack)
        throw DomainError(std::string("interpolate: ") + what + " = " + std::to_string(q) +
                          " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    double s = (q - lo) / span * static_cast<double>(n - 1);
    if (s < 0.0) s = 0.0;
    const double max_s = static_cast<double>(n - 1);
    if (s > max_s) s = max_s;
    auto cell = static_cast<std::size_t>(s);
    if (cell >= n - 1) cell = n - 2;
    double w = s - static_cast<double>(cell);
    if (w < 1e-9) w = 0.0;
    if (w > 1.0 - 1e-9) {
        w = 0.0;
        ++cell;
        if (cell >= n - 1) {
            // exact upper node
            return {n - 2, 1.0};
        }
    }
    return {cell, w};
}

}  // namespace detail

/// Bilinear interpolation on a (x,t) field; linear in x for x-only fields.
/// Exact at grid nodes; no extrapolation.
template <typename T>
T interpolate(const Field<T>& field, double x, double t) {
    const auto& g = field.grid;
    const auto px = detail::locate(x, g.x_min, g.x_max, g.nx, "x");

    if (field.slices() == 1) {
        return field.at(px.lo) * (1.0 - px.w) + field.at(px.lo + 1) * px.w;
    }
    const auto pt = detail::locate(t, g.t0, g.t1, g.nt, "t");
    const T f00 = field.at(px.lo, pt.lo);
    const T f10 = field.at(px.lo + 1, pt.lo);
    const T f01 = field.at(px.lo, pt.lo + 1);
    const T f11 = field.at(px.lo + 1, pt.lo + 1);
    return f00 * (1.0 - px.w) * (1.0 - pt.w) + f10 * px.w * (1.0 - pt.w) +
           f01 * (1.0 - px.w) * pt.w + f11 * px.w * pt.w;
}

}  // namespace octk
