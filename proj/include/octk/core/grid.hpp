#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "octk/core/errors.hpp"

namespace octk {

/// Uniform rectangular grid over state x and time t.
struct GridSpec {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t nx = 3;
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t nt = 2;

    double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double dt() const { return (t1 - t0) / static_cast<double>(nt - 1); }

    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    double t(std::size_t k) const { return t0 + static_cast<double>(k) * dt(); }

    void validate() const {
        if (nx < 3)
            throw DegenerateGridError("GridSpec: nx must be >= 3, got " + std::to_string(nx));
        if (nt < 2)
            throw DegenerateGridError("GridSpec: nt must be >= 2, got " + std::to_string(nt));
        if (!(x_max > x_min))
            throw DegenerateGridError("GridSpec: x_max must exceed x_min");
        if (!(t1 > t0))
            throw DegenerateGridError("GridSpec: t1 must exceed t0");
    }

    bool same_as(const GridSpec& o) const {
        return x_min == o.x_min && x_max == o.x_max && nx == o.nx &&
               t0 == o.t0 && t1 == o.t1 && nt == o.nt;
    }
};

/// Halve both spacings, keeping the same extents (nx,nt -> 2nx-1, 2nt-1).
inline GridSpec refine(const GridSpec& g) {
    GridSpec r = g;
    r.nx = 2 * g.nx - 1;
    r.nt = 2 * g.nt - 1;
    return r;
}

}  // namespace octk
