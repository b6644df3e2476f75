#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/grid.hpp"

namespace octk {

using cplx = std::complex<double>;

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

/// Grid function over (x,t) or over x alone (slices() == 1).
/// Storage is slice-major: index = k*nx + i. An empty mask means every
/// node is valid; otherwise mask[k*nx+i] == 0 marks a node whose value
/// must not be read.
template <typename T>
struct Field {
    GridSpec grid;
    std::size_t time_slices = 1;
    std::vector<T> values;
    std::vector<std::uint8_t> mask;  // empty => all valid

    Field() = default;

    Field(const GridSpec& g, std::size_t slices, T fill = T{})
        : grid(g), time_slices(slices), values(g.nx * slices, fill) {
        grid.validate();
        if (slices != 1 && slices != g.nt)
            throw ShapeError("Field: slice count must be 1 or grid.nt");
    }

    static Field over_xt(const GridSpec& g, T fill = T{}) { return Field(g, g.nt, fill); }
    static Field over_x(const GridSpec& g, T fill = T{}) { return Field(g, 1, fill); }

    std::size_t nx() const { return grid.nx; }
    std::size_t slices() const { return time_slices; }
    std::size_t size() const { return values.size(); }

    T& at(std::size_t i, std::size_t k = 0) { return values[k * grid.nx + i]; }
    const T& at(std::size_t i, std::size_t k = 0) const { return values[k * grid.nx + i]; }

    bool valid(std::size_t i, std::size_t k = 0) const {
        return mask.empty() || mask[k * grid.nx + i] != 0;
    }

    void ensure_mask() {
        if (mask.empty()) mask.assign(values.size(), 1);
    }

    void invalidate(std::size_t i, std::size_t k = 0) {
        ensure_mask();
        mask[k * grid.nx + i] = 0;
    }

    double coverage() const {
        if (mask.empty()) return 1.0;
        std::size_t n = 0;
        for (auto m : mask) n += (m != 0);
        return static_cast<double>(n) / static_cast<double>(mask.size());
    }

    /// All valid entries finite?
    bool finite() const {
        for (std::size_t idx = 0; idx < values.size(); ++idx) {
            if ((mask.empty() || mask[idx]) && !is_finite(values[idx])) return false;
        }
        return true;
    }

    template <typename F>
    void fill_with(F&& fn) {
        for (std::size_t k = 0; k < time_slices; ++k) {
            double t = (time_slices == 1) ? grid.t0 : grid.t(k);
            for (std::size_t i = 0; i < grid.nx; ++i) at(i, k) = fn(grid.x(i), t);
        }
    }
};

using ScalarField = Field<double>;
using ComplexField = Field<cplx>;

/// Complex wave function over (x,t); discrete L2 norm uses weight dx.
struct WaveField {
    Field<cplx> psi;

    const GridSpec& grid() const { return psi.grid; }
    std::size_t nx() const { return psi.nx(); }
    std::size_t slices() const { return psi.slices(); }

    double norm(std::size_t k) const {
        double s = 0.0;
        for (std::size_t i = 0; i < psi.nx(); ++i) s += std::norm(psi.at(i, k));
        return std::sqrt(s * psi.grid.dx());
    }
};

}  // namespace octk
