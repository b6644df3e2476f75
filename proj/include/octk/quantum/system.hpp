#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/types.hpp"

namespace octk::quantum {

/// Non-relativistic particle on a line. hbar is a scenario parameter, not a
/// physical constant; the catalog works in m = 1 scaled units.
struct QuantumSystem {
    double mass = 1.0;
    Fn1 U;
    double hbar = 1.0;
    std::string name;

    void validate() const {
        if (!(mass > 0.0)) throw ConfigurationError("QuantumSystem: mass must be positive");
        if (!(hbar > 0.0)) throw ConfigurationError("QuantumSystem: hbar must be positive");
        if (!U) throw ConfigurationError("QuantumSystem: potential required");
    }
};

inline QuantumSystem make_free_particle(double mass = 1.0, double hbar = 1.0) {
    return {mass, [](double) { return 0.0; }, hbar, "free"};
}

inline QuantumSystem make_harmonic(double mass = 1.0, double omega = 1.0, double hbar = 1.0) {
    return {mass,
            [mass, omega](double x) { return 0.5 * mass * omega * omega * x * x; },
            hbar,
            "harmonic"};
}

/// Normalized Gaussian packet exp(-(x-x_c)^2/(4 sigma^2) + i p0 x / hbar),
/// renormalized to unit discrete norm. The support must clear the grid ends
/// by at least five widths.
inline Field<cplx> gaussian_packet(const GridSpec& grid, double x_c, double sigma, double p0,
                                   const QuantumSystem& system) {
    system.validate();
    grid.validate();
    if (!(sigma > 0.0)) throw ConfigurationError("gaussian_packet: sigma must be positive");
    if (x_c - 5.0 * sigma < grid.x_min || x_c + 5.0 * sigma > grid.x_max)
        throw ConfigurationError("gaussian_packet: support closer than 5 sigma to a boundary");

    auto psi = Field<cplx>::over_x(grid);
    const double amp = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    for (std::size_t i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        const double envelope = amp * std::exp(-(x - x_c) * (x - x_c) / (4.0 * sigma * sigma));
        psi.at(i) = std::polar(envelope, p0 * x / system.hbar);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < grid.nx; ++i) nrm += std::norm(psi.at(i));
    nrm = std::sqrt(nrm * grid.dx());
    for (std::size_t i = 0; i < grid.nx; ++i) psi.at(i) /= nrm;
    return psi;
}

/// Unnormalized plane wave exp(i p0 x / hbar): unit magnitude everywhere.
inline Field<cplx> momentum_eigenstate(const GridSpec& grid, double p0,
                                       const QuantumSystem& system) {
    system.validate();
    grid.validate();
    auto psi = Field<cplx>::over_x(grid);
    for (std::size_t i = 0; i < grid.nx; ++i)
        psi.at(i) = std::polar(1.0, p0 * grid.x(i) / system.hbar);
    return psi;
}

}  // namespace octk::quantum
