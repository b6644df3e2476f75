#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/tridiagonal.hpp"
#include "octk/quantum/system.hpp"

namespace octk::quantum {

struct CnEvolution {
    WaveField psi;
    double max_boundary_density = 0.0;
    bool boundary_warning = false;  // boundary density exceeded 1e-8 at some time
};

/// Crank-Nicolson propagation of the Schrodinger equation with the 3-point
/// discrete Hamiltonian and Dirichlet ends:
///   (1 + i dt H_d / 2 hbar) psi_{k+1} = (1 - i dt H_d / 2 hbar) psi_k.
/// Each step is one tridiagonal solve; the Cayley form preserves the
/// discrete norm to solver accuracy. The output field stores every
/// `store_every`-th step on the grid's time axis, so the internal step is
/// grid.dt() / store_every.
inline CnEvolution crank_nicolson_evolve(const Field<cplx>& psi0, const QuantumSystem& system,
                                         const GridSpec& grid, std::size_t store_every = 1) {
    system.validate();
    grid.validate();
    if (store_every < 1)
        throw ConfigurationError("crank_nicolson_evolve: store_every must be >= 1");
    if (psi0.slices() != 1)
        throw ConfigurationError("crank_nicolson_evolve: initial state must be a single slice");
    if (psi0.grid.nx != grid.nx || psi0.grid.x_min != grid.x_min ||
        psi0.grid.x_max != grid.x_max)
        throw ShapeError("crank_nicolson_evolve: initial state grid mismatch");

    const std::size_t nx = grid.nx;
    const double dx = grid.dx();
    const double dt = grid.dt() / static_cast<double>(store_every);
    const double kin = system.hbar * system.hbar / (2.0 * system.mass * dx * dx);

    // H_d bands
    std::vector<double> h_diag(nx);
    for (std::size_t i = 0; i < nx; ++i) h_diag[i] = 2.0 * kin + system.U(grid.x(i));
    const double h_off = -kin;

    const cplx half_step = cplx{0.0, 1.0} * (dt / (2.0 * system.hbar));
    std::vector<cplx> a_lower(nx - 1, half_step * h_off), a_diag(nx),
        a_upper(nx - 1, half_step * h_off);
    for (std::size_t i = 0; i < nx; ++i) a_diag[i] = 1.0 + half_step * h_diag[i];

    CnEvolution out;
    out.psi.psi = Field<cplx>::over_xt(grid);
    std::vector<cplx> cur(nx), rhs(nx);
    for (std::size_t i = 0; i < nx; ++i) cur[i] = psi0.at(i);

    auto record = [&](std::size_t slice) {
        double bdens = std::norm(cur.front()) + std::norm(cur.back());
        out.max_boundary_density = std::max(out.max_boundary_density, bdens);
        for (std::size_t i = 0; i < nx; ++i) out.psi.psi.at(i, slice) = cur[i];
    };
    record(0);

    for (std::size_t slice = 1; slice < grid.nt; ++slice) {
        for (std::size_t sub = 0; sub < store_every; ++sub) {
            // rhs = (1 - i dt H_d / 2 hbar) cur
            for (std::size_t i = 0; i < nx; ++i) {
                cplx acc = (1.0 - half_step * h_diag[i]) * cur[i];
                if (i > 0) acc -= half_step * h_off * cur[i - 1];
                if (i + 1 < nx) acc -= half_step * h_off * cur[i + 1];
                rhs[i] = acc;
            }
            cur = solve_tridiagonal(a_lower, a_diag, a_upper, rhs);
        }
        record(slice);
    }
    out.boundary_warning = out.max_boundary_density > 1e-8;
    return out;
}

}  // namespace octk::quantum
