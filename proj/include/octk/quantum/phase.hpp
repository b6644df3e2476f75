#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/finite_diff.hpp"
#include "octk/core/residual.hpp"
#include "octk/core/unwrap.hpp"
#include "octk/quantum/system.hpp"

namespace octk::quantum {

/// Complex logarithm of a grid field, scaled so W = exp(i out / hbar):
/// Re out is the phase, unwrapped along x within each contiguous unmasked
/// run and anchored at the principal value; Im out = -hbar ln|W|. Slices
/// are stitched in time by matching Re out at the node nearest the grid
/// center, where the catalog states stay interior. Nodes below
/// 1e-8 max|W| are masked.
inline Field<cplx> complex_log_field(const Field<cplx>& W, double hbar) {
    if (!(hbar > 0.0)) throw ConfigurationError("complex_log_field: hbar must be positive");
    double wmax = 0.0;
    for (std::size_t idx = 0; idx < W.values.size(); ++idx) {
        const std::size_t i = idx % W.nx();
        const std::size_t k = idx / W.nx();
        if (W.valid(i, k)) wmax = std::max(wmax, std::abs(W.values[idx]));
    }
    if (wmax == 0.0) throw DegenerateStateError("complex_log_field: field vanishes everywhere");
    const double floor = 1e-8 * wmax;

    const std::size_t nx = W.nx();
    const std::size_t ns = W.slices();
    Field<cplx> out(W.grid, ns);
    out.ensure_mask();

    std::vector<cplx> run;
    for (std::size_t k = 0; k < ns; ++k) {
        std::size_t n_valid = 0;
        auto usable = [&](std::size_t i) {
            return W.valid(i, k) && std::abs(W.at(i, k)) >= floor;
        };
        for (std::size_t i = 0; i < nx;) {
            if (!usable(i)) {
                out.invalidate(i, k);
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < nx && usable(j)) ++j;
            run.assign(W.values.begin() + static_cast<std::ptrdiff_t>(k * nx + i),
                       W.values.begin() + static_cast<std::ptrdiff_t>(k * nx + j));
            const auto theta = unwrap_phase(run);
            for (std::size_t r = 0; r < run.size(); ++r) {
                out.at(i + r, k) =
                    cplx{hbar * theta[r], -hbar * std::log(std::abs(run[r]))};
                ++n_valid;
            }
            i = j;
        }
        if (n_valid == 0)
            throw DegenerateStateError("complex_log_field: slice " + std::to_string(k) +
                                       " fully masked");
    }

    // time stitching: keep the real part continuous at the center column
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const std::size_t ic = nx / 2;
    for (std::size_t k = 1; k < ns; ++k) {
        std::size_t anchor = nx;  // invalid
        for (std::size_t off = 0; off < nx; ++off) {
            if (ic + off < nx && out.valid(ic + off, k) && out.valid(ic + off, k - 1)) {
                anchor = ic + off;
                break;
            }
            if (off > 0 && ic >= off && out.valid(ic - off, k) && out.valid(ic - off, k - 1)) {
                anchor = ic - off;
                break;
            }
        }
        if (anchor == nx) continue;  // no shared column; leave branch as is
        const double diff = out.at(anchor, k - 1).real() - out.at(anchor, k).real();
        const double shift = two_pi * hbar * std::round(diff / (two_pi * hbar));
        if (shift != 0.0) {
            for (std::size_t i = 0; i < nx; ++i)
                if (out.valid(i, k)) out.at(i, k) += cplx{shift, 0.0};
        }
    }
    return out;
}

/// Complex action of a wave function: Psi = exp(i S / hbar) nodewise, with
/// Re S the unwrapped phase action and Im S = -hbar ln|Psi|.
inline Field<cplx> phase_action(const WaveField& psi, double hbar) {
    return complex_log_field(psi.psi, hbar);
}

inline Field<cplx> phase_action(const Field<cplx>& psi, double hbar) {
    return complex_log_field(psi, hbar);
}

/// Local momentum eigenvalue field p(x,t) = -i hbar (d Psi/dx) / Psi. The
/// momentum operator is diagonal on any state written as exp(i S / hbar),
/// and this field equals dS/dx up to discretization (cross-checked in the
/// test suite).
inline Field<cplx> momentum_field(const Field<cplx>& psi, double hbar) {
    if (!(hbar > 0.0)) throw ConfigurationError("momentum_field: hbar must be positive");
    double wmax = 0.0;
    for (const auto& v : psi.values) wmax = std::max(wmax, std::abs(v));
    if (wmax == 0.0) throw DegenerateStateError("momentum_field: field vanishes everywhere");
    const double floor = 1e-8 * wmax;

    Field<cplx> masked = psi;
    for (std::size_t k = 0; k < psi.slices(); ++k)
        for (std::size_t i = 0; i < psi.nx(); ++i)
            if (!psi.valid(i, k) || std::abs(psi.at(i, k)) < floor) masked.invalidate(i, k);

    Field<cplx> dpsi = fd_partial(masked, Axis::Space);
    Field<cplx> p = dpsi;
    const cplx scale{0.0, -hbar};
    for (std::size_t k = 0; k < p.slices(); ++k)
        for (std::size_t i = 0; i < p.nx(); ++i)
            if (p.valid(i, k)) p.at(i, k) = scale * dpsi.at(i, k) / masked.at(i, k);
    return p;
}

inline Field<cplx> momentum_field(const WaveField& psi, double hbar) {
    return momentum_field(psi.psi, hbar);
}

/// Defect of the quantum Hamilton-Jacobi equation
///   (1/2m)(S_x)^2 + U - (i hbar / 2m) S_xx + S_t = 0,
/// which is the Schrodinger equation rewritten for the complex action.
inline ResidualReport quantum_hj_residual(const Field<cplx>& S, const QuantumSystem& system) {
    system.validate();
    if (S.slices() < 3)
        throw DegenerateGridError("quantum_hj_residual: need >= 3 time slices");
    const Field<cplx> sx = fd_partial(S, Axis::Space);
    const Field<cplx> sxx = fd_second_space(S);
    const Field<cplx> st = fd_partial(S, Axis::Time);

    Field<cplx> e = S;
    e.ensure_mask();
    const cplx iq{0.0, system.hbar / (2.0 * system.mass)};
    for (std::size_t k = 0; k < S.slices(); ++k) {
        for (std::size_t i = 0; i < S.nx(); ++i) {
            if (sx.valid(i, k) && sxx.valid(i, k) && st.valid(i, k)) {
                const cplx g = sx.at(i, k);
                e.at(i, k) = g * g / (2.0 * system.mass) + system.U(S.grid.x(i)) -
                             iq * sxx.at(i, k) + st.at(i, k);
            } else {
                e.invalidate(i, k);
            }
        }
    }
    return summarize_residual(e);
}

}  // namespace octk::quantum
