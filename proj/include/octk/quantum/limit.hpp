#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/finite_diff.hpp"
#include "octk/quantum/evolve.hpp"
#include "octk/quantum/phase.hpp"
#include "octk/quantum/system.hpp"

namespace octk::quantum {

/// Semiclassical sweep scenario: a Gaussian envelope carrying the phase of
/// a classical action solution, evolved at each hbar and compared against
/// the classical momentum field on a window that follows the packet. The
/// envelope width sigma is held fixed across rows so the quantum chirp
/// shrinks with hbar (scaling sigma with sqrt(hbar) would keep the
/// extracted momentum error hbar-independent for quadratic problems and
/// defeat the comparison).
struct ClassicalLimitScenario {
    double mass = 1.0;
    Fn1 U;
    GridSpec grid;
    double sigma = 0.5;
    double x_c = 0.0;
    std::function<double(double)> initial_phase;              // S_cl(x, t0)
    std::function<double(double, double)> classical_momentum; // p_cl(x,t)
    std::function<double(double)> center_path;                // packet center x(t)
    double window_halfwidth = 1.0;
    std::size_t store_every = 1;
};

struct SweepRow {
    double hbar;
    double discrepancy;         // sup |Re S_x - p_cl| on the window
    double quantum_correction;  // sup |(hbar/2m) S_xx| on the window
};

inline std::vector<SweepRow> classical_limit_sweep(const ClassicalLimitScenario& scenario,
                                                   const std::vector<double>& hbar_list) {
    if (hbar_list.size() < 2)
        throw ConfigurationError("classical_limit_sweep: need at least two hbar values");
    for (std::size_t j = 0; j < hbar_list.size(); ++j) {
        if (!(hbar_list[j] > 0.0))
            throw ConfigurationError("classical_limit_sweep: hbar values must be positive");
        if (j > 0 && !(hbar_list[j] < hbar_list[j - 1]))
            throw ConfigurationError("classical_limit_sweep: hbar list must decrease");
    }
    if (!scenario.U || !scenario.initial_phase || !scenario.classical_momentum ||
        !scenario.center_path)
        throw ConfigurationError("classical_limit_sweep: scenario functions required");

    std::vector<SweepRow> rows;
    rows.reserve(hbar_list.size());
    const GridSpec& g = scenario.grid;

    for (double hbar : hbar_list) {
        QuantumSystem system{scenario.mass, scenario.U, hbar, "sweep"};

        // WKB-prepared state: fixed Gaussian envelope times the classical
        // phase at t0
        auto psi0 = Field<cplx>::over_x(g);
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double x = g.x(i);
            const double env =
                std::exp(-(x - scenario.x_c) * (x - scenario.x_c) /
                         (4.0 * scenario.sigma * scenario.sigma));
            psi0.at(i) = std::polar(env, scenario.initial_phase(x) / hbar);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < g.nx; ++i) nrm += std::norm(psi0.at(i));
        nrm = std::sqrt(nrm * g.dx());
        for (std::size_t i = 0; i < g.nx; ++i) psi0.at(i) /= nrm;

        const auto evolved = crank_nicolson_evolve(psi0, system, g, scenario.store_every);
        const auto S = phase_action(evolved.psi, hbar);
        const auto Sx = fd_partial(S, Axis::Space);
        const auto Sxx = fd_second_space(S);

        SweepRow row{hbar, 0.0, 0.0};
        for (std::size_t k = 0; k < g.nt; ++k) {
            const double center = scenario.center_path(g.t(k));
            for (std::size_t i = 0; i < g.nx; ++i) {
                const double x = g.x(i);
                if (std::abs(x - center) > scenario.window_halfwidth) continue;
                if (Sx.valid(i, k)) {
                    const double d =
                        std::abs(Sx.at(i, k).real() - scenario.classical_momentum(x, g.t(k)));
                    row.discrepancy = std::max(row.discrepancy, d);
                }
                if (Sxx.valid(i, k)) {
                    row.quantum_correction =
                        std::max(row.quantum_correction,
                                 std::abs(Sxx.at(i, k)) * hbar / (2.0 * scenario.mass));
                }
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace octk::quantum
