#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/finite_diff.hpp"
#include "octk/core/tridiagonal.hpp"
#include "octk/core/types.hpp"
#include "octk/quantum/system.hpp"

namespace octk::quantum {

/// Bound state of the 3-point discrete Hamiltonian with Dirichlet ends.
/// Phi is L2-normalized with weight dx; the sign is fixed by a positive
/// value at the leftmost antinode.
struct EigenPair {
    double E = 0.0;
    std::vector<double> phi;
    GridSpec grid;
    double residual = 0.0;  // ||H phi - E phi|| on the grid operator
};

namespace detail {

// eigenvalues of (diag, off) strictly below sigma via the Sturm pivot count
inline std::size_t sturm_count(const std::vector<double>& diag, double off, double sigma) {
    std::size_t count = 0;
    const double off2 = off * off;
    double q = diag[0] - sigma;
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        q = (diag[i] - sigma) - off2 / q;
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace detail

/// Lowest `count` eigenpairs of the discrete Hamiltonian, by Sturm-sequence
/// bisection for the eigenvalues and shifted inverse iteration for the
/// eigenvectors. After solving, the grid is validated to resolve every
/// returned state with at least 40 nodes per local de Broglie wavelength.
inline std::vector<EigenPair> stationary_states(const QuantumSystem& system,
                                                const GridSpec& grid, std::size_t count) {
    system.validate();
    grid.validate();
    if (count < 1 || count > 10)
        throw ConfigurationError("stationary_states: count must be between 1 and 10");
    const std::size_t n = grid.nx;
    const double dx = grid.dx();
    const double kin = system.hbar * system.hbar / (2.0 * system.mass * dx * dx);

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 * kin + system.U(grid.x(i));
    const double off = -kin;

    double lo = diag[0], hi = diag[0];
    for (double d : diag) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    lo -= 2.0 * std::abs(off);
    hi += 2.0 * std::abs(off);
    const double scale = std::max(std::abs(lo), std::abs(hi));

    std::vector<double> eigenvalues(count);
    for (std::size_t m = 0; m < count; ++m) {
        double a = lo, b = hi;
        while (b - a > 1e-14 * scale + 1e-300) {
            const double mid = 0.5 * (a + b);
            if (detail::sturm_count(diag, off, mid) >= m + 1)
                b = mid;
            else
                a = mid;
        }
        eigenvalues[m] = 0.5 * (a + b);
    }

    std::vector<EigenPair> states;
    states.reserve(count);
    std::uint64_t rng_state = 0x57a715ULL;  // fixed seed for start vectors
    for (std::size_t m = 0; m < count; ++m) {
        const double shift = eigenvalues[m] + 1e-10 * scale;
        std::vector<double> a_lower(n - 1, off), a_diag(n), a_upper(n - 1, off);
        for (std::size_t i = 0; i < n; ++i) a_diag[i] = diag[i] - shift;

        std::vector<double> v(n);
        for (auto& c : v) c = octk::detail::unit_double(rng_state) - 0.5;
        for (int iter = 0; iter < 4; ++iter) {
            // project out already-found states to keep iterates clean
            for (const auto& prev : states) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += v[i] * prev.phi[i];
                dot *= dx;
                for (std::size_t i = 0; i < n; ++i) v[i] -= dot * prev.phi[i];
            }
            v = solve_tridiagonal(a_lower, a_diag, a_upper, v);
            double nrm = 0.0;
            for (double c : v) nrm += c * c;
            nrm = std::sqrt(nrm * dx);
            for (auto& c : v) c /= nrm;
        }

        // sign convention: positive at the leftmost antinode
        double vmax = 0.0;
        for (double c : v) vmax = std::max(vmax, std::abs(c));
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double c = std::abs(v[i]);
            if (c >= 1e-3 * vmax && c >= std::abs(v[i - 1]) && c >= std::abs(v[i + 1])) {
                if (v[i] < 0.0)
                    for (auto& vv : v) vv = -vv;
                break;
            }
        }

        EigenPair pair;
        pair.E = eigenvalues[m];
        pair.phi = std::move(v);
        pair.grid = grid;
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double hv = diag[i] * pair.phi[i];
            if (i > 0) hv += off * pair.phi[i - 1];
            if (i + 1 < n) hv += off * pair.phi[i + 1];
            const double r = hv - pair.E * pair.phi[i];
            res += r * r;
        }
        pair.residual = std::sqrt(res * dx);
        states.push_back(std::move(pair));
    }

    std::sort(states.begin(), states.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.E < b.E; });

    // post-hoc resolution check: 40 nodes per local de Broglie wavelength
    for (std::size_t m = 0; m < states.size(); ++m) {
        double p_max = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double kinetic = states[m].E - system.U(grid.x(i));
            if (kinetic > 0.0) p_max = std::max(p_max, std::sqrt(2.0 * system.mass * kinetic));
        }
        if (p_max > 0.0) {
            const double wavelength = 2.0 * std::numbers::pi * system.hbar / p_max;
            if (dx > wavelength / 40.0)
                throw GridResolutionError(
                    "stationary_states: grid cannot resolve state " + std::to_string(m) +
                    " (need dx <= " + std::to_string(wavelength / 40.0) + ")");
        }
    }
    return states;
}

/// Stationary complex action S(x,t) = W(x) - E t with W = -i hbar ln(Phi),
/// plus the attached closed-loop strategy field dW/dx. Nodes of Phi below
/// the magnitude floor are masked, exactly as in the time-dependent
/// extraction.
struct StationaryAction {
    Field<cplx> S;      // over (x,t)
    Field<cplx> W;      // over x
    Field<cplx> dW_dx;  // over x
};

inline StationaryAction stationary_action(const EigenPair& pair, double hbar,
                                          const GridSpec& t_range) {
    if (!(hbar > 0.0)) throw ConfigurationError("stationary_action: hbar must be positive");
    GridSpec g = pair.grid;
    g.t0 = t_range.t0;
    g.t1 = t_range.t1;
    g.nt = t_range.nt;
    g.validate();

    double vmax = 0.0;
    for (double c : pair.phi) vmax = std::max(vmax, std::abs(c));
    if (vmax == 0.0) throw DegenerateStateError("stationary_action: zero eigenvector");
    const double floor = 1e-8 * vmax;

    StationaryAction out;
    out.W = Field<cplx>::over_x(g);
    out.W.ensure_mask();
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double c = pair.phi[i];
        if (std::abs(c) < floor) {
            out.W.invalidate(i);
            continue;
        }
        // -i hbar ln(phi): a negative lobe carries the principal branch
        // phase pi
        const double re = (c < 0.0) ? hbar * std::numbers::pi : 0.0;
        out.W.at(i) = cplx{re, -hbar * std::log(std::abs(c))};
    }
    out.dW_dx = fd_partial(out.W, Axis::Space);

    out.S = Field<cplx>::over_xt(g);
    out.S.ensure_mask();
    for (std::size_t k = 0; k < g.nt; ++k) {
        const double t = g.t(k);
        for (std::size_t i = 0; i < g.nx; ++i) {
            if (out.W.valid(i))
                out.S.at(i, k) = out.W.at(i) - cplx{pair.E * t, 0.0};
            else
                out.S.invalidate(i, k);
        }
    }
    return out;
}

}  // namespace octk::quantum
