#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/finite_diff.hpp"
#include "octk/core/residual.hpp"
#include "octk/quantum/phase.hpp"

namespace octk::quantum {

/// Iterated complex-logarithm representation of a wave function,
/// Psi = exp((i/hbar) exp((i/hbar) exp((i/hbar) . ))). Level 1 is the
/// ordinary complex action S; level 2 treats S itself as a wave function
/// (its evolution equation in the strong-quantum regime is again of
/// Schrodinger type) and extracts T with the same masked logarithm; level 3
/// repeats the step. The paper's symbol for the third level collides with
/// the potential, so it is called third_level here. Each level's mask nests
/// inside its parent's.
struct PhaseTower {
    std::vector<Field<cplx>> levels;  // [S, T, third_level], up to depth
    double hbar = 1.0;

    const Field<cplx>& S() const { return levels.at(0); }
    const Field<cplx>& T() const { return levels.at(1); }
    const Field<cplx>& third_level() const { return levels.at(2); }
    int depth() const { return static_cast<int>(levels.size()); }
};

inline PhaseTower phase_tower(const Field<cplx>& psi, double hbar, int depth) {
    if (depth < 1 || depth > 3)
        throw ConfigurationError("phase_tower: depth must be 1, 2 or 3");
    PhaseTower tower;
    tower.hbar = hbar;
    const Field<cplx>* source = &psi;
    for (int level = 1; level <= depth; ++level) {
        try {
            tower.levels.push_back(complex_log_field(*source, hbar));
        } catch (const DegenerateStateError&) {
            throw TowerTruncationError(
                "phase_tower: level " + std::to_string(level) +
                    " has no usable window (achieved depth " + std::to_string(level - 1) + ")",
                level - 1);
        }
        source = &tower.levels.back();
    }
    return tower;
}

inline PhaseTower phase_tower(const WaveField& psi, double hbar, int depth) {
    return phase_tower(psi.psi, hbar, depth);
}

/// Reconstruct the wave function from the deepest level downward through
/// Psi = exp(i S / hbar) at every level.
inline Field<cplx> tower_reconstruct(const PhaseTower& tower) {
    if (tower.levels.empty()) throw ConfigurationError("tower_reconstruct: empty tower");
    Field<cplx> cur = tower.levels.back();
    const cplx scale{0.0, 1.0 / tower.hbar};
    for (int level = tower.depth(); level >= 1; --level) {
        Field<cplx> next = cur;
        for (std::size_t idx = 0; idx < cur.values.size(); ++idx)
            next.values[idx] = std::exp(scale * cur.values[idx]);
        cur = std::move(next);
    }
    return cur;
}

/// Residual sets for the multistage strategy identities. The strategy field
/// of each level is the momentum of the level above it viewed as a wave
/// function: p_S = dS/dx by finite differences, then p_T = -i hbar p_S / S
/// and p_third = -i hbar p_T / T, the local-eigenvalue form that the
/// exponential relation makes exact nodewise. first_fd recomputes p_T by
/// differencing T instead, so it carries the discretization error of the
/// independent route. second_paper implements the printed two-stage
/// relation p_S = (i/hbar) p_third S T; second_chain carries the extra
/// (i/hbar) factor that direct differentiation of the depth-3 tower
/// produces. Residuals are relative to |p_S|.
struct TowerIdentityReport {
    ResidualReport first_exact;
    ResidualReport first_fd;
    ResidualReport second_paper;
    ResidualReport second_chain;
    double coverage = 0.0;  // unmasked fraction of the deepest level used
};

namespace detail {

inline Field<cplx> relative_residual(const Field<cplx>& lhs, const Field<cplx>& rhs) {
    Field<cplx> r = lhs;
    r.ensure_mask();
    for (std::size_t k = 0; k < r.slices(); ++k)
        for (std::size_t i = 0; i < r.nx(); ++i) {
            if (lhs.valid(i, k) && rhs.valid(i, k)) {
                const double denom = 1e-30 + std::abs(lhs.at(i, k));
                r.at(i, k) = (lhs.at(i, k) - rhs.at(i, k)) / denom;
            } else {
                r.invalidate(i, k);
            }
        }
    return r;
}

}  // namespace detail

inline TowerIdentityReport multistage_identity_check(const PhaseTower& tower) {
    if (tower.depth() < 2)
        throw ConfigurationError("multistage_identity_check: need tower depth >= 2");
    const double hbar = tower.hbar;
    const cplx i_over_h{0.0, 1.0 / hbar};
    const cplx minus_ih{0.0, -hbar};

    const auto& S = tower.S();
    const auto& T = tower.T();
    const Field<cplx> p_S = fd_partial(S, Axis::Space);

    // local-eigenvalue strategies through the exponential relation
    Field<cplx> p_T = p_S;
    for (std::size_t k = 0; k < p_T.slices(); ++k)
        for (std::size_t i = 0; i < p_T.nx(); ++i) {
            if (p_S.valid(i, k) && S.valid(i, k) && std::abs(S.at(i, k)) > 0.0)
                p_T.at(i, k) = minus_ih * p_S.at(i, k) / S.at(i, k);
            else
                p_T.invalidate(i, k);
        }

    TowerIdentityReport report;
    {
        Field<cplx> rhs = p_T;
        for (std::size_t k = 0; k < rhs.slices(); ++k)
            for (std::size_t i = 0; i < rhs.nx(); ++i)
                if (rhs.valid(i, k)) rhs.at(i, k) = i_over_h * S.at(i, k) * p_T.at(i, k);
        report.first_exact = summarize_residual(detail::relative_residual(p_S, rhs));
    }
    {
        const Field<cplx> p_T_fd = fd_partial(T, Axis::Space);
        Field<cplx> rhs = p_T_fd;
        for (std::size_t k = 0; k < rhs.slices(); ++k)
            for (std::size_t i = 0; i < rhs.nx(); ++i) {
                if (p_T_fd.valid(i, k) && S.valid(i, k))
                    rhs.at(i, k) = i_over_h * S.at(i, k) * p_T_fd.at(i, k);
                else
                    rhs.invalidate(i, k);
            }
        report.first_fd = summarize_residual(detail::relative_residual(p_S, rhs));
    }
    report.coverage = T.coverage();

    if (tower.depth() >= 3) {
        const auto& U3 = tower.third_level();
        Field<cplx> p_U = p_T;
        for (std::size_t k = 0; k < p_U.slices(); ++k)
            for (std::size_t i = 0; i < p_U.nx(); ++i) {
                if (p_T.valid(i, k) && T.valid(i, k) && std::abs(T.at(i, k)) > 0.0)
                    p_U.at(i, k) = minus_ih * p_T.at(i, k) / T.at(i, k);
                else
                    p_U.invalidate(i, k);
            }

        auto assemble = [&](const cplx& prefactor) {
            Field<cplx> rhs = p_U;
            for (std::size_t k = 0; k < rhs.slices(); ++k)
                for (std::size_t i = 0; i < rhs.nx(); ++i) {
                    if (p_U.valid(i, k) && S.valid(i, k) && T.valid(i, k))
                        rhs.at(i, k) = prefactor * p_U.at(i, k) * S.at(i, k) * T.at(i, k);
                    else
                        rhs.invalidate(i, k);
                }
            return summarize_residual(detail::relative_residual(p_S, rhs));
        };
        report.second_paper = assemble(i_over_h);
        report.second_chain = assemble(i_over_h * i_over_h);
        report.coverage = U3.coverage();
        (void)U3;
    }
    return report;
}

}  // namespace octk::quantum
