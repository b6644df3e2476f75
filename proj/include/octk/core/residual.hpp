#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "octk/core/field.hpp"
#include "octk/core/finite_diff.hpp"

namespace octk {

/// Norms and per-time statistics of a residual field. per_time_mean is the
/// estimate of the inhomogeneity g(t); per_time_std measures how much the
/// residual actually depends on x at each time.
struct ResidualReport {
    double sup_norm = 0.0;
    double l2_norm = 0.0;  // root-mean-square over unmasked nodes
    std::vector<cplx> per_time_mean;
    std::vector<double> per_time_std;
    double coverage = 0.0;
};

namespace detail {

inline cplx as_complex(double v) { return {v, 0.0}; }
inline cplx as_complex(const cplx& v) { return v; }

}  // namespace detail

/// Summarize a residual field. interior_only drops the outermost ring of
/// nodes (one cell in x and in t) before computing statistics.
template <typename T>
ResidualReport summarize_residual(const Field<T>& r, bool interior_only = false) {
    const std::size_t nx = r.nx();
    const std::size_t ns = r.slices();
    ResidualReport rep;
    rep.per_time_mean.assign(ns, cplx{0.0, 0.0});
    rep.per_time_std.assign(ns, 0.0);

    std::size_t used = 0, total = 0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < ns; ++k) {
        const bool t_edge = interior_only && ns > 1 && (k == 0 || k == ns - 1);
        std::size_t n_slice = 0;
        cplx mean{0.0, 0.0};
        for (std::size_t i = 0; i < nx; ++i) {
            const bool x_edge = interior_only && (i == 0 || i == nx - 1);
            ++total;
            if (t_edge || x_edge || !r.valid(i, k)) continue;
            const cplx v = detail::as_complex(r.at(i, k));
            ++used;
            ++n_slice;
            mean += v;
            const double m = std::abs(v);
            rep.sup_norm = std::max(rep.sup_norm, m);
            sum_sq += m * m;
        }
        if (n_slice > 0) {
            mean /= static_cast<double>(n_slice);
            double var = 0.0;
            for (std::size_t i = 0; i < nx; ++i) {
                const bool x_edge = interior_only && (i == 0 || i == nx - 1);
                if (t_edge || x_edge || !r.valid(i, k)) continue;
                var += std::norm(detail::as_complex(r.at(i, k)) - mean);
            }
            rep.per_time_mean[k] = mean;
            rep.per_time_std[k] = std::sqrt(var / static_cast<double>(n_slice));
        }
    }
    rep.l2_norm = used > 0 ? std::sqrt(sum_sq / static_cast<double>(used)) : 0.0;
    rep.coverage = total > 0 ? static_cast<double>(used) / static_cast<double>(total) : 0.0;
    return rep;
}

/// Residual of the closed-loop costate consistency condition
/// dH*/dx + d(lambda)/dt on a shared grid. A costate field satisfying it is
/// an optimal closed-loop strategy; the same expression (up to overall sign)
/// is the condition on a closed-loop momentum field.
inline ResidualReport consistency_residual(const ScalarField& hstar, const ScalarField& lam,
                                           bool interior_only = false) {
    if (!hstar.grid.same_as(lam.grid) || hstar.slices() != lam.slices())
        throw ShapeError("consistency_residual: fields must share one grid");
    const ScalarField dh = fd_partial(hstar, Axis::Space);
    const ScalarField dl = fd_partial(lam, Axis::Time);

    ScalarField r = dh;
    r.ensure_mask();
    for (std::size_t k = 0; k < r.slices(); ++k) {
        for (std::size_t i = 0; i < r.nx(); ++i) {
            if (dh.valid(i, k) && dl.valid(i, k))
                r.at(i, k) = dh.at(i, k) + dl.at(i, k);
            else
                r.invalidate(i, k);
        }
    }
    return summarize_residual(r, interior_only);
}

}  // namespace octk
