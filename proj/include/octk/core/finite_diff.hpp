#pragma once

#include <cstddef>

#include "octk/core/field.hpp"

namespace octk {

enum class Axis { Space, Time };

namespace detail {

// Second-order stencils on a uniform axis of length n with spacing h.
// fetch(j) reads the source value, ok(j) its validity. Writes through
// store(j, value) / drop(j).
template <typename Fetch, typename Ok, typename Store, typename Drop>
void differentiate_line(std::size_t n, double h, Fetch&& fetch, Ok&& ok, Store&& store,
                        Drop&& drop) {
    for (std::size_t j = 0; j < n; ++j) {
        if (!ok(j)) {
            drop(j);
            continue;
        }
        if (j == 0) {
            if (n >= 3 && ok(1) && ok(2))
                store(j, (-3.0 * fetch(0) + 4.0 * fetch(1) - fetch(2)) / (2.0 * h));
            else
                drop(j);
        } else if (j == n - 1) {
            if (n >= 3 && ok(n - 2) && ok(n - 3))
                store(j, (3.0 * fetch(n - 1) - 4.0 * fetch(n - 2) + fetch(n - 3)) / (2.0 * h));
            else
                drop(j);
        } else {
            if (ok(j - 1) && ok(j + 1))
                store(j, (fetch(j + 1) - fetch(j - 1)) / (2.0 * h));
            else
                drop(j);
        }
    }
}

}  // namespace detail

/// Partial derivative of a grid field along one axis. Central second-order
/// in the interior, one-sided second-order at the ends. Nodes whose stencil
/// touches an invalid node are masked in the output.
template <typename T>
Field<T> fd_partial(const Field<T>& field, Axis axis) {
    const std::size_t nx = field.nx();
    const std::size_t ns = field.slices();

    Field<T> out = field;
    out.ensure_mask();

    if (axis == Axis::Space) {
        if (nx < 3) throw DegenerateGridError("fd_partial: need >= 3 nodes along space");
        const double h = field.grid.dx();
        for (std::size_t k = 0; k < ns; ++k) {
            detail::differentiate_line(
                nx, h, [&](std::size_t j) { return field.at(j, k); },
                [&](std::size_t j) { return field.valid(j, k); },
                [&](std::size_t j, T v) { out.at(j, k) = v; },
                [&](std::size_t j) { out.invalidate(j, k); });
        }
    } else {
        if (ns < 3) throw DegenerateGridError("fd_partial: need >= 3 nodes along time");
        const double h = field.grid.dt();
        for (std::size_t i = 0; i < nx; ++i) {
            detail::differentiate_line(
                ns, h, [&](std::size_t j) { return field.at(i, j); },
                [&](std::size_t j) { return field.valid(i, j); },
                [&](std::size_t j, T v) { out.at(i, j) = v; },
                [&](std::size_t j) { out.invalidate(i, j); });
        }
    }
    if (out.coverage() == 1.0) out.mask.clear();
    return out;
}

/// Second spatial derivative: 3-point central interior, 4-point one-sided
/// second-order at the ends.
template <typename T>
Field<T> fd_second_space(const Field<T>& field) {
    const std::size_t nx = field.nx();
    if (nx < 4) throw DegenerateGridError("fd_second_space: need >= 4 nodes along space");
    const double h2 = field.grid.dx() * field.grid.dx();

    Field<T> out = field;
    out.ensure_mask();
    for (std::size_t k = 0; k < field.slices(); ++k) {
        auto ok = [&](std::size_t j) { return field.valid(j, k); };
        for (std::size_t i = 0; i < nx; ++i) {
            if (!ok(i)) {
                out.invalidate(i, k);
                continue;
            }
            if (i == 0) {
                if (ok(1) && ok(2) && ok(3))
                    out.at(i, k) = (2.0 * field.at(0, k) - 5.0 * field.at(1, k) +
                                    4.0 * field.at(2, k) - field.at(3, k)) / h2;
                else
                    out.invalidate(i, k);
            } else if (i == nx - 1) {
                if (ok(nx - 2) && ok(nx - 3) && ok(nx - 4))
                    out.at(i, k) = (2.0 * field.at(nx - 1, k) - 5.0 * field.at(nx - 2, k) +
                                    4.0 * field.at(nx - 3, k) - field.at(nx - 4, k)) / h2;
                else
                    out.invalidate(i, k);
            } else {
                if (ok(i - 1) && ok(i + 1))
                    out.at(i, k) =
                        (field.at(i + 1, k) - 2.0 * field.at(i, k) + field.at(i - 1, k)) / h2;
                else
                    out.invalidate(i, k);
            }
        }
    }
    if (out.coverage() == 1.0) out.mask.clear();
    return out;
}

}  // namespace octk
