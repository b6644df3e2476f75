#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"

namespace octk {

/// Thomas algorithm for a tridiagonal system. lower/upper have length n-1,
/// diag and rhs length n. Throws on a (near-)zero pivot.
template <typename T>
std::vector<T> solve_tridiagonal(const std::vector<T>& lower, const std::vector<T>& diag,
                                 const std::vector<T>& upper, const std::vector<T>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0) throw ShapeError("solve_tridiagonal: empty system");
    if (rhs.size() != n || lower.size() != n - 1 || upper.size() != n - 1)
        throw ShapeError("solve_tridiagonal: band lengths must be n-1, diag/rhs length n");

    double scale = 0.0;
    for (const auto& d : diag) scale = std::max(scale, std::abs(d));
    for (const auto& d : lower) scale = std::max(scale, std::abs(d));
    for (const auto& d : upper) scale = std::max(scale, std::abs(d));
    const double pivot_floor = 1e-300 + 1e-15 * scale;

    std::vector<T> c(n - 1);   // modified upper band
    std::vector<T> d(n);       // modified rhs
    T pivot = diag[0];
    if (std::abs(pivot) <= pivot_floor)
        throw SingularSystemError("solve_tridiagonal: zero pivot at row 0");
    if (n > 1) c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;

    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if (std::abs(pivot) <= pivot_floor)
            throw SingularSystemError("solve_tridiagonal: zero pivot at row " +
                                      std::to_string(i));
        if (i < n - 1) c[i] = upper[i] / pivot;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

/// y = A v for the same band layout; used by tests and the implicit stepper.
template <typename T>
std::vector<T> tridiagonal_multiply(const std::vector<T>& lower, const std::vector<T>& diag,
                                    const std::vector<T>& upper, const std::vector<T>& v) {
    const std::size_t n = diag.size();
    std::vector<T> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        T acc = diag[i] * v[i];
        if (i > 0) acc += lower[i - 1] * v[i - 1];
        if (i + 1 < n) acc += upper[i] * v[i + 1];
        y[i] = acc;
    }
    return y;
}

}  // namespace octk
