#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"

namespace octk {

/// Continuous phase along one axis: theta_0 is the principal argument and
/// adjacent differences never exceed pi in magnitude. A zero-magnitude
/// sample is a hard error; callers mask such nodes beforehand.
inline std::vector<double> unwrap_phase(std::span<const cplx> samples) {
    std::vector<double> theta(samples.size());
    double prev_arg = 0.0;
    double offset = 0.0;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (std::abs(samples[k]) == 0.0)
            throw NodeError("unwrap_phase: zero-magnitude sample", k);
        const double a = std::arg(samples[k]);
        if (k > 0) {
            double jump = a - prev_arg;
            // wrap the increment into (-pi, pi]
            jump -= two_pi * std::floor((jump + std::numbers::pi) / two_pi);
            offset += jump - (a - prev_arg);
        }
        theta[k] = a + offset;
        prev_arg = a;
    }
    return theta;
}

inline std::vector<double> unwrap_phase(const std::vector<cplx>& samples) {
    return unwrap_phase(std::span<const cplx>(samples));
}

}  // namespace octk
