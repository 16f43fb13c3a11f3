// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/common.hpp"

#include <array>
#include <cmath>

namespace hyperpat {

namespace detail {

inline constexpr int kLobachevskyTerms = 40;

inline const std::array<double, kLobachevskyTerms>& lobachevsky_coefficients() {
    static const std::array<double, kLobachevskyTerms> c = [] {
        std::array<double, kLobachevskyTerms> out{};
        for (int n = 1; n <= kLobachevskyTerms; ++n)
            out[n - 1] = std::riemann_zeta(2.0 * n) / (n * (2.0 * n + 1.0));
        return out;
    }();
    return c;
}

}  // namespace detail

// Lobachevsky function: -integral_0^x log|2 sin t| dt. Odd and pi-periodic.
inline double lobachevsky(double x) {
    double t = x - kPi * std::round(x / kPi);
    if (t == 0.0) return 0.0;
    double s = t < 0.0 ? -1.0 : 1.0;
    double a = std::abs(t);
    double r = a / kPi;
    double r2 = r * r;
    double p = a * r2;
    double sum = a - a * std::log(2.0 * a);
    const auto& c = detail::lobachevsky_coefficients();
    for (int n = 0; n < detail::kLobachevskyTerms; ++n) {
        double term = c[n] * p;
        sum += term;
        if (term < 1e-18 * std::abs(sum)) break;
        p *= r2;
    }
    return s * sum;
}

}  // namespace hyperpat
