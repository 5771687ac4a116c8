#pragma once

#include <cmath>
#include <numbers>

namespace fracstep::testing {

/// (-1)^i Gamma(alpha + 1) / (Gamma(i + 1) Gamma(alpha - i + 1)) for 1 < alpha <= 2.
///
/// For i >= 3 the last Gamma sits next to a pole, and forming alpha - i + 1
/// directly cancels the digits of alpha - 1. The reflection formula keeps
/// d = alpha - 1 exact: 1 / Gamma(d + 2 - i) = (-1)^i sin(pi d) Gamma(i - 1 - d) / pi.
inline double gamma_weight(double alpha, int i) {
    const double d = alpha - 1.0;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double lead = std::tgamma(alpha + 1.0) / std::tgamma(i + 1.0);
    if (i <= 2) return sign * lead / std::tgamma(alpha - i + 1.0);
    if (d == 1.0) return 0.0;
    const double inv_gamma = sign * std::sin(std::numbers::pi * d) * std::tgamma(i - 1.0 - d) / std::numbers::pi;
    return sign * lead * inv_gamma;
}

} // namespace fracstep::testing
