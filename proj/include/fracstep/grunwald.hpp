#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracstep {

/// Grünwald-Letnikov coefficients w[i] = (-1)^i * binomial(alpha, i).
///
/// For 1 < alpha <= 2 the table has w[0] = 1, w[1] = -alpha, and w[i] >= 0
/// for every i >= 2; the full series sums to zero.
struct WeightTable {
    double alpha = 0.0;
    int shift_p = 1;
    std::vector<double> w;

    std::size_t size() const noexcept { return w.size(); }
    double operator[](std::size_t i) const { return w[i]; }
};

/// Builds w[0..count-1] with the multiplicative recurrence
/// w[i] = w[i-1] * (i - 1 - alpha) / i.
///
/// Throws Error(invalid_parameter) for non-finite or non-positive alpha,
/// count < 2, or shift_p outside {0, 1}.
WeightTable compute_weights(double alpha, std::size_t count, int shift_p = 1);

/// Running sums S_n = w[0] + ... + w[n].
std::vector<double> partial_sums(const WeightTable& weights);

/// Shifted Grünwald approximation of the left fractional derivative.
///
/// Node j receives h^{-alpha} * sum_{i=0}^{j+p} w[i] * values[j+p-i], with
/// values outside [0, n) read as zero. The table needs at least n + p
/// entries.
std::vector<double> apply_shifted(const WeightTable& weights, std::span<const double> values,
                                  double h);

/// -1 / (2 cos(alpha pi / 2)); throws Error(singular_order) at odd integer orders.
double riesz_prefactor(double alpha);

} // namespace fracstep
