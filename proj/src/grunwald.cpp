#include "fracstep/grunwald.hpp"

#include "fracstep/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fracstep {

WeightTable compute_weights(double alpha, std::size_t count, int shift_p) {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw Error(Errc::invalid_parameter, "alpha must be finite and positive, got " +
                                                 std::to_string(alpha));
    }
    if (count < 2) {
        throw Error(Errc::invalid_parameter, "weight count must be at least 2");
    }
    if (shift_p != 0 && shift_p != 1) {
        throw Error(Errc::invalid_parameter, "shift_p must be 0 or 1");
    }

    WeightTable table;
    table.alpha = alpha;
    table.shift_p = shift_p;
    table.w.resize(count);
    table.w[0] = 1.0;
    for (std::size_t i = 1; i < count; ++i) {
        const double di = static_cast<double>(i);
        table.w[i] = table.w[i - 1] * ((di - 1.0 - alpha) / di);
    }
    return table;
}

std::vector<double> partial_sums(const WeightTable& weights) {
    std::vector<double> sums(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights.w[i];
        sums[i] = acc;
    }
    return sums;
}

std::vector<double> apply_shifted(const WeightTable& weights, std::span<const double> values,
                                  double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw Error(Errc::invalid_parameter, "space step h must be positive");
    }
    const std::size_t n = values.size();
    const auto p = static_cast<std::size_t>(weights.shift_p);
    if (weights.size() < n + p) {
        throw Error(Errc::insufficient_weights,
                    "need " + std::to_string(n + p) + " weights, have " +
                        std::to_string(weights.size()));
    }

    const double scale = std::pow(h, -weights.alpha);
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        // Node j+p-i for i = 0..j+p; indices >= n fall in the zero extension.
        const std::size_t top = j + p;
        double acc = 0.0;
        for (std::size_t i = 0; i <= top; ++i) {
            const std::size_t node = top - i;
            if (node < n) acc += weights.w[i] * values[node];
        }
        out[j] = scale * acc;
    }
    return out;
}

double riesz_prefactor(double alpha) {
    const double c = std::cos(alpha * std::numbers::pi / 2.0);
    if (std::abs(c) < 1e-12) {
        throw Error(Errc::singular_order,
                    "Riesz normalisation undefined at odd integer order " + std::to_string(alpha));
    }
    return -1.0 / (2.0 * c);
}

} // namespace fracstep
