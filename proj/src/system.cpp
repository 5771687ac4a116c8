#include "fracstep/system.hpp"

#include "fracstep/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fracstep {

namespace {

// Neumaier summation; exact enough that a row margin near 1 is not swamped
// by the rounding of entries of size ~1e7.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double row_margin(const std::vector<double>& row, std::size_t i) {
    CompensatedSum s;
    for (std::size_t j = 0; j < row.size(); ++j) {
        s.add(j == i ? std::abs(row[j]) : -std::abs(row[j]));
    }
    return s.value();
}

double norm_inf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

HessenbergSystem HessenbergSystem::identity(std::size_t n, double scale, std::vector<double> rhs) {
    HessenbergSystem s;
    s.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.rows[i].assign(std::min(i + 2, n), 0.0);
        s.rows[i][i] = scale;
    }
    s.rhs = rhs.empty() ? std::vector<double>(n, 0.0) : std::move(rhs);
    s.lambda.assign(n, 0.0);
    s.delta_weights.assign(n, 0.0);
    return s;
}

HessenbergSystem assemble(const ValidProblem& problem, const WeightTable& weights,
                          std::span<const double> delta, std::span<const double> y_prev,
                          std::span<const double> f_vals) {
    const GridSpec& grid = problem.grid();
    const ProblemSpec& spec = problem.spec();
    const std::size_t n = grid.nodes();
    const std::size_t last = n - 1;

    if (delta.size() != n || y_prev.size() != n || f_vals.size() != n) {
        throw Error(Errc::invalid_parameter, "nodal vectors must have M+1 = " +
                                                 std::to_string(n) + " entries");
    }
    if (weights.size() < n + 1) {
        throw Error(Errc::insufficient_weights, "need M+2 = " + std::to_string(n + 1) +
                                                    " weights, have " +
                                                    std::to_string(weights.size()));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!(delta[j] >= 0.0) || !std::isfinite(delta[j])) {
            throw Error(Errc::invalid_weight, "delta[" + std::to_string(j) + "] = " +
                                                  std::to_string(delta[j]));
        }
    }

    const double scale = spec.operator_mode == OperatorMode::riesz ? riesz_prefactor(weights.alpha)
                                                                   : 1.0;
    const double h_alpha = std::pow(grid.h, weights.alpha);
    const auto& b = problem.diffusion();
    const auto& a = problem.advection();
    const auto& w = weights.w;

    HessenbergSystem sys;
    sys.rows.resize(n);
    sys.rhs.assign(n, 0.0);
    sys.lambda.resize(n);
    sys.delta_weights.assign(delta.begin(), delta.end());

    for (std::size_t i = 0; i < n; ++i) sys.lambda[i] = grid.k * b[i] / h_alpha;

    sys.rows[0].assign(2, 0.0);
    sys.rows[0][0] = 1.0;
    sys.rows[last].assign(n, 0.0);
    sys.rows[last][last] = 1.0;

    for (std::size_t i = 1; i < last; ++i) {
        const double c = sys.lambda[i] * delta[i] * scale;
        const double adv = grid.k * a[i] / grid.h;
        auto& row = sys.rows[i];
        row.resize(i + 2);

        row[i + 1] = -c * w[0];
        row[i] = 1.0 - c * w[1] + adv;
        for (std::size_t j = 0; j < i; ++j) row[j] = -c * w[i - j + 1];
        row[i - 1] -= adv;

        // The exact row margin is 1 + c * (tail of the weight series) >= 1;
        // bump the diagonal by a few ulps if rounding of the entries ate into it.
        if (const double m = row_margin(row, i); m < 1.0) {
            row[i] += 1.0 - m;
            for (int guard = 0; guard < 64 && row_margin(row, i) < 1.0; ++guard) {
                row[i] = std::nextafter(row[i], std::numeric_limits<double>::infinity());
            }
        }

        sys.rhs[i] = y_prev[i] + grid.k * delta[i] * f_vals[i];
    }
    return sys;
}

HessenbergLU::HessenbergLU(const HessenbergSystem& system) {
    const std::size_t n = system.size();
    lower_ = system.rows;
    pivot_.assign(n, 0.0);
    super_.assign(n, 0.0);

    std::vector<double> row_scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (lower_[i].size() < std::min(i + 2, n)) lower_[i].resize(std::min(i + 2, n), 0.0);
        for (double v : lower_[i]) row_scale[i] = std::max(row_scale[i], std::abs(v));
    }

    for (std::size_t k = 0; k < n; ++k) {
        const double pivot = lower_[k][k];
        if (!std::isfinite(pivot) || std::abs(pivot) < 1e-14 * row_scale[k] || pivot == 0.0) {
            throw Error(Errc::numerical_breakdown, "pivot " + std::to_string(pivot) + " at row " +
                                                       std::to_string(k));
        }
        pivot_[k] = pivot;
        super_[k] = k + 1 < n ? lower_[k][k + 1] : 0.0;

        // Row k now holds only (pivot, super); eliminate column k below it.
        for (std::size_t i = k + 1; i < n; ++i) {
            auto& row = lower_[i];
            const double l = row[k] / pivot;
            row[k] = l;
            if (l != 0.0 && k + 1 < n) row[k + 1] -= l * super_[k];
        }
    }
    for (std::size_t i = 0; i < n; ++i) lower_[i].resize(i);
}

std::vector<double> HessenbergLU::solve(std::span<const double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw Error(Errc::invalid_parameter, "rhs length does not match system");

    std::vector<double> y(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n; ++i) {
        const auto& l = lower_[i];
        double acc = y[i];
        for (std::size_t j = 0; j < i; ++j) acc -= l[j] * y[j];
        y[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
        const double upper = i + 1 < n ? super_[i] * y[i + 1] : 0.0;
        y[i] = (y[i] - upper) / pivot_[i];
    }
    return y;
}

std::vector<double> solve(const HessenbergSystem& system) {
    return HessenbergLU(system).solve(system.rhs);
}

std::vector<double> multiply(const HessenbergSystem& system, std::span<const double> x) {
    std::vector<double> out(system.size(), 0.0);
    for (std::size_t i = 0; i < system.size(); ++i) {
        const auto& row = system.rows[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
    return out;
}

double residual_norm(const HessenbergSystem& system, std::span<const double> x) {
    auto ax = multiply(system, x);
    for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= system.rhs[i];
    return norm_inf(ax);
}

double dominance_margin(const HessenbergSystem& system) {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < system.size(); ++i) {
        margin = std::min(margin, row_margin(system.rows[i], i));
    }
    return margin;
}

bool is_m_matrix(const HessenbergSystem& system) {
    for (std::size_t i = 0; i < system.size(); ++i) {
        const auto& row = system.rows[i];
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j == i ? !(row[j] > 0.0) : row[j] > 1e-14) return false;
        }
    }
    return true;
}

double inverse_norm_bound(const HessenbergSystem& system) {
    const double margin = dominance_margin(system);
    if (!(margin > 0.0)) {
        throw Error(Errc::not_dominant, "dominance margin " + std::to_string(margin));
    }
    return 1.0 / margin;
}

double inverse_spectral_estimate(const HessenbergSystem& system, int iterations) {
    const HessenbergLU lu(system);
    const std::size_t n = system.size();

    auto seed = [n](int attempt) {
        std::vector<double> v(n);
        for (std::size_t j = 0; j < n; ++j) {
            switch (attempt) {
            case 0: v[j] = 1.0; break;
            case 1: v[j] = (j % 2 == 0) ? 1.0 : -1.0; break;
            case 2: v[j] = static_cast<double>(j + 1) / static_cast<double>(n); break;
            default: v[j] = std::sin(1.0 + 0.7 * static_cast<double>(j)); break;
            }
        }
        return v;
    };

    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<double> x = seed(attempt);
        double ratio = 0.0;
        bool collapsed = false;
        for (int it = 0; it < std::max(iterations, 1); ++it) {
            const double xn = norm_inf(x);
            auto z = lu.solve(x);
            const double zn = norm_inf(z);
            if (!(zn > 0.0) || !std::isfinite(zn)) {
                collapsed = true;
                break;
            }
            ratio = zn / xn;
            for (double& v : z) v /= zn;
            x = std::move(z);
        }
        if (!collapsed) return ratio;
    }
    throw Error(Errc::numerical_breakdown, "power iteration collapsed after 3 restarts");
}

std::vector<std::vector<double>> to_dense(const HessenbergSystem& system) {
    const std::size_t n = system.size();
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < system.rows[i].size() && j < n; ++j) dense[i][j] = system.rows[i][j];
    }
    return dense;
}

} // namespace fracstep
