#include "fracstep/oracle.hpp"

#include "fracstep/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fracstep::oracle {

std::vector<double> fourier_coefficients(const CoefficientProfile& u0, double L, double R,
                                         int m_max, int panels) {
    if (!(R > L)) throw Error(Errc::invalid_parameter, "R must exceed L");
    if (m_max < 1) throw Error(Errc::invalid_parameter, "m_max must be positive");
    panels = std::max(panels, 10000);
    if (panels % 2 != 0) ++panels;

    const double len = R - L;
    const double dx = len / panels;
    std::vector<double> samples(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) samples[i] = evaluate(u0, L + i * dx, L, R);

    std::vector<double> coeffs(static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        const double freq = m * std::numbers::pi / len;
        double acc = 0.0;
        for (int i = 0; i <= panels; ++i) {
            const double simpson = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += simpson * samples[i] * std::sin(freq * i * dx);
        }
        coeffs[m - 1] = (2.0 / len) * acc * dx / 3.0;
    }
    return coeffs;
}

FourierHeatSolution make_heat_solution_fixed(const CoefficientProfile& u0, double L, double R,
                                             double c2, int m_max) {
    FourierHeatSolution sol;
    sol.L = L;
    sol.R = R;
    sol.c2 = c2;
    sol.coefficients = fourier_coefficients(u0, L, R, m_max);
    return sol;
}

FourierHeatSolution make_heat_solution(const CoefficientProfile& u0, double L, double R, double c2,
                                       double t_min) {
    // Coefficients are cheap relative to the quadrature setup, so compute in
    // blocks and stop once the tail is certified.
    const double len = R - L;
    int m_max = 64;
    while (true) {
        auto coeffs = fourier_coefficients(u0, L, R, m_max);
        int cut = 0;
        for (int m = 2; m <= m_max; ++m) {
            auto term = [&](int mm) {
                const double decay = std::exp(-c2 * std::pow(mm * std::numbers::pi / len, 2) * t_min);
                return std::abs(coeffs[mm - 1]) * decay;
            };
            if (term(m) < 1e-14 && term(m - 1) < 1e-14) {
                cut = m;
                break;
            }
        }
        if (cut > 0 || m_max >= kFourierHardCap) {
            coeffs.resize(cut > 0 ? cut : kFourierHardCap);
            FourierHeatSolution sol;
            sol.L = L;
            sol.R = R;
            sol.c2 = c2;
            sol.coefficients = std::move(coeffs);
            return sol;
        }
        m_max = std::min(2 * m_max, kFourierHardCap);
    }
}

double heat_exact(const FourierHeatSolution& solution, double x, double t) {
    const double len = solution.R - solution.L;
    double acc = 0.0;
    for (int m = 1; m <= solution.m_max(); ++m) {
        const double freq = m * std::numbers::pi / len;
        acc += solution.coefficients[m - 1] * std::sin(freq * (x - solution.L)) *
               std::exp(-solution.c2 * freq * freq * t);
    }
    return acc;
}

double rl_derivative_monomial(double p, double alpha, double x, double a) {
    if (!(x > a)) throw Error(Errc::invalid_parameter, "x must exceed the lower terminal a");
    const double arg = p + 1.0 - alpha;
    if (arg <= 0.0 && arg == std::floor(arg)) {
        throw Error(Errc::reflection_pole, "Gamma(" + std::to_string(arg) + ") is a pole");
    }
    return std::tgamma(p + 1.0) / std::tgamma(arg) * std::pow(x - a, p - alpha);
}

std::vector<double> dense_solve(std::vector<std::vector<double>> matrix, std::vector<double> rhs) {
    const std::size_t n = matrix.size();
    if (rhs.size() != n) throw Error(Errc::invalid_parameter, "rhs length does not match matrix");
    double scale = 0.0;
    for (const auto& row : matrix) {
        if (row.size() != n) throw Error(Errc::invalid_parameter, "matrix must be square");
        for (double v : row) {
            if (!std::isfinite(v)) throw Error(Errc::invalid_parameter, "matrix entry not finite");
            scale = std::max(scale, std::abs(v));
        }
    }
    const auto original = matrix;

    // PA = LU in place; multipliers below the diagonal.
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(matrix[i][k]) > std::abs(matrix[piv][k])) piv = i;
        }
        if (!(std::abs(matrix[piv][k]) > 1e-13 * scale)) {
            throw Error(Errc::singular_matrix, "no usable pivot in column " + std::to_string(k));
        }
        std::swap(matrix[k], matrix[piv]);
        std::swap(perm[k], perm[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = matrix[i][k] / matrix[k][k];
            matrix[i][k] = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) matrix[i][j] -= l * matrix[k][j];
        }
    }

    auto lu_solve = [&](const std::vector<double>& b) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = b[perm[i]];
            for (std::size_t j = 0; j < i; ++j) acc -= matrix[i][j] * x[j];
            x[i] = acc;
        }
        for (std::size_t i = n; i-- > 0;) {
            double acc = x[i];
            for (std::size_t j = i + 1; j < n; ++j) acc -= matrix[i][j] * x[j];
            x[i] = acc / matrix[i][i];
        }
        return x;
    };

    // Row swaps mix signs and cost digits on badly scaled rows; two rounds of
    // refinement with an extended-precision residual win them back.
    std::vector<double> x = lu_solve(rhs);
    for (int round = 0; round < 2; ++round) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            long double acc = rhs[i];
            for (std::size_t j = 0; j < n; ++j) acc -= static_cast<long double>(original[i][j]) * x[j];
            r[i] = static_cast<double>(acc);
        }
        const auto dx = lu_solve(r);
        for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
    }
    return x;
}

std::vector<double> classical_heat_step(std::span<const double> y, double lambda) {
    const std::size_t n = y.size();
    std::vector<double> out(y.begin(), y.end());
    if (n < 3) return out;

    // Thomas algorithm on rows 1..n-2; the boundary values are fixed.
    const std::size_t m = n - 2;
    std::vector<double> c(m), d(m);
    const double diag = 1.0 + 2.0 * lambda;
    for (std::size_t i = 0; i < m; ++i) {
        double rhs = y[i + 1];
        if (i == 0) rhs += lambda * y[0];
        if (i == m - 1) rhs += lambda * y[n - 1];
        const double denom = i == 0 ? diag : diag + lambda * c[i - 1];
        c[i] = -lambda / denom;
        d[i] = (i == 0 ? rhs : rhs + lambda * d[i - 1]) / denom;
    }
    out[m] = d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) out[i + 1] = d[i] - c[i] * out[i + 2];
    return out;
}

} // namespace fracstep::oracle
