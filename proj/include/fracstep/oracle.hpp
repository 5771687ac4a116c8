#pragma once

#include "fracstep/model.hpp"

#include <span>
#include <vector>

// Reference computations that share no code path with the solver. Used by
// the tests and by the `verify` and `convergence` commands.
namespace fracstep::oracle {

/// Sine-series solution of u_t = c2 u_xx on [L, R] with zero Dirichlet data:
///   u(x, t) = sum_m B_m sin(m pi (x - L) / Lambda) exp(-c2 (m pi / Lambda)^2 t).
struct FourierHeatSolution {
    double L = 0.0;
    double R = 1.0;
    double c2 = 1.0;
    std::vector<double> coefficients; // B_1 .. B_{m_max}

    int m_max() const noexcept { return static_cast<int>(coefficients.size()); }
};

/// B_m = (2 / Lambda) * integral of u0(x) sin(m pi (x - L) / Lambda) over [L, R],
/// composite Simpson with `panels` (even, >= 10^4) panels.
std::vector<double> fourier_coefficients(const CoefficientProfile& u0, double L, double R,
                                         int m_max, int panels = 10000);

inline constexpr int kFourierHardCap = 2000;

/// Truncates the series at the first m where two consecutive terms fall below
/// 1e-14 at time t_min, or at kFourierHardCap.
FourierHeatSolution make_heat_solution(const CoefficientProfile& u0, double L, double R, double c2,
                                       double t_min);

FourierHeatSolution make_heat_solution_fixed(const CoefficientProfile& u0, double L, double R,
                                             double c2, int m_max);

double heat_exact(const FourierHeatSolution& solution, double x, double t);

/// Left Riemann-Liouville derivative of (x - a)^p:
/// Gamma(p + 1) / Gamma(p + 1 - alpha) * (x - a)^(p - alpha).
///
/// Throws Error(reflection_pole) when p + 1 - alpha is a non-positive
/// integer and Error(invalid_parameter) for x <= a.
double rl_derivative_monomial(double p, double alpha, double x, double a);

/// Gaussian elimination with partial pivoting on a dense copy, followed by two
/// rounds of iterative refinement with a long double residual.
/// Throws Error(singular_matrix) when a pivot is below 1e-13 times the matrix scale.
std::vector<double> dense_solve(std::vector<std::vector<double>> matrix, std::vector<double> rhs);

/// One implicit Euler step of the classical heat equation: tridiagonal
/// (1 + 2 lambda, -lambda) interior rows, identity boundary rows.
std::vector<double> classical_heat_step(std::span<const double> y, double lambda);

} // namespace fracstep::oracle
