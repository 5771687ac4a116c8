#pragma once

#include "fracstep/grunwald.hpp"
#include "fracstep/model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fracstep {

/// One implicit Euler step in the transformed unknown y = v^nu.
///
/// The matrix is lower-Hessenberg: row i keeps the dense coefficients of
/// columns 0..min(i+1, last), where last = M is the final node index. Rows
/// 0 and M are unit rows carrying the Dirichlet data.
struct HessenbergSystem {
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<double> lambda;        // k * b_j / h^alpha per node
    std::vector<double> delta_weights; // nodal weights used in assembly

    std::size_t size() const noexcept { return rows.size(); }

    /// Entry (i, j); zero outside the stored pattern.
    double at(std::size_t i, std::size_t j) const noexcept {
        return j < rows[i].size() ? rows[i][j] : 0.0;
    }

    /// scale * I of order n with the given right-hand side (zero if empty).
    static HessenbergSystem identity(std::size_t n, double scale = 1.0,
                                     std::vector<double> rhs = {});
};

/// Builds the system of one step
///   -c_i w_0 y_{i+1} + (1 - c_i w_1) y_i - c_i sum_{m=2}^{i+1} w_m y_{i+1-m} = y_prev_i + k delta_i f_i
/// with c_i = lambda_i delta_i (times the Riesz factor in Riesz mode) and an
/// implicit upwind advection term k a_i / h on the diagonal and first
/// sub-diagonal.
///
/// Throws Error(invalid_weight) for a negative or non-finite delta entry,
/// Error(insufficient_weights) if the table has fewer than M + 2 entries,
/// and Error(invalid_parameter) on length mismatches.
HessenbergSystem assemble(const ValidProblem& problem, const WeightTable& weights,
                          std::span<const double> delta, std::span<const double> y_prev,
                          std::span<const double> f_vals);

/// LU factorisation without pivoting. U is upper bidiagonal; L is dense lower
/// triangular. O(n^2) work and storage.
class HessenbergLU {
public:
    /// Throws Error(numerical_breakdown) on a pivot below 1e-14 times the row scale.
    explicit HessenbergLU(const HessenbergSystem& system);

    std::vector<double> solve(std::span<const double> rhs) const;

    std::size_t size() const noexcept { return pivot_.size(); }

private:
    std::vector<std::vector<double>> lower_; // lower_[i][j], j < i
    std::vector<double> pivot_;
    std::vector<double> super_;
};

/// Solves A y = rhs for the system's own right-hand side.
std::vector<double> solve(const HessenbergSystem& system);

/// A x
std::vector<double> multiply(const HessenbergSystem& system, std::span<const double> x);

/// Max-norm of A x - rhs.
double residual_norm(const HessenbergSystem& system, std::span<const double> x);

/// min_i |a_ii| - sum_{j != i} |a_ij|, accumulated with compensated summation.
double dominance_margin(const HessenbergSystem& system);

/// True iff every diagonal entry is positive and no off-diagonal exceeds 1e-14.
bool is_m_matrix(const HessenbergSystem& system);

/// 1 / dominance_margin; throws Error(not_dominant) when the margin is not positive.
double inverse_norm_bound(const HessenbergSystem& system);

/// Power-iteration estimate of the dominant |eigenvalue| of A^{-1}.
///
/// Each iteration solves with the current iterate and normalises in the
/// max-norm; the returned value is the last ratio ||A^{-1} x|| / ||x||.
/// A collapsed iterate restarts from another seed; the fourth collapse
/// throws Error(numerical_breakdown).
double inverse_spectral_estimate(const HessenbergSystem& system, int iterations);

/// Full (n x n) copy of the matrix.
std::vector<std::vector<double>> to_dense(const HessenbergSystem& system);

} // namespace fracstep
