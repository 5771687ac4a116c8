#include "fracstep/stepper.hpp"

#include "fracstep/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracstep {

namespace {

constexpr double kClampTolerance = 1e-10;

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Zeroes roundoff-level negatives; throws on anything larger.
void clamp_negatives(std::vector<double>& y, StepDiagnostics& diag) {
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[j] >= 0.0) continue;
        diag.min_value = std::min(diag.min_value, y[j]);
        if (y[j] < -kClampTolerance) {
            throw Error(Errc::positivity_violation,
                        "y[" + std::to_string(j) + "] = " + std::to_string(y[j]));
        }
        y[j] = 0.0;
        ++diag.clamp_count;
    }
}

std::vector<double> clamped(std::span<const double> y) {
    std::vector<double> out(y.begin(), y.end());
    for (double& v : out) v = std::max(v, 0.0);
    return out;
}

} // namespace

double SolutionSeries::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : steps) m = std::min(m, s.min_margin);
    return m;
}

double SolutionSeries::max_spectral_estimate() const {
    double m = std::numeric_limits<double>::quiet_NaN();
    for (const auto& s : steps) {
        if (std::isnan(s.spectral_estimate)) continue;
        m = std::isnan(m) ? s.spectral_estimate : std::max(m, s.spectral_estimate);
    }
    return m;
}

int SolutionSeries::clamp_count() const {
    int c = 0;
    for (const auto& s : steps) c += s.clamp_count;
    return c;
}

std::vector<double> delta_weights(std::span<const double> y, double nu, double eps_reg) {
    std::vector<double> out(y.size(), 1.0);
    if (nu == 1.0) return out;
    const double exponent = (nu - 1.0) / nu;
    for (std::size_t j = 0; j < y.size(); ++j) {
        out[j] = nu * std::pow(std::max(y[j], eps_reg), exponent);
    }
    return out;
}

std::vector<double> recover_v(std::span<const double> y, double nu) {
    std::vector<double> v(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[j] < -kClampTolerance) {
            throw Error(Errc::positivity_violation,
                        "y[" + std::to_string(j) + "] = " + std::to_string(y[j]));
        }
        const double yj = std::max(y[j], 0.0);
        v[j] = nu == 1.0 ? yj : std::pow(yj, 1.0 / nu);
    }
    return v;
}

StepState initial_state(const ValidProblem& problem, double eps_reg) {
    const double nu = problem.spec().nu;
    StepState s;
    s.y = problem.u0();
    if (nu != 1.0) {
        for (double& v : s.y) v = std::pow(v, nu);
    }
    s.y.front() = 0.0;
    s.y.back() = 0.0;
    s.delta = delta_weights(s.y, nu, eps_reg);
    return s;
}

WeightTable weights_for(const ValidProblem& problem) {
    return compute_weights(problem.spec().alpha, problem.grid().nodes() + 1, 1);
}

std::vector<double> predictor(const StepState& state, const ValidProblem& problem,
                              const WeightTable& weights) {
    const double t_next = problem.grid().t(state.n + 1);
    const auto f = problem.source(t_next);
    return solve(assemble(problem, weights, state.delta, state.y, f));
}

std::vector<double> corrector(const StepState& state, std::span<const double> y_aux,
                              const ValidProblem& problem, const WeightTable& weights,
                              double eps_reg) {
    const auto delta_next = delta_weights(clamped(y_aux), problem.spec().nu, eps_reg);
    const double t_next = problem.grid().t(state.n + 1);
    const auto f = problem.source(t_next);
    return solve(assemble(problem, weights, delta_next, state.y, f));
}

StepState advance(const StepState& state, const ValidProblem& problem, const WeightTable& weights,
                  const StepperOptions& options, StepDiagnostics* diagnostics) {
    StepDiagnostics diag;
    diag.n = state.n + 1;

    const double nu = problem.spec().nu;
    const double t_next = problem.grid().t(state.n + 1);
    const auto f = problem.source(t_next);

    auto y_aux = predictor(state, problem, weights);
    clamp_negatives(y_aux, diag);

    std::vector<double> y_next;
    HessenbergSystem last_system;
    const int passes = std::max(options.corrector_iterations, 1);
    for (int pass = 0; pass < passes; ++pass) {
        const auto delta_next = delta_weights(y_aux, nu, options.eps_reg);
        last_system = assemble(problem, weights, delta_next, state.y, f);
        y_next = solve(last_system);
        clamp_negatives(y_next, diag);
        diag.corrector_passes = pass + 1;
        diag.corrector_change = max_abs_diff(y_next, y_aux);
        if (pass + 1 < passes && diag.corrector_change < options.corrector_tol) break;
        y_aux = y_next;
    }

    diag.min_margin = dominance_margin(last_system);
    if (options.spectral_checks) {
        diag.spectral_estimate = inverse_spectral_estimate(last_system, options.spectral_iterations);
        if (diag.min_margin < 1.0 - 1e-12 || !is_m_matrix(last_system) ||
            diag.spectral_estimate > 1.0 + 1e-8) {
            throw Error(Errc::not_dominant,
                        "stability check failed at step " + std::to_string(diag.n) +
                            ": margin " + std::to_string(diag.min_margin) + ", spectral " +
                            std::to_string(diag.spectral_estimate));
        }
    }

    StepState next;
    next.n = state.n + 1;
    next.t = t_next;
    next.y = std::move(y_next);
    next.delta = delta_weights(next.y, nu, options.eps_reg);
    if (diagnostics) *diagnostics = diag;
    return next;
}

SolutionSeries run(const ValidProblem& problem, int snapshot_stride, const StepperOptions& options) {
    const auto weights = weights_for(problem);
    const double nu = problem.spec().nu;
    const int steps = problem.grid().N;

    SolutionSeries series;
    series.spec = problem.spec();

    StepState state = initial_state(problem, options.eps_reg);
    series.snapshots.push_back({0, 0.0, recover_v(state.y, nu)});

    for (int n = 0; n < steps; ++n) {
        StepDiagnostics diag;
        state = advance(state, problem, weights, options, &diag);
        series.steps.push_back(diag);
        const bool last = state.n == steps;
        if (last || (snapshot_stride > 0 && state.n % snapshot_stride == 0)) {
            series.snapshots.push_back({state.n, state.t, recover_v(state.y, nu)});
        }
    }
    series.final_y = std::move(state.y);
    return series;
}

} // namespace fracstep
