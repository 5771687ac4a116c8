#pragma once

#include "fracstep/grunwald.hpp"
#include "fracstep/model.hpp"
#include "fracstep/system.hpp"

#include <limits>
#include <span>
#include <vector>

namespace fracstep {

/// Time level n with the transformed unknown y = v^nu and the nodal weights
/// delta_j = nu * v_j^(nu - 1).
struct StepState {
    int n = 0;
    double t = 0.0;
    std::vector<double> y;
    std::vector<double> delta;
};

struct StepperOptions {
    /// Floor applied to y before raising it to (nu - 1) / nu.
    double eps_reg = 1e-12;
    /// Corrector passes per step; 1 is the plain predictor-corrector sweep.
    int corrector_iterations = 1;
    /// Early exit for repeated corrector passes.
    double corrector_tol = 1e-12;
    /// Per-step power iteration on A^{-1} with hard checks on the margin and
    /// spectral bound. Expensive; off by default.
    bool spectral_checks = false;
    int spectral_iterations = 100;
};

struct StepDiagnostics {
    int n = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    double spectral_estimate = std::numeric_limits<double>::quiet_NaN();
    int clamp_count = 0;
    double min_value = 0.0; // most negative raw entry before clamping
    int corrector_passes = 0;
    double corrector_change = 0.0; // ||y_last - y_previous||_inf of the final pass
};

struct Snapshot {
    int n = 0;
    double t = 0.0;
    std::vector<double> v;
};

struct SolutionSeries {
    ProblemSpec spec;
    std::vector<Snapshot> snapshots;
    std::vector<StepDiagnostics> steps;
    std::vector<double> final_y;

    double min_margin() const;
    double max_spectral_estimate() const; // NaN when no step computed one
    int clamp_count() const;
    const Snapshot& final() const { return snapshots.back(); }
};

/// delta_j = nu * max(y_j, eps_reg)^((nu - 1) / nu); exactly 1 when nu == 1.
std::vector<double> delta_weights(std::span<const double> y, double nu, double eps_reg = 1e-12);

/// v_j = y_j^(1/nu). Entries in (-1e-10, 0) read as zero; anything more
/// negative throws Error(positivity_violation).
std::vector<double> recover_v(std::span<const double> y, double nu);

/// y^0 = u0^nu on the nodes (boundaries zero) and its weights.
StepState initial_state(const ValidProblem& problem, double eps_reg = 1e-12);

/// Solves the step with the lagged weights state.delta.
std::vector<double> predictor(const StepState& state, const ValidProblem& problem,
                              const WeightTable& weights);

/// Recomputes the weights from y_aux and re-solves the same step from state.y.
std::vector<double> corrector(const StepState& state, std::span<const double> y_aux,
                              const ValidProblem& problem, const WeightTable& weights,
                              double eps_reg = 1e-12);

/// Predictor, weight update, corrector; returns the state at n + 1.
///
/// Throws Error(positivity_violation) if any new value is below -1e-10.
StepState advance(const StepState& state, const ValidProblem& problem, const WeightTable& weights,
                  const StepperOptions& options = {}, StepDiagnostics* diagnostics = nullptr);

/// Runs N steps. Snapshots are kept every `snapshot_stride` steps (0 keeps
/// only the initial and final levels); the final level is always stored.
SolutionSeries run(const ValidProblem& problem, int snapshot_stride = 0,
                   const StepperOptions& options = {});

/// Weight table long enough for every row of the problem's systems.
WeightTable weights_for(const ValidProblem& problem);

} // namespace fracstep
