#pragma once

#include "cli/config.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracstep::cli {

/// Process exit codes shared by every command.
enum ExitCode : int {
    kExitOk = 0,
    kExitToleranceFailure = 1,
    kExitInvalidInput = 2,
    kExitSolverFailure = 3,
};

/// Runs `body`, translating exceptions into exit codes and messages on `err`.
int guarded(std::ostream& err, const std::function<int()>& body);

/// True when FRACSTEP_SEED_CHECKS=1 is set in the environment.
bool seed_checks_enabled();

// -- solve ------------------------------------------------------------------

struct SolveOptions {
    RunConfig config;
    std::filesystem::path out_dir = ".";
    bool long_format = false;
    bool spectral_checks = false;
};

/// Writes solution.csv (final level), snapshot_NNNNN.csv per stored level when
/// snapshot_stride > 0, solution_long.csv with --long, and manifest.txt.
int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err);

// -- verify -----------------------------------------------------------------

struct VerifyRow {
    double x = 0.0;
    double v = 0.0;
    double u = 0.0;
    double v_published = 0.0;
    double u_published = 0.0;
    double e_published = 0.0;
    double e() const { return v - u; }
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    double max_u_deviation = 0.0; // rows x = 0.0 .. 4.5
    double max_v_deviation = 0.0; // rows x = 0.0 .. 4.5
    std::size_t worst_u_row = 0;
    std::size_t worst_v_row = 0;
    bool sign_pattern_matches = false;
    std::vector<double> sign_mismatches; // abscissae where the sign of E differs
    bool passed = false;
};

inline constexpr double kVerifyUTolerance = 1e-4;
inline constexpr double kVerifyVTolerance = 5e-3;

/// Runs the reference alpha = 2, nu = 1 problem with time step k to t = 1 and
/// compares against the published table.
VerifyReport verify_reference(double k = 0.1, bool spectral_checks = false);

struct VerifyOptions {
    double k = 0.1;
    std::optional<std::filesystem::path> out_dir;
    bool spectral_checks = false;
};

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

// -- convergence ------------------------------------------------------------

enum class ConvergenceMode { automatic, exact, self };

struct ConvergenceOptions {
    RunConfig base;
    std::vector<double> k_list;
    std::vector<double> h_list;
    ConvergenceMode mode = ConvergenceMode::automatic;
    std::optional<std::filesystem::path> out_dir;
};

struct ConvergenceRow {
    double k = 0.0;
    double h = 0.0;
    double max_error = 0.0;
    std::optional<double> observed_order;
};

struct ConvergenceStudy {
    ConvergenceMode mode = ConvergenceMode::exact;
    std::vector<ConvergenceRow> rows;
};

/// Errors at t = 1 in the max-norm over the nodes of the coarsest grid.
/// Throws ConfigError for fewer than two levels, identical steps, or steps
/// that do not divide the interval / final time.
ConvergenceStudy convergence_study(const ConvergenceOptions& options);

int cmd_convergence(const ConvergenceOptions& options, std::ostream& out, std::ostream& err);

// -- weights ----------------------------------------------------------------

struct WeightsOptions {
    double alpha = 2.0;
    int count = 8;
    std::optional<std::filesystem::path> out_file;
};

/// CSV `i,w_i,partial_sum` on `out` (and to out_file when given).
int cmd_weights(const WeightsOptions& options, std::ostream& out, std::ostream& err);

// -- sweep ------------------------------------------------------------------

struct SweepCase {
    double value = 0.0;
    std::filesystem::path file;
    bool ok = false;
    std::string message;
};

struct SweepOptions {
    RunConfig base;
    std::string vary; // "alpha:1.2,1.4" or "nu:0.5,1"
    std::filesystem::path out_dir = ".";
    bool spectral_checks = false;
};

/// Parsed `--vary`; throws ConfigError on an unknown parameter or empty list.
std::pair<std::string, std::vector<double>> parse_vary(const std::string& vary);

/// The two published sweeps: alpha in {1.2,...,2.0} at nu = 1 and nu in
/// {0.2,...,2.0} at alpha = 1.5.
SweepOptions sweep_preset(const std::string& name, const std::filesystem::path& out_dir);

std::vector<SweepCase> run_sweep(const SweepOptions& options);

/// One CSV per case (sweep_<param>_<value>.csv) plus index.txt.
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

} // namespace fracstep::cli
