#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fracstep {

/// Uniform space-time mesh: x_j = L + j h for 0 <= j <= M, t^n = n k for 0 <= n <= N.
struct GridSpec {
    double L = 0.0;
    double R = 1.0;
    int M = 2;
    double h = 0.5;
    double k = 1.0;
    int N = 1;

    std::size_t nodes() const noexcept { return static_cast<std::size_t>(M) + 1; }
    double x(std::size_t j) const noexcept { return L + static_cast<double>(j) * h; }
    double t(int n) const noexcept { return static_cast<double>(n) * k; }
    double final_time() const noexcept { return t(N); }
};

/// Throws Error(invalid_parameter) naming the offending field.
GridSpec make_grid(double L, double R, int M, double k, int N);

struct ZeroProfile {};

struct ConstantProfile {
    double value = 0.0;
};

/// amp * exp(-(x - center)^2 / (2 sigma^2))
struct GaussianProfile {
    double amp = 1.0;
    double center = 0.0;
    double sigma = 1.0;
};

/// amp * sin(mode * pi * (x - L) / (R - L)); the Dirichlet eigenfunctions.
struct SineProfile {
    double amp = 1.0;
    int mode = 1;
};

/// Nodal values on the M+1 grid nodes; linear interpolation between nodes
/// when evaluated off-grid.
struct TabulatedProfile {
    std::vector<double> values;
};

using CoefficientProfile =
    std::variant<ZeroProfile, ConstantProfile, GaussianProfile, SineProfile, TabulatedProfile>;

std::string profile_kind(const CoefficientProfile& profile);

/// Pointwise value at x on the interval [L, R].
double evaluate(const CoefficientProfile& profile, double x, double L, double R);

/// Values at x_0..x_M. Throws Error(invalid_parameter) when a tabulated
/// profile does not have M+1 entries or a Gaussian has sigma <= 0.
std::vector<double> eval_profile(const CoefficientProfile& profile, const GridSpec& grid);

/// Time factor of the source term f(x, t) = f_space(x) * g(t).
struct TimeProfile {
    enum class Kind { constant, exponential };
    Kind kind = Kind::constant;
    double rate = 0.0; // g(t) = exp(-rate t) for the exponential kind

    double operator()(double t) const;
};

enum class OperatorMode { left_rl, riesz };

/// Equation parameters, coefficient profiles, grid and initial data for
///   du/dt = -a(x) du/dx + b(x) D^alpha (u^nu) + f(x, t)
/// with homogeneous Dirichlet data at both ends. When `b` is empty the
/// diffusion coefficient is the constant c2.
struct ProblemSpec {
    double alpha = 2.0;
    double nu = 1.0;
    double c2 = 1.0;
    CoefficientProfile a = ZeroProfile{};
    std::optional<CoefficientProfile> b;
    CoefficientProfile f = ZeroProfile{};
    TimeProfile f_time;
    CoefficientProfile u0 = ZeroProfile{};
    OperatorMode operator_mode = OperatorMode::left_rl;
    GridSpec grid;

    CoefficientProfile diffusion() const {
        return b ? *b : CoefficientProfile{ConstantProfile{c2}};
    }
};

/// Every violated hypothesis of the scheme; empty means the spec is admissible.
std::vector<std::string> validate(const ProblemSpec& spec);

/// A ProblemSpec that passed validate(), with its nodal data resolved.
///
/// The solver only accepts this type. The initial data is clamped to zero
/// at x_0 and x_M.
class ValidProblem {
public:
    /// Throws Error(invalid_spec) listing all violations.
    static ValidProblem check(ProblemSpec spec);

    const ProblemSpec& spec() const noexcept { return spec_; }
    const GridSpec& grid() const noexcept { return spec_.grid; }
    const std::vector<double>& u0() const noexcept { return u0_; }
    const std::vector<double>& advection() const noexcept { return a_; }
    const std::vector<double>& diffusion() const noexcept { return b_; }

    /// Source values f(x_j, t) at every node.
    std::vector<double> source(double t) const;

private:
    ValidProblem() = default;

    ProblemSpec spec_;
    std::vector<double> u0_;
    std::vector<double> a_;
    std::vector<double> b_;
    std::vector<double> f_space_;
};

/// The Gaussian initial datum of the reference experiment:
/// 2 / sqrt(2 pi 0.3^2) * exp(-(x - 2.5)^2 / (2 * 0.3^2)).
GaussianProfile reference_gaussian();

/// The reference experiment on [0, 5]: M = 500, k = 0.1, N = 10, c2 = 1.
ProblemSpec reference_problem(double alpha, double nu);

} // namespace fracstep
