#include "fracstep/model.hpp"

#include "fracstep/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace fracstep {

namespace {

template<class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Profile problems that make evaluation impossible on this grid.
std::optional<std::string> profile_error(const CoefficientProfile& profile, const GridSpec& grid) {
    if (const auto* g = std::get_if<GaussianProfile>(&profile)) {
        if (!(g->sigma > 0.0)) return "gaussian sigma must be positive";
    }
    if (const auto* t = std::get_if<TabulatedProfile>(&profile)) {
        if (t->values.size() != grid.nodes()) {
            return "tabulated profile has " + std::to_string(t->values.size()) +
                   " values, grid has " + std::to_string(grid.nodes()) + " nodes";
        }
    }
    return std::nullopt;
}

} // namespace

GridSpec make_grid(double L, double R, int M, double k, int N) {
    if (!std::isfinite(L) || !std::isfinite(R) || !(R > L)) {
        throw Error(Errc::invalid_parameter, "R must exceed L (L=" + num(L) + ", R=" + num(R) + ")");
    }
    if (M < 2) throw Error(Errc::invalid_parameter, "M must be at least 2");
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(Errc::invalid_parameter, "k must be positive");
    if (N < 1) throw Error(Errc::invalid_parameter, "N must be at least 1");
    GridSpec grid;
    grid.L = L;
    grid.R = R;
    grid.M = M;
    grid.h = (R - L) / static_cast<double>(M);
    grid.k = k;
    grid.N = N;
    return grid;
}

std::string profile_kind(const CoefficientProfile& profile) {
    return std::visit(overloaded{
                          [](const ZeroProfile&) { return std::string("zero"); },
                          [](const ConstantProfile&) { return std::string("constant"); },
                          [](const GaussianProfile&) { return std::string("gaussian"); },
                          [](const SineProfile&) { return std::string("sine"); },
                          [](const TabulatedProfile&) { return std::string("tabulated"); },
                      },
                      profile);
}

double evaluate(const CoefficientProfile& profile, double x, double L, double R) {
    return std::visit(
        overloaded{
            [](const ZeroProfile&) { return 0.0; },
            [](const ConstantProfile& c) { return c.value; },
            [x](const GaussianProfile& g) {
                const double d = x - g.center;
                return g.amp * std::exp(-d * d / (2.0 * g.sigma * g.sigma));
            },
            [x, L, R](const SineProfile& s) {
                return s.amp * std::sin(s.mode * std::numbers::pi * (x - L) / (R - L));
            },
            [x, L, R](const TabulatedProfile& t) {
                const auto& v = t.values;
                if (v.empty()) return 0.0;
                if (v.size() == 1) return v.front();
                const double pos = (x - L) / (R - L) * static_cast<double>(v.size() - 1);
                if (pos <= 0.0) return v.front();
                if (pos >= static_cast<double>(v.size() - 1)) return v.back();
                const auto j = static_cast<std::size_t>(pos);
                const double frac = pos - static_cast<double>(j);
                return (1.0 - frac) * v[j] + frac * v[j + 1];
            },
        },
        profile);
}

std::vector<double> eval_profile(const CoefficientProfile& profile, const GridSpec& grid) {
    if (auto err = profile_error(profile, grid)) throw Error(Errc::invalid_parameter, *err);
    if (const auto* t = std::get_if<TabulatedProfile>(&profile)) return t->values;

    std::vector<double> out(grid.nodes());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = evaluate(profile, grid.x(j), grid.L, grid.R);
    return out;
}

double TimeProfile::operator()(double t) const {
    switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::exponential: return std::exp(-rate * t);
    }
    return 1.0;
}

std::vector<std::string> validate(const ProblemSpec& spec) {
    std::vector<std::string> out;

    if (!(spec.alpha > 1.0 && spec.alpha <= 2.0)) {
        out.push_back("alpha out of (1,2]: " + num(spec.alpha));
    }
    if (!(spec.nu > 0.0) || !std::isfinite(spec.nu)) {
        out.push_back("nu must be positive: " + num(spec.nu));
    }
    if (!(spec.c2 >= 0.0) || !std::isfinite(spec.c2)) {
        out.push_back("c2 must be non-negative: " + num(spec.c2));
    }

    const GridSpec& g = spec.grid;
    bool grid_ok = true;
    if (!(g.R > g.L)) { out.push_back("grid: R must exceed L"); grid_ok = false; }
    if (g.M < 2) { out.push_back("grid: M must be at least 2"); grid_ok = false; }
    if (!(g.k > 0.0)) { out.push_back("grid: k must be positive"); grid_ok = false; }
    if (g.N < 1) { out.push_back("grid: N must be at least 1"); grid_ok = false; }
    if (grid_ok && std::abs(g.h * g.M - (g.R - g.L)) > 1e-12 * (g.R - g.L)) {
        out.push_back("grid: h * M does not equal R - L");
        grid_ok = false;
    }
    if (!grid_ok) return out;

    auto check_nodal = [&](const char* name, const CoefficientProfile& profile,
                           const char* negative_message, bool skip_boundaries) {
        if (auto err = profile_error(profile, g)) {
            out.push_back(std::string(name) + ": " + *err);
            return;
        }
        const auto values = eval_profile(profile, g);
        const std::size_t first = skip_boundaries ? 1 : 0;
        const std::size_t last = skip_boundaries ? values.size() - 1 : values.size();
        for (std::size_t j = first; j < last; ++j) {
            if (!std::isfinite(values[j])) {
                out.push_back(std::string(name) + " not finite at node " + std::to_string(j));
                return;
            }
        }
        for (std::size_t j = first; j < last; ++j) {
            if (values[j] < 0.0) {
                out.push_back(std::string(negative_message) + " (node " + std::to_string(j) +
                              ", value " + num(values[j]) + ")");
                return;
            }
        }
    };

    // Boundary nodes of u0 are overwritten with zero, so only the interior is checked.
    check_nodal("u0", spec.u0, "initial data not non-negative", true);
    check_nodal("a", spec.a, "advection coefficient a not non-negative", false);
    check_nodal("b", spec.diffusion(), "diffusion coefficient b not non-negative", false);
    if (auto err = profile_error(spec.f, g)) out.push_back(std::string("f: ") + *err);
    if (spec.f_time.kind == TimeProfile::Kind::exponential && !std::isfinite(spec.f_time.rate)) {
        out.push_back("f time rate not finite");
    }
    return out;
}

ValidProblem ValidProblem::check(ProblemSpec spec) {
    const auto violations = validate(spec);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations) {
            if (!msg.empty()) msg += "; ";
            msg += v;
        }
        throw Error(Errc::invalid_spec, msg);
    }

    ValidProblem p;
    p.u0_ = eval_profile(spec.u0, spec.grid);
    p.u0_.front() = 0.0;
    p.u0_.back() = 0.0;
    p.a_ = eval_profile(spec.a, spec.grid);
    p.b_ = eval_profile(spec.diffusion(), spec.grid);
    p.f_space_ = eval_profile(spec.f, spec.grid);
    p.spec_ = std::move(spec);
    return p;
}

std::vector<double> ValidProblem::source(double t) const {
    const double g = spec_.f_time(t);
    std::vector<double> out(f_space_.size());
    std::transform(f_space_.begin(), f_space_.end(), out.begin(), [g](double f) { return f * g; });
    return out;
}

GaussianProfile reference_gaussian() {
    constexpr double sigma = 0.3;
    return GaussianProfile{2.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma), 2.5, sigma};
}

ProblemSpec reference_problem(double alpha, double nu) {
    ProblemSpec spec;
    spec.alpha = alpha;
    spec.nu = nu;
    spec.c2 = 1.0;
    spec.u0 = reference_gaussian();
    spec.grid = make_grid(0.0, 5.0, 500, 0.1, 10);
    return spec;
}

} // namespace fracstep
