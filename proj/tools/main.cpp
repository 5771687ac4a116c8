// fracstep: implicit Euler / shifted Grünwald solver for nonlinear fractional
// advection-diffusion problems.
//
//   fracstep solve --config run.cfg --out results/
//   fracstep verify
//   fracstep convergence --k-list 0.1,0.05,0.025 --h-list 0.01
//   fracstep weights --alpha 1.5 --count 8
//   fracstep sweep --preset reference-nu --out sweep/

#include "cli/commands.hpp"
#include "cli/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace fracstep::cli;

namespace {

// Problem flags shared by solve, convergence and sweep. Everything is kept as
// text and funnelled through the config reader so flags and files agree.
struct ProblemFlags {
    std::string config;
    std::optional<std::string> alpha, nu, c2, L, R, M, k, N;
    std::optional<std::string> ic, a, b, f, op, corrector_iters, snapshot_stride, eps_reg;

    void attach(CLI::App* app, bool with_grid = true) {
        app->add_option("--config", config, "key = value problem file");
        app->add_option("--alpha", alpha, "fractional order, 1 < alpha <= 2");
        app->add_option("--nu", nu, "nonlinearity exponent, nu > 0");
        app->add_option("--c2", c2, "constant diffusion coefficient");
        app->add_option("--L", L, "left endpoint");
        app->add_option("--R", R, "right endpoint");
        if (with_grid) {
            app->add_option("--M", M, "space subdivisions");
            app->add_option("--k", k, "time step");
            app->add_option("--N", N, "time steps");
        }
        app->add_option("--ic", ic, "initial data, e.g. gaussian:amp=A,center=C,sigma=S");
        app->add_option("--a", a, "advection profile, e.g. constant:value=0.5");
        app->add_option("--b", b, "diffusion profile (overrides c2)");
        app->add_option("--f", f, "source profile in x");
        app->add_option("--operator", op, "left-rl | riesz");
        app->add_option("--corrector-iters", corrector_iters, "corrector passes per step");
        app->add_option("--snapshot-stride", snapshot_stride, "keep every n-th level");
        app->add_option("--eps-reg", eps_reg, "weight regularisation floor");
    }

    RunConfig resolve() const {
        KeyValues kv;
        if (!config.empty()) kv = read_config_file(config);
        auto put = [&kv](const char* key, const std::optional<std::string>& v) {
            if (v) kv[key] = *v;
        };
        put("alpha", alpha);
        put("nu", nu);
        put("c2", c2);
        put("L", L);
        put("R", R);
        put("M", M);
        put("k", k);
        put("N", N);
        put("operator_mode", op);
        put("corrector_iters", corrector_iters);
        put("snapshot_stride", snapshot_stride);
        put("eps_reg", eps_reg);
        if (ic) apply_profile_flag(kv, "ic", *ic);
        if (a) apply_profile_flag(kv, "a", *a);
        if (b) apply_profile_flag(kv, "b", *b);
        if (f) apply_profile_flag(kv, "f", *f);
        return apply_key_values(kv);
    }
};

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) out.push_back(parse_number(key, item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracstep: nonlinear fractional advection-diffusion solver"};
    app.require_subcommand(1);

    ProblemFlags solve_flags;
    std::string solve_out = ".";
    bool solve_long = false;
    auto* solve = app.add_subcommand("solve", "solve one problem and write CSV + manifest");
    solve_flags.attach(solve);
    solve->add_option("--out", solve_out, "output directory");
    solve->add_flag("--long", solve_long, "also write solution_long.csv (t,x,v)");

    double verify_k = 0.1;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "compare the reference run with the published table");
    verify->add_option("--k", verify_k, "time step (must divide 1)");
    verify->add_option("--out", verify_out, "directory for verify.csv");

    ProblemFlags conv_flags;
    std::string k_list = "0.1,0.05,0.025", h_list = "0.01", conv_mode = "auto", conv_out;
    auto* conv = app.add_subcommand("convergence", "observed orders at t = 1");
    conv_flags.attach(conv, false);
    conv->add_option("--k-list", k_list, "comma-separated time steps");
    conv->add_option("--h-list", h_list, "comma-separated space steps");
    conv->add_option("--mode", conv_mode, "auto | exact | self");
    conv->add_option("--out", conv_out, "directory for convergence.csv");

    std::string w_alpha = "2", w_count = "8", w_out;
    auto* weights = app.add_subcommand("weights", "dump Grünwald-Letnikov weights");
    weights->add_option("--alpha", w_alpha, "order alpha > 0");
    weights->add_option("--count", w_count, "number of weights (>= 2)");
    weights->add_option("--out", w_out, "CSV file");

    ProblemFlags sweep_flags;
    std::string vary, preset, sweep_out = ".";
    auto* sweep = app.add_subcommand("sweep", "solve a family of problems varying alpha or nu");
    sweep_flags.attach(sweep);
    sweep->add_option("--vary", vary, "alpha:<list> or nu:<list>");
    sweep->add_option("--preset", preset, "reference-alpha | reference-nu");
    sweep->add_option("--out", sweep_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidInput;
    }

    const bool checks = seed_checks_enabled();

    if (*solve) {
        SolveOptions o;
        const int rc = guarded(std::cerr, [&] {
            o.config = solve_flags.resolve();
            return 0;
        });
        if (rc != 0) return rc;
        o.out_dir = solve_out;
        o.long_format = solve_long;
        o.spectral_checks = checks;
        return cmd_solve(o, std::cout, std::cerr);
    }
    if (*verify) {
        VerifyOptions o;
        o.k = verify_k;
        if (!verify_out.empty()) o.out_dir = verify_out;
        o.spectral_checks = checks;
        return cmd_verify(o, std::cout, std::cerr);
    }
    if (*conv) {
        ConvergenceOptions o;
        const int rc = guarded(std::cerr, [&] {
            o.base = conv_flags.resolve();
            o.k_list = parse_list("k-list", k_list);
            o.h_list = parse_list("h-list", h_list);
            if (conv_mode == "exact") o.mode = ConvergenceMode::exact;
            else if (conv_mode == "self") o.mode = ConvergenceMode::self;
            else if (conv_mode != "auto") throw ConfigError("--mode must be auto, exact or self");
            return 0;
        });
        if (rc != 0) return rc;
        if (!conv_out.empty()) o.out_dir = conv_out;
        return cmd_convergence(o, std::cout, std::cerr);
    }
    if (*weights) {
        WeightsOptions o;
        const int rc = guarded(std::cerr, [&] {
            o.alpha = parse_number("alpha", w_alpha);
            o.count = parse_int("count", w_count);
            return 0;
        });
        if (rc != 0) return rc;
        if (!w_out.empty()) o.out_file = w_out;
        return cmd_weights(o, std::cout, std::cerr);
    }
    if (*sweep) {
        SweepOptions o;
        const int rc = guarded(std::cerr, [&] {
            if (!preset.empty()) {
                o = sweep_preset(preset, sweep_out);
            } else {
                o.base = sweep_flags.resolve();
                o.vary = vary;
                o.out_dir = sweep_out;
            }
            return 0;
        });
        if (rc != 0) return rc;
        o.spectral_checks = checks;
        return cmd_sweep(o, std::cout, std::cerr);
    }
    return kExitInvalidInput;
}
