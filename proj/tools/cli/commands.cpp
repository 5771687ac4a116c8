#include "cli/commands.hpp"

#include "cli/output.hpp"
#include "cli/published_table.hpp"
#include "fracstep/error.hpp"
#include "fracstep/grunwald.hpp"
#include "fracstep/oracle.hpp"
#include "fracstep/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fracstep::cli {

namespace {

StepperOptions stepper_options(const RunConfig& config, bool spectral_checks) {
    StepperOptions o;
    o.eps_reg = config.eps_reg;
    o.corrector_iterations = config.corrector_iterations;
    o.spectral_checks = spectral_checks;
    return o;
}

// Number of steps of size `step` that exactly cover `span`.
int exact_count(double span, double step, const char* what) {
    if (!(step > 0.0)) throw ConfigError(std::string(what) + " must be positive");
    const double ratio = span / step;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw ConfigError(std::string(what) + " = " + format_value(step) + " does not divide " +
                          format_value(span));
    }
    return static_cast<int>(rounded);
}

std::string manifest_text(const std::string& command, const RunConfig& config,
                          const std::string& started, const std::vector<std::string>& outputs,
                          const SolutionSeries& series) {
    std::ostringstream m;
    m << "# fracstep run manifest; `fracstep solve --config <this file>` reproduces the outputs\n"
      << "run.command = " << command << '\n'
      << "run.started = " << started << '\n'
      << "run.finished = " << utc_now() << '\n';
    for (std::size_t i = 0; i < outputs.size(); ++i) m << "run.output." << i << " = " << outputs[i] << '\n';
    const double spectral = series.max_spectral_estimate();
    m << "run.min_dominance_margin = " << format_exact(series.min_margin()) << '\n'
      << "run.max_spectral_estimate = " << (std::isnan(spectral) ? "not computed" : format_exact(spectral))
      << '\n'
      << "run.clamp_count = " << series.clamp_count() << '\n'
      << to_config_text(config);
    return m.str();
}

} // namespace

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.code()) {
        case Errc::invalid_parameter:
        case Errc::invalid_spec:
        case Errc::singular_order:
            return kExitInvalidInput;
        default:
            return kExitSolverFailure;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolverFailure;
    }
}

bool seed_checks_enabled() {
    const char* v = std::getenv("FRACSTEP_SEED_CHECKS");
    return v != nullptr && std::string(v) == "1";
}

// ---------------------------------------------------------------------------

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string started = utc_now();
        const auto violations = validate(options.config.spec);
        if (!violations.empty()) {
            err << "invalid problem:\n";
            for (const auto& v : violations) err << "  - " << v << '\n';
            return static_cast<int>(kExitInvalidInput);
        }
        const auto problem = ValidProblem::check(options.config.spec);
        const auto series = run(problem, options.config.snapshot_stride,
                                stepper_options(options.config, options.spectral_checks));
        const GridSpec& g = problem.grid();

        std::vector<std::string> outputs;
        const auto final_path = options.out_dir / "solution.csv";
        solution_table(g.L, g.h, series.final().v).write(final_path);
        outputs.push_back(final_path.string());

        if (options.config.snapshot_stride > 0) {
            for (const auto& snap : series.snapshots) {
                char name[32];
                std::snprintf(name, sizeof name, "snapshot_%05d.csv", snap.n);
                const auto p = options.out_dir / name;
                solution_table(g.L, g.h, snap.v).write(p);
                outputs.push_back(p.string());
            }
        }
        if (options.long_format) {
            CsvTable t({"t", "x", "v"});
            for (const auto& snap : series.snapshots) {
                for (std::size_t j = 0; j < snap.v.size(); ++j) {
                    t.add_row({format_value(snap.t), format_value(g.x(j)), format_value(snap.v[j])});
                }
            }
            const auto p = options.out_dir / "solution_long.csv";
            t.write(p);
            outputs.push_back(p.string());
        }

        const auto manifest_path = options.out_dir / "manifest.txt";
        write_text(manifest_path, manifest_text("solve", options.config, started, outputs, series));

        out << "solved " << g.N << " steps to t = " << format_value(g.final_time()) << " on "
            << g.nodes() << " nodes; min dominance margin " << format_value(series.min_margin())
            << "\nwrote " << final_path.string() << " and " << manifest_path.string() << '\n';
        return static_cast<int>(kExitOk);
    });
}

// ---------------------------------------------------------------------------

VerifyReport verify_reference(double k, bool spectral_checks) {
    const auto table = published_rows();

    ProblemSpec spec = reference_problem(2.0, 1.0);
    spec.grid = make_grid(0.0, 5.0, 500, k, exact_count(1.0, k, "k"));
    const auto problem = ValidProblem::check(spec);
    StepperOptions opts;
    opts.spectral_checks = spectral_checks;
    const auto series = run(problem, 0, opts);
    const auto& v = series.final().v;

    const auto exact = oracle::make_heat_solution(spec.u0, 0.0, 5.0, 1.0, 1.0);

    VerifyReport rep;
    const GridSpec& g = problem.grid();
    for (const auto& row : table) {
        const auto j = static_cast<std::size_t>(std::lround((row.x - g.L) / g.h));
        VerifyRow r;
        r.x = row.x;
        r.v = v[j];
        r.u = oracle::heat_exact(exact, row.x, 1.0);
        r.v_published = row.v;
        r.u_published = row.u;
        r.e_published = row.e;
        rep.rows.push_back(r);
    }

    rep.sign_pattern_matches = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        if (r.x > 4.5 + 1e-9) continue; // the x = 5.0 error cell is self-inconsistent
        const double du = std::abs(r.u - r.u_published);
        const double dv = std::abs(r.v - r.v_published);
        if (du > rep.max_u_deviation) { rep.max_u_deviation = du; rep.worst_u_row = i; }
        if (dv > rep.max_v_deviation) { rep.max_v_deviation = dv; rep.worst_v_row = i; }
        if (r.e_published != 0.0 && (r.e() > 0.0) != (r.e_published > 0.0)) {
            rep.sign_pattern_matches = false;
            rep.sign_mismatches.push_back(r.x);
        }
    }
    rep.passed = rep.max_u_deviation <= kVerifyUTolerance && rep.max_v_deviation <= kVerifyVTolerance;
    return rep;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto rep = verify_reference(options.k, options.spectral_checks);

        CsvTable t({"x", "v", "u", "E", "v_published", "u_published", "E_published"});
        for (const auto& r : rep.rows) {
            t.add_row({format_value(r.x), format_value(r.v), format_value(r.u), format_value(r.e()),
                       format_value(r.v_published), format_value(r.u_published), format_value(r.e_published)});
        }
        out << t.str();
        if (options.out_dir) t.write(*options.out_dir / "verify.csv");

        out << "max |u - u_published| = " << format_value(rep.max_u_deviation) << " (tolerance "
            << format_value(kVerifyUTolerance) << ")\n"
            << "max |v - v_published| = " << format_value(rep.max_v_deviation) << " (tolerance "
            << format_value(kVerifyVTolerance) << ")\n"
            << "E sign pattern " << (rep.sign_pattern_matches ? "matches" : "differs");
        for (double x : rep.sign_mismatches) out << " x=" << format_value(x);
        out << "\nnote: the published x = 5.0 row lists E = 0.00273680 with v = u = 0; "
               "that cell is excluded\n";

        if (!rep.passed) {
            const auto& wu = rep.rows[rep.worst_u_row];
            const auto& wv = rep.rows[rep.worst_v_row];
            out << "FAIL: worst u row x = " << format_value(wu.x) << " (u = " << format_value(wu.u)
                << ", published " << format_value(wu.u_published) << "); worst v row x = "
                << format_value(wv.x) << " (v = " << format_value(wv.v) << ", published "
                << format_value(wv.v_published) << ")\n";
            return static_cast<int>(kExitToleranceFailure);
        }
        out << "PASS\n";
        return static_cast<int>(kExitOk);
    });
}

// ---------------------------------------------------------------------------

ConvergenceStudy convergence_study(const ConvergenceOptions& options) {
    const std::size_t nk = options.k_list.size();
    const std::size_t nh = options.h_list.size();
    if (nk == 0 || nh == 0) throw ConfigError("k-list and h-list must both be non-empty");
    if (nk > 1 && nh > 1 && nk != nh) throw ConfigError("k-list and h-list lengths differ");
    const std::size_t levels = std::max(nk, nh);
    if (levels < 2) throw ConfigError("a convergence study needs at least two levels");

    auto k_at = [&](std::size_t i) { return options.k_list[nk == 1 ? 0 : i]; };
    auto h_at = [&](std::size_t i) { return options.h_list[nh == 1 ? 0 : i]; };
    const bool k_varies = nk > 1;

    const ProblemSpec& base = options.base.spec;
    const double span = base.grid.R - base.grid.L;
    constexpr double t_final = 1.0;

    ConvergenceStudy study;
    const bool exact_ok = base.alpha == 2.0 && base.nu == 1.0 && !base.b &&
                          std::holds_alternative<ZeroProfile>(base.a) &&
                          std::holds_alternative<ZeroProfile>(base.f) &&
                          base.operator_mode == OperatorMode::left_rl;
    study.mode = options.mode == ConvergenceMode::automatic
                     ? (exact_ok ? ConvergenceMode::exact : ConvergenceMode::self)
                     : options.mode;
    if (study.mode == ConvergenceMode::exact && !exact_ok) {
        throw ConfigError("exact mode needs alpha = 2, nu = 1, constant c2, no advection or source, "
                          "left-rl operator");
    }

    auto solve_level = [&](double k, double h) {
        RunConfig cfg = options.base;
        cfg.spec.grid = make_grid(base.grid.L, base.grid.R, exact_count(span, h, "h"), k,
                                  exact_count(t_final, k, "k"));
        const auto problem = ValidProblem::check(cfg.spec);
        return run(problem, 0, stepper_options(cfg, false)).final().v;
    };

    double h_coarse = 0.0;
    for (std::size_t i = 0; i < levels; ++i) h_coarse = std::max(h_coarse, h_at(i));
    const int m_coarse = exact_count(span, h_coarse, "h");

    // Sample a level's solution on the coarsest grid's nodes.
    auto on_coarse = [&](const std::vector<double>& v, double h) {
        const int stride = exact_count(h_coarse, h, "h ratio");
        std::vector<double> out(static_cast<std::size_t>(m_coarse) + 1);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i * static_cast<std::size_t>(stride)];
        return out;
    };

    std::vector<double> reference(static_cast<std::size_t>(m_coarse) + 1);
    if (study.mode == ConvergenceMode::exact) {
        const auto sol = oracle::make_heat_solution(base.u0, base.grid.L, base.grid.R, base.c2, t_final);
        for (std::size_t i = 0; i < reference.size(); ++i) {
            reference[i] = oracle::heat_exact(sol, base.grid.L + static_cast<double>(i) * h_coarse, t_final);
        }
        reference.front() = reference.back() = 0.0;
    } else {
        double k_min = k_at(0), h_min = h_at(0);
        for (std::size_t i = 1; i < levels; ++i) {
            k_min = std::min(k_min, k_at(i));
            h_min = std::min(h_min, h_at(i));
        }
        const double k_ref = nk > 1 ? k_min / 4.0 : k_min;
        const double h_ref = nh > 1 ? h_min / 2.0 : h_min;
        reference = on_coarse(solve_level(k_ref, h_ref), h_ref);
    }

    for (std::size_t i = 0; i < levels; ++i) {
        const auto v = on_coarse(solve_level(k_at(i), h_at(i)), h_at(i));
        ConvergenceRow row;
        row.k = k_at(i);
        row.h = h_at(i);
        for (std::size_t j = 0; j < v.size(); ++j) row.max_error = std::max(row.max_error, std::abs(v[j] - reference[j]));
        if (i > 0) {
            const auto& prev = study.rows.back();
            const double s_prev = k_varies ? prev.k : prev.h;
            const double s = k_varies ? row.k : row.h;
            if (s_prev == s) throw ConfigError("identical step sizes give no observed order");
            if (prev.max_error > 0.0 && row.max_error > 0.0) {
                row.observed_order = std::log(prev.max_error / row.max_error) / std::log(s_prev / s);
            }
        }
        study.rows.push_back(row);
    }
    return study;
}

int cmd_convergence(const ConvergenceOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto violations = validate(options.base.spec);
        if (!violations.empty()) {
            err << "invalid problem:\n";
            for (const auto& v : violations) err << "  - " << v << '\n';
            return static_cast<int>(kExitInvalidInput);
        }
        const auto study = convergence_study(options);
        CsvTable t({"k", "h", "max_error", "observed_order"});
        for (const auto& r : study.rows) {
            t.add_row({format_value(r.k), format_value(r.h), format_value(r.max_error),
                       r.observed_order ? format_value(*r.observed_order) : std::string()});
        }
        out << "# mode: " << (study.mode == ConvergenceMode::exact ? "exact" : "self") << '\n' << t.str();
        if (options.out_dir) t.write(*options.out_dir / "convergence.csv");
        return static_cast<int>(kExitOk);
    });
}

// ---------------------------------------------------------------------------

int cmd_weights(const WeightsOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (options.count < 2) throw ConfigError("count must be at least 2");
        const auto table = compute_weights(options.alpha, static_cast<std::size_t>(options.count), 1);
        const auto sums = partial_sums(table);
        CsvTable t({"i", "w_i", "partial_sum"});
        for (std::size_t i = 0; i < table.size(); ++i) {
            t.add_row({std::to_string(i), format_exact(table.w[i]), format_exact(sums[i])});
        }
        out << t.str();
        if (options.out_file) t.write(*options.out_file);
        return static_cast<int>(kExitOk);
    });
}

// ---------------------------------------------------------------------------

std::pair<std::string, std::vector<double>> parse_vary(const std::string& vary) {
    const auto colon = vary.find(':');
    if (colon == std::string::npos) throw ConfigError("--vary expects alpha:<list> or nu:<list>");
    const auto param = vary.substr(0, colon);
    if (param != "alpha" && param != "nu") throw ConfigError("--vary parameter must be alpha or nu");
    std::vector<double> values;
    std::istringstream in(vary.substr(colon + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        values.push_back(parse_number(param, item));
    }
    if (values.empty()) throw ConfigError("--vary list for " + param + " is empty");
    return {param, values};
}

SweepOptions sweep_preset(const std::string& name, const std::filesystem::path& out_dir) {
    SweepOptions o;
    o.out_dir = out_dir;
    if (name == "reference-alpha") {
        o.base.spec = reference_problem(2.0, 1.0);
        o.vary = "alpha:1.2,1.4,1.6,1.8,2.0";
    } else if (name == "reference-nu") {
        o.base.spec = reference_problem(1.5, 1.0);
        o.vary = "nu:0.2,0.5,1.0,1.5,2.0";
    } else {
        throw ConfigError("unknown preset '" + name + "' (reference-alpha, reference-nu)");
    }
    return o;
}

std::vector<SweepCase> run_sweep(const SweepOptions& options) {
    const auto [param, values] = parse_vary(options.vary);

    std::vector<std::future<SweepCase>> jobs;
    for (double value : values) {
        jobs.push_back(std::async(std::launch::async, [&options, param = param, value] {
            SweepCase c;
            c.value = value;
            c.file = options.out_dir / ("sweep_" + param + "_" + format_value(value) + ".csv");
            RunConfig cfg = options.base;
            (param == "alpha" ? cfg.spec.alpha : cfg.spec.nu) = value;
            const auto violations = validate(cfg.spec);
            if (!violations.empty()) {
                c.message = violations.front();
                return c;
            }
            try {
                const auto problem = ValidProblem::check(cfg.spec);
                const auto series = run(problem, 0, stepper_options(cfg, options.spectral_checks));
                solution_table(problem.grid().L, problem.grid().h, series.final().v).write(c.file);
                c.ok = true;
                c.message = "min margin " + format_value(series.min_margin());
            } catch (const std::exception& e) {
                c.message = e.what();
            }
            return c;
        }));
    }

    std::vector<SweepCase> cases;
    for (auto& j : jobs) cases.push_back(j.get());
    return cases;
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string started = utc_now();
        const auto param = parse_vary(options.vary).first;
        const auto cases = run_sweep(options);

        std::ostringstream index;
        index << "# fracstep sweep index\n"
              << "run.command = sweep\n"
              << "run.vary = " << options.vary << '\n'
              << "run.started = " << started << '\n'
              << "run.finished = " << utc_now() << '\n';
        int ok = 0;
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const auto& c = cases[i];
            index << "run.case." << i << " = " << param << "=" << format_exact(c.value) << "; "
                  << (c.ok ? "ok; " + c.file.string() : "skipped") << "; " << c.message << '\n';
            out << param << " = " << format_value(c.value) << ": "
                << (c.ok ? "wrote " + c.file.string() : "skipped (" + c.message + ")") << '\n';
            ok += c.ok ? 1 : 0;
        }
        index << to_config_text(options.base);
        write_text(options.out_dir / "index.txt", index.str());
        if (ok == 0) {
            err << "error: every sweep case failed\n";
            return static_cast<int>(kExitToleranceFailure);
        }
        return static_cast<int>(kExitOk);
    });
}

} // namespace fracstep::cli
