#include "fracstep/oracle.hpp"
#include "fracstep/stepper.hpp"
#include "support/expect_error.hpp"
#include "support/random_problems.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fracstep;
using fracstep::testing::error_code_of;

namespace {

double sup(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

ProblemSpec small_spec(double alpha, double nu, int M = 8) {
    ProblemSpec s;
    s.alpha = alpha;
    s.nu = nu;
    s.grid = make_grid(0.0, 1.0, M, 0.01, 5);
    s.u0 = GaussianProfile{1.0, 0.5, 0.15};
    return s;
}

} // namespace

TEST_CASE("delta_weights examples") {
    const std::vector<double> y{0.0, 0.3, 7.0};
    for (double d : delta_weights(y, 1.0)) CHECK(d == 1.0);

    const std::vector<double> four{4.0};
    CHECK(delta_weights(four, 2.0)[0] == doctest::Approx(4.0).epsilon(1e-15));

    const std::vector<double> zero{0.0};
    CHECK(delta_weights(zero, 0.5, 1e-12)[0] == doctest::Approx(5e11).epsilon(1e-12));
}

TEST_CASE("recover_v") {
    const std::vector<double> y{0.0, 4.0, 0.0};
    CHECK(recover_v(y, 2.0) == std::vector<double>{0.0, 2.0, 0.0});
    const std::vector<double> z{0.1, 0.2, 0.3};
    CHECK(recover_v(z, 1.0) == z);
    const std::vector<double> tiny{-1e-11};
    CHECK(recover_v(tiny, 1.5)[0] == 0.0);
    const std::vector<double> neg{-1e-6};
    CHECK(error_code_of([&] { recover_v(neg, 1.0); }) == Errc::positivity_violation);
}

TEST_CASE("recover_v inverts the power map") {
    const auto grid = make_grid(0.0, 5.0, 500, 0.1, 10);
    const auto u = eval_profile(reference_gaussian(), grid);
    for (double nu : {0.2, 0.5, 1.5, 2.0, 3.0}) {
        std::vector<double> y(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) y[j] = std::pow(u[j], nu);
        const auto back = recover_v(y, nu);
        for (std::size_t j = 0; j < u.size(); ++j) CHECK(std::abs(back[j] - u[j]) <= 1e-13);
    }
}

TEST_CASE("initial state is the clamped power of u0") {
    const auto p = ValidProblem::check(reference_problem(1.5, 2.0));
    const auto s = initial_state(p);
    CHECK(s.n == 0);
    CHECK(s.y.front() == 0.0);
    CHECK(s.y.back() == 0.0);
    CHECK(s.y[250] == doctest::Approx(2.6596152026762178 * 2.6596152026762178));
    CHECK(s.delta[250] == doctest::Approx(2.0 * 2.6596152026762178));
}

TEST_CASE("zero state stays zero") {
    auto spec = small_spec(1.5, 0.5);
    spec.u0 = ZeroProfile{};
    const auto p = ValidProblem::check(spec);
    const auto w = weights_for(p);
    const auto s0 = initial_state(p);
    for (double x : predictor(s0, p, w)) CHECK(x == 0.0);
    for (double x : corrector(s0, s0.y, p, w)) CHECK(x == 0.0);
    const auto s1 = advance(s0, p, w);
    CHECK(s1.n == 1);
    for (double x : s1.y) CHECK(x == 0.0);

    const auto series = run(p, 1);
    CHECK(series.snapshots.size() == 6);
    for (const auto& snap : series.snapshots) {
        for (double v : snap.v) CHECK(v == 0.0);
    }
}

TEST_CASE("nu = 1: predictor and corrector solve the same system") {
    const auto p = ValidProblem::check(small_spec(1.7, 1.0, 32));
    const auto w = weights_for(p);
    const auto s0 = initial_state(p);
    const auto aux = predictor(s0, p, w);
    const auto next = corrector(s0, aux, p, w);
    CHECK(next == aux);
}

TEST_CASE("one step from the Gaussian matches the classical heat step") {
    const auto p = ValidProblem::check(reference_problem(2.0, 1.0));
    const auto w = weights_for(p);
    const auto s0 = initial_state(p);
    const auto aux = predictor(s0, p, w);
    const auto ref = oracle::classical_heat_step(s0.y, 1000.0);
    CHECK(max_diff(aux, ref) <= 1e-10);
}

TEST_CASE("alpha = 2, nu = 1 run equals the classical heat solver at every step") {
    const auto p = ValidProblem::check(reference_problem(2.0, 1.0));
    const auto series = run(p, 1);
    REQUIRE(series.snapshots.size() == 11);
    std::vector<double> y = p.u0();
    for (int n = 1; n <= 10; ++n) {
        y = oracle::classical_heat_step(y, 1000.0);
        CHECK(max_diff(series.snapshots[n].v, y) <= 1e-10);
    }
}

TEST_CASE("iterated corrector converges to the fixed point") {
    const auto p = ValidProblem::check(small_spec(1.5, 2.0));
    const auto w = weights_for(p);
    const auto s0 = initial_state(p);

    // Reference: iterate the corrector to stagnation.
    std::vector<double> y = predictor(s0, p, w);
    for (int it = 0; it < 200; ++it) {
        auto next = corrector(s0, y, p, w);
        const double change = max_diff(next, y);
        y = std::move(next);
        if (change < 1e-14) break;
    }

    StepperOptions iterated;
    iterated.corrector_iterations = 20;
    StepDiagnostics diag;
    const auto fixed = advance(s0, p, w, iterated, &diag);
    CHECK(max_diff(fixed.y, y) <= 1e-12);
    CHECK(diag.corrector_passes >= 2);
    CHECK(diag.corrector_change < 1e-12);

    // The single sweep sits within one corrector update of the fixed point.
    const auto single = advance(s0, p, w);
    const auto aux = predictor(s0, p, w);
    const double one_pass_gap = max_diff(single.y, aux);
    CHECK(max_diff(single.y, y) <= one_pass_gap);
}

TEST_CASE("run keeps snapshots at the requested stride") {
    const auto p = ValidProblem::check(small_spec(1.5, 1.0));
    CHECK(run(p, 0).snapshots.size() == 2);
    const auto s2 = run(p, 2);
    REQUIRE(s2.snapshots.size() == 4);
    CHECK(s2.snapshots[1].n == 2);
    CHECK(s2.snapshots[2].n == 4);
    CHECK(s2.snapshots[3].n == 5);
    CHECK(s2.final().t == doctest::Approx(0.05));
    CHECK(s2.snapshots[0].v == p.u0());
    CHECK(s2.steps.size() == 5);
    CHECK(std::isnan(s2.max_spectral_estimate()));
}

TEST_CASE("spectral checks record estimates") {
    const auto p = ValidProblem::check(small_spec(1.3, 0.5));
    StepperOptions o;
    o.spectral_checks = true;
    const auto series = run(p, 0, o);
    CHECK(series.max_spectral_estimate() <= 1.0 + 1e-8);
    CHECK(series.min_margin() >= 1.0 - 1e-12);
}

TEST_CASE("unconditional stability at lambda = 1e6") {
    ProblemSpec s = reference_problem(2.0, 1.0);
    s.grid = make_grid(0.0, 5.0, 500, 100.0, 5);
    const auto p = ValidProblem::check(s);
    const auto series = run(p, 1);
    double prev = sup(series.snapshots[0].v);
    for (std::size_t n = 1; n < series.snapshots.size(); ++n) {
        const auto& v = series.snapshots[n].v;
        CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);
        CHECK(sup(v) <= prev + 1e-12);
        // No sign alternation between neighbours.
        for (std::size_t j = 1; j + 1 < v.size(); ++j) CHECK(v[j] >= 0.0);
        prev = sup(v);
    }
}

TEST_CASE("alpha = 1.5 nu sweep curves are non-negative and contract in y") {
    for (double nu : {0.2, 0.5, 1.0, 1.5, 2.0}) {
        CAPTURE(nu);
        const auto p = ValidProblem::check(reference_problem(1.5, nu));
        const auto series = run(p, 1);
        double prev = std::pow(sup(series.snapshots[0].v), nu);
        for (std::size_t n = 1; n < series.snapshots.size(); ++n) {
            const auto& v = series.snapshots[n].v;
            CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);
            const double y_sup = std::pow(sup(v), nu);
            CHECK(y_sup <= prev * (1.0 + 1e-12) + 1e-12);
            prev = y_sup;
        }
    }
}

TEST_CASE("randomized runs contract and stay non-negative") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 40; ++trial) {
        auto rc = testing::random_case(rng, 48);
        CAPTURE(trial);
        const auto p = ValidProblem::check(rc.spec);
        const auto w = weights_for(p);
        auto state = initial_state(p);
        for (int n = 0; n < p.grid().N; ++n) {
            StepDiagnostics d;
            auto next = advance(state, p, w, {}, &d);
            CHECK(sup(next.y) <= sup(state.y) + 1e-12);
            CHECK(d.min_value >= -1e-12);
            CHECK(d.min_margin >= 1.0 - 1e-12);
            state = std::move(next);
        }
    }
}

TEST_CASE("runs are deterministic") {
    const auto p = ValidProblem::check(small_spec(1.4, 0.7, 40));
    CHECK(run(p, 1).final().v == run(p, 1).final().v);
}
