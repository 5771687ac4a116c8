#include "fracstep/oracle.hpp"
#include "fracstep/system.hpp"
#include "support/expect_error.hpp"
#include "support/random_problems.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fracstep;
using fracstep::testing::error_code_of;

namespace {

// M = 4 on [0, 4] with h = 1, k = 1: lambda = 1.
ValidProblem small_problem(double alpha = 2.0) {
    ProblemSpec s;
    s.alpha = alpha;
    s.nu = 1.0;
    s.c2 = 1.0;
    s.grid = make_grid(0.0, 4.0, 4, 1.0, 1);
    return ValidProblem::check(s);
}

HessenbergSystem assemble_with(const ValidProblem& p, std::vector<double> y_prev,
                               std::vector<double> delta = {}) {
    const std::size_t n = p.grid().nodes();
    if (delta.empty()) delta.assign(n, 1.0);
    const std::vector<double> f(n, 0.0);
    return assemble(p, compute_weights(p.spec().alpha, n + 1), delta, y_prev, f);
}

double norm_inf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST_CASE("M = 4 interior rows are (-1, 3, -1)") {
    const auto sys = assemble_with(small_problem(), {0, 1, 1, 1, 0});
    for (std::size_t i = 1; i <= 3; ++i) {
        CHECK(sys.at(i, i - 1) == -1.0);
        CHECK(sys.at(i, i) == 3.0);
        CHECK(sys.at(i, i + 1) == -1.0);
        for (std::size_t j = 0; j + 1 < i; ++j) CHECK(sys.at(i, j) == 0.0);
    }
    CHECK(sys.at(0, 0) == 1.0);
    CHECK(sys.at(0, 1) == 0.0);
    CHECK(sys.at(4, 4) == 1.0);
    for (std::size_t j = 0; j < 4; ++j) CHECK(sys.at(4, j) == 0.0);
    CHECK(dominance_margin(sys) == 1.0);
    CHECK(inverse_norm_bound(sys) == 1.0);
    CHECK(is_m_matrix(sys));
    CHECK(sys.rhs == std::vector<double>{0, 1, 1, 1, 0});
}

TEST_CASE("M = 4 solve agrees with the dense pivoting solver") {
    const auto sys = assemble_with(small_problem(), {0, 1, 1, 1, 0});
    const auto y = solve(sys);
    const auto ref = oracle::dense_solve(to_dense(sys), sys.rhs);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y[i] - ref[i]) <= 1e-12);
    CHECK(residual_norm(sys, y) <= 1e-10);
}

TEST_CASE("M = 4 spectral estimate") {
    const auto sys = assemble_with(small_problem(), {0, 1, 1, 1, 0});
    CHECK(inverse_spectral_estimate(sys, 200) <= 1.0 + 1e-8);
}

TEST_CASE("lambda = 0 gives the identity") {
    ProblemSpec s;
    s.c2 = 0.0;
    s.grid = make_grid(0.0, 1.0, 6, 0.1, 1);
    const auto p = ValidProblem::check(s);
    const std::vector<double> y{0, 1, 2, 3, 4, 5, 0};
    const auto sys = assemble_with(p, y);
    for (std::size_t i = 0; i < sys.size(); ++i) {
        for (std::size_t j = 0; j < sys.size(); ++j) CHECK(sys.at(i, j) == (i == j ? 1.0 : 0.0));
    }
    CHECK(sys.rhs == y);
    CHECK(solve(sys) == y);
}

TEST_CASE("reference mesh gives lambda = 1000 and diagonal 2001") {
    const auto p = ValidProblem::check(reference_problem(2.0, 1.0));
    const std::vector<double> y(p.grid().nodes(), 0.0);
    const auto sys = assemble_with(p, y);
    CHECK(sys.lambda[100] == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(sys.at(100, 100) == doctest::Approx(2001.0).epsilon(1e-12));
    CHECK(sys.at(100, 99) == doctest::Approx(-1000.0).epsilon(1e-12));
    CHECK(sys.at(100, 98) == 0.0);
}

TEST_CASE("residual on the reference mesh") {
    const auto p = ValidProblem::check(reference_problem(2.0, 1.0));
    const auto y0 = eval_profile(reference_gaussian(), p.grid());
    const auto sys = assemble_with(p, y0);
    const auto y = solve(sys);
    CHECK(residual_norm(sys, y) <= 1e-10 * std::max(1.0, norm_inf(sys.rhs)));
}

TEST_CASE("advection adds to the diagonal and first sub-diagonal") {
    ProblemSpec s;
    s.grid = make_grid(0.0, 4.0, 4, 1.0, 1);
    s.a = ConstantProfile{0.5};
    const auto sys = assemble_with(ValidProblem::check(s), {0, 1, 1, 1, 0});
    CHECK(sys.at(2, 2) == 3.5);
    CHECK(sys.at(2, 1) == -1.5);
    CHECK(sys.at(2, 3) == -1.0);
    CHECK(dominance_margin(sys) == doctest::Approx(1.0));
}

TEST_CASE("source enters the rhs weighted by delta") {
    ProblemSpec s;
    s.grid = make_grid(0.0, 4.0, 4, 0.5, 1);
    const auto p = ValidProblem::check(s);
    const std::vector<double> delta{1, 2, 3, 4, 5}, y{0, 1, 1, 1, 0}, f{7, 1, 1, 1, 7};
    const auto sys = assemble(p, compute_weights(2.0, 6), delta, y, f);
    CHECK(sys.rhs[0] == 0.0);
    CHECK(sys.rhs[2] == doctest::Approx(1.0 + 0.5 * 3.0));
    CHECK(sys.rhs[4] == 0.0);
}

TEST_CASE("Riesz mode scales the diffusion part") {
    ProblemSpec s;
    s.grid = make_grid(0.0, 4.0, 4, 1.0, 1);
    s.operator_mode = OperatorMode::riesz;
    const auto sys = assemble_with(ValidProblem::check(s), {0, 1, 1, 1, 0});
    CHECK(sys.at(2, 2) == doctest::Approx(2.0));
    CHECK(sys.at(2, 1) == doctest::Approx(-0.5));
}

TEST_CASE("assemble error paths") {
    const auto p = small_problem();
    const std::vector<double> y(5, 0.0), f(5, 0.0);
    const std::vector<double> bad_delta{1, 1, -0.5, 1, 1};
    CHECK(error_code_of([&] { assemble(p, compute_weights(2.0, 6), bad_delta, y, f); }) ==
          Errc::invalid_weight);
    const std::vector<double> delta(5, 1.0);
    CHECK(error_code_of([&] { assemble(p, compute_weights(2.0, 5), delta, y, f); }) ==
          Errc::insufficient_weights);
    const std::vector<double> short_y(4, 0.0);
    CHECK(error_code_of([&] { assemble(p, compute_weights(2.0, 6), delta, short_y, f); }) ==
          Errc::invalid_parameter);
}

TEST_CASE("identity helpers") {
    const auto id = HessenbergSystem::identity(6, 1.0, {1, 2, 3, 4, 5, 6});
    CHECK(solve(id) == std::vector<double>{1, 2, 3, 4, 5, 6});
    CHECK(dominance_margin(id) == 1.0);
    CHECK(inverse_norm_bound(id) == 1.0);
    CHECK(is_m_matrix(id));
    CHECK(inverse_spectral_estimate(id, 20) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(inverse_spectral_estimate(HessenbergSystem::identity(6, 2.0), 20) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("is_m_matrix rejects a positive superdiagonal") {
    auto sys = HessenbergSystem::identity(4);
    sys.rows[1][2] = 0.1;
    CHECK_FALSE(is_m_matrix(sys));
}

TEST_CASE("inverse_norm_bound needs dominance") {
    auto sys = HessenbergSystem::identity(3);
    sys.rows[1][0] = -2.0;
    CHECK(dominance_margin(sys) == -1.0);
    CHECK(error_code_of([&] { inverse_norm_bound(sys); }) == Errc::not_dominant);
}

TEST_CASE("zero pivot is a numerical breakdown") {
    auto sys = HessenbergSystem::identity(3);
    sys.rows[1][1] = 0.0;
    CHECK(error_code_of([&] { HessenbergLU lu(sys); }) == Errc::numerical_breakdown);
}

TEST_CASE("alpha = 2, nu = 1 rows coincide with the classical tridiagonal scheme") {
    const auto p = ValidProblem::check(reference_problem(2.0, 1.0));
    const std::vector<double> y(p.grid().nodes(), 0.0);
    const auto sys = assemble_with(p, y);
    const double lambda = sys.lambda[1];
    for (std::size_t i = 1; i + 1 < sys.size(); ++i) {
        CHECK(sys.at(i, i) == 1.0 + 2.0 * lambda);
        CHECK(sys.at(i, i - 1) == -lambda);
        CHECK(sys.at(i, i + 1) == -lambda);
        for (std::size_t j = 0; j + 1 < i; ++j) REQUIRE(sys.at(i, j) == 0.0);
    }
}

TEST_CASE("randomized stability properties of assembled systems") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 100; ++trial) {
        auto rc = testing::random_case(rng);
        CAPTURE(trial);
        CAPTURE(rc.spec.alpha);
        CAPTURE(rc.lambda);
        const auto p = ValidProblem::check(rc.spec);
        const auto sys = assemble_with(p, rc.y_prev, rc.delta);

        CHECK(dominance_margin(sys) >= 1.0 - 1e-12);
        CHECK(inverse_norm_bound(sys) <= 1.0 + 1e-12);
        CHECK(is_m_matrix(sys));
        CHECK(inverse_spectral_estimate(sys, 100) <= 1.0 + 1e-8);

        const auto y = solve(sys);
        CHECK(norm_inf(y) <= norm_inf(rc.y_prev) + 1e-12);
        CHECK(*std::min_element(y.begin(), y.end()) >= -1e-12);
        // Entries reach lambda * delta ~ 1e7 here, so the residual is judged
        // relative to ||A|| ||y|| (normwise backward error).
        double row_sum = 0.0;
        for (const auto& row : sys.rows) {
            double r = 0.0;
            for (double v : row) r += std::abs(v);
            row_sum = std::max(row_sum, r);
        }
        CHECK(residual_norm(sys, y) <= 1e-14 * (row_sum * norm_inf(y) + norm_inf(sys.rhs)));
    }
}

TEST_CASE("structured solve matches the dense solver on random systems") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        auto rc = testing::random_case(rng, 64, 1e3);
        const auto p = ValidProblem::check(rc.spec);
        const auto sys = assemble_with(p, rc.y_prev, rc.delta);
        const auto y = solve(sys);
        const auto ref = oracle::dense_solve(to_dense(sys), sys.rhs);
        double diff = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) diff = std::max(diff, std::abs(y[i] - ref[i]));
        CHECK(diff <= 1e-12);
    }
}

TEST_CASE("LU solve reuses one factorisation for several right-hand sides") {
    const auto sys = assemble_with(small_problem(1.5), {0, 1, 2, 1, 0});
    const HessenbergLU lu(sys);
    const std::vector<double> r1{0, 1, 0, 0, 0}, r2{0, 0, 0, 1, 0};
    const auto a = lu.solve(r1), b = lu.solve(r2);
    const auto da = oracle::dense_solve(to_dense(sys), r1), db = oracle::dense_solve(to_dense(sys), r2);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a[i] == doctest::Approx(da[i]).epsilon(1e-13));
        CHECK(b[i] == doctest::Approx(db[i]).epsilon(1e-13));
    }
    CHECK(error_code_of([&] { lu.solve(std::vector<double>(3, 0.0)); }) == Errc::invalid_parameter);
}
