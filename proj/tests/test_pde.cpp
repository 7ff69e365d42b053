#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rdlab/errors.hpp"
#include "rdlab/pde.hpp"
#include "rdlab/pde_scenarios.hpp"
#include "rdlab/stationary.hpp"
#include "rdlab/tridiag.hpp"

using namespace rdlab;
using std::numbers::pi;

namespace {

double heat_error(double dx, double dt) {
    SolverOptions o;
    o.dx = dx;
    o.dt = dt;
    auto tr = solve_dirichlet([](double x) { return std::sin(pi * x); }, Operator1D::laplacian(),
                              ReactionTerm::zero(), 0.0, 1.0, {0.1}, Dirichlet::zero(), o);
    double err = 0.0;
    for (std::size_t i = 0; i < tr.x.size(); ++i)
        err = std::max(err, std::abs(tr.frames[1][i] - std::exp(-pi * pi * 0.1) * std::sin(pi * tr.x[i])));
    return err;
}

}  // namespace

TEST_CASE("tridiagonal solve against apply") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {1u, 2u, 7u, 100u}) {
        Tridiag T(n);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            T.lower[i] = u(rng);
            T.upper[i] = u(rng);
            T.diag[i] = 3.0 + u(rng);
            x[i] = u(rng);
        }
        auto y = solve_tridiag(T, T.apply(x));
        for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
    Tridiag S(2);
    S.diag = {0.0, 1.0};
    CHECK_THROWS_AS(solve_tridiag(S, {1.0, 1.0}), StabilityError);
}

TEST_CASE("heat equation against separation of variables") {
    CHECK(heat_error(0.005, 1e-3) <= 5e-3);
}

TEST_CASE("refinement order on the heat equation") {
    double e1 = heat_error(0.04, 4e-3), e2 = heat_error(0.02, 2e-3), e3 = heat_error(0.01, 1e-3);
    CHECK(std::log2(e1 / e2) >= 1.7);
    CHECK(std::log2(e2 / e3) >= 1.7);
}

TEST_CASE("x-independent data tracks the ODE in the interior") {
    SolverOptions o;
    o.dx = 0.05;
    o.dt = 1e-3;
    auto tr = solve_dirichlet([](double) { return 1.0; }, Operator1D::laplacian(), ReactionTerm::pure_power(1.0, 2.0),
                              -10.0, 10.0, {0.25, 0.5}, Dirichlet::constant(1.0, 1.0), o);
    CHECK(tr.value(1, 0.0) == doctest::Approx(1.0 / 1.25).epsilon(1e-3));
    CHECK(tr.value(2, 0.0) == doctest::Approx(1.0 / 1.5).epsilon(1e-3));
}

TEST_CASE("zero is an equilibrium") {
    for (const auto& term : evolvable_catalog()) {
        auto tr = solve_dirichlet([](double) { return 0.0; }, Operator1D::laplacian(), term, -1.0, 1.0, {0.5});
        for (double v : tr.frames.back()) CHECK(v == 0.0);
    }
}

TEST_CASE("nonnegative data stays nonnegative without clamping") {
    SolverOptions o;
    o.dx = 0.02;
    o.dt = 0.05;
    auto tr = solve_dirichlet([](double x) { return 1e6 * std::exp(-50 * x * x); }, Operator1D::laplacian(),
                              ReactionTerm::shifted_log_power(3.0), -1.0, 1.0, {0.05, 0.5}, Dirichlet::zero(), o);
    for (const auto& f : tr.frames)
        for (double v : f) CHECK(v >= -1e-9);
}

TEST_CASE("solver input validation") {
    auto ex3 = StationaryWitness::ex3(0.5);
    CHECK_THROWS_AS(solve_dirichlet([](double) { return 0.0; }, ex3.op(), ex3.term(), -1, 1, {0.1}), DomainError);
    CHECK_THROWS_AS(solve_dirichlet([](double) { return -1.0; }, Operator1D::laplacian(), ReactionTerm::zero(), -1, 1,
                                    {0.1}),
                    DomainError);
}

TEST_CASE("incompatible boundary data is accepted and recorded") {
    auto tr = solve_dirichlet([](double) { return 0.0; }, Operator1D::laplacian(), ReactionTerm::zero(), -1, 1, {0.1},
                              Dirichlet::constant(1.0, 1.0));
    CHECK(tr.incompatible_start);
    CHECK(tr.value(1, 0.0) > 0.0);
}

TEST_CASE("comparison principle on random ordered triples") {
    ComparisonOptions o;
    o.T = 0.2;
    for (const auto& term : evolvable_catalog()) {
        ComparisonReport r = comparison_suite(term, Operator1D::laplacian(), 5, 11, o);
        CHECK_MESSAGE(r.violations == 0, term.id());
        CHECK(r.triples == 5);
    }
}

TEST_CASE("forced problem profiles") {
    ForcedProblemSpec s{4, 3.0, [](double) { return 2.0; }};
    CHECK(s.psi(0.0) == 0.0);
    CHECK(s.psi(4.0) == 0.0);
    CHECK(s.psi(6.0) == 3.0);
    CHECK(s.psi(-8.0) == 3.0);
    CHECK(s.psi(9.5) == 0.0);
    CHECK(s.g(3.0) == 0.0);
    CHECK(s.g(-6.0) == doctest::Approx(32.0));
    for (double x = -10; x <= 10; x += 0.13) {
        CHECK(s.psi(x) >= 0.0);
        CHECK(s.psi(x) <= 3.0);
    }
    CHECK(smoothstep(0.0) == 0.0);
    CHECK(smoothstep(1.0) == 1.0);
    CHECK(smoothstep(0.5) == doctest::Approx(0.5));
}

TEST_CASE("forced runs: trivial, monotone in k and in m") {
    SolverOptions o{0.05, 1e-2, 1e-6};
    auto L = Operator1D::laplacian();
    auto term = ReactionTerm::pure_power(1.0, 2.0);
    auto zero = solve_forced({2, 0.0}, L, term, {1.0}, o);
    for (double v : zero.frames.back()) CHECK(v == 0.0);
    std::vector<Trajectory> ks;
    for (double k : {1.0, 4.0, 16.0}) ks.push_back(solve_forced({4, k}, L, term, {1.0}, o));
    for (std::size_t j = 1; j < ks.size(); ++j)
        for (std::size_t i = 0; i < ks[j].x.size(); ++i)
            CHECK(ks[j].frames.back()[i] >= ks[j - 1].frames.back()[i] - 1e-9);
}

TEST_CASE("minimal solution from g = 1 under -u^2") {
    SolverOptions o{0.05, 1e-2, 1e-6};
    auto r = minimal_solution([](double) { return 1.0; }, Operator1D::laplacian(), ReactionTerm::pure_power(1.0, 2.0),
                              {4.0, 8.0, 16.0}, 1.0, o);
    CHECK(r.probe_values.back() == doctest::Approx(0.5).epsilon(1e-3));
    for (std::size_t j = 1; j < r.probe_values.size(); ++j) CHECK(r.probe_values[j] >= r.probe_values[j - 1] - 1e-12);
    auto z = minimal_solution([](double) { return 0.0; }, Operator1D::laplacian(), ReactionTerm::pure_power(1.0, 2.0),
                              {2.0, 4.0, 8.0}, 1.0, o);
    CHECK(z.probe_values.back() == 0.0);
}

TEST_CASE("linear contrast scales with the data") {
    auto r = universal_collapse(ReactionTerm::linear_decay(), Operator1D::laplacian(), {1e2, 1e4});
    CHECK(r.growth[0] == doctest::Approx(100.0).epsilon(0.05));
}
