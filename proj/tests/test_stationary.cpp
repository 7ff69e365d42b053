#include <doctest.h>

#include <cmath>

#include "rdlab/iterlog.hpp"
#include "rdlab/stationary.hpp"

using namespace rdlab;

TEST_CASE("stationary witnesses solve their equations") {
    for (const auto& w : {StationaryWitness::ex1(1), StationaryWitness::ex1(2), StationaryWitness::ex2(1.0),
                          StationaryWitness::ex2(0.5), StationaryWitness::ex3(0.5), StationaryWitness::ex3(1.0)}) {
        StationaryReport r = residual_stationary(w);
        CHECK_MESSAGE(r.max_residual <= 1e-9, w.id());
        CHECK(r.n == 2001);
    }
}

TEST_CASE("witness derivatives against finite differences of log W") {
    for (const auto& w : {StationaryWitness::ex1(1), StationaryWitness::ex2(1.0), StationaryWitness::ex3(0.5)}) {
        for (double x : {-1.3, -0.4, 0.6, 1.1}) {
            const double h = 1e-4;
            double lm = w.log_W(x - h), l0 = w.log_W(x), lp = w.log_W(x + h);
            double d1 = (lp - lm) / (2 * h), d2 = (lp - 2 * l0 + lm) / (h * h);
            CHECK(w.dW_over_W(x) == doctest::Approx(d1).epsilon(1e-7));
            CHECK(w.d2W_over_W(x) == doctest::Approx(d2 + d1 * d1).epsilon(1e-5));
        }
    }
}

TEST_CASE("witness closed forms") {
    CHECK(StationaryWitness::ex1(1).W(0.5) == doctest::Approx(iter_exp(2, 0.5)));
    CHECK(StationaryWitness::ex2(1.0).W(2.0) == doctest::Approx(5.0));
    CHECK(StationaryWitness::ex3(0.5).W(-3.0) == doctest::Approx(9.0));
    auto w = StationaryWitness::ex2(1.0);
    CHECK(w.op().a(1.0) == doctest::Approx(4.0));
    CHECK(w.term()(0.0, 2.0) == doctest::Approx(-8.0));
}

TEST_CASE("shifted double exponential stays stationary") {
    StationaryReport r = residual_stationary(StationaryWitness::ex1(1, 0.5), -3.0, 2.0, 501);
    CHECK(r.max_residual <= 1e-9);
    CHECK(r.lo == -3.0);
}
