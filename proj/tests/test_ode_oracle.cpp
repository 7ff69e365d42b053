#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rdlab/errors.hpp"
#include "rdlab/ode.hpp"
#include "rdlab/ode_oracle.hpp"
#include "rdlab/quadrature.hpp"
#include "rdlab/rate.hpp"

using namespace rdlab;

TEST_CASE("Osgood values against closed-form tails") {
    // int_{u0}^inf du/u^2 = 1/u0 ; int du/(u log^2 u) = 1/log u0 ; int du/(u log^3 u) = 1/(2 log^2 u0)
    auto a = osgood_test(RateFunction::power_decay(1.0, 2.0), 4.0);
    REQUIRE(a.convergent);
    CHECK(a.value == doctest::Approx(0.25).epsilon(1e-8));
    auto b = osgood_test(RateFunction::log_power(2.0), 10.0);
    REQUIRE(b.convergent);
    CHECK(b.value == doctest::Approx(1.0 / std::log(10.0)).epsilon(1e-8));
    CHECK(tail_integral(RateFunction::log_power(3.0), 100.0) ==
          doctest::Approx(0.5 / std::pow(std::log(100.0), 2)).epsilon(1e-8));
}

TEST_CASE("Osgood dichotomy of the catalog") {
    for (auto G : {RateFunction::power_decay(1.0, 2.0), RateFunction::log_power(2.0),
                   RateFunction::iter_log_model(0, 1.0), RateFunction::iter_log_model(1, 1.0)})
        CHECK_MESSAGE(osgood_test(G, 16.0).convergent, G.id());
    for (auto G : {RateFunction::power_decay(1.0, 1.0), RateFunction::iter_log_product(1),
                   RateFunction::iter_log_product(2)})
        CHECK_FALSE_MESSAGE(osgood_test(G, 16.0).convergent, G.id());
    CHECK_THROWS_AS(osgood_test(RateFunction([](double u) { return u; }), 2.0), SignError);
    CHECK_THROWS_AS(tail_integral(RateFunction::power_decay(1.0, 1.0), 2.0), NotOsgoodError);
}

TEST_CASE("Osgood test from a huge lower limit") {
    // lower limit u0 = exp(1e4): tail of -u log^3 u is 1/(2 s0^2)
    CHECK(tail_integral_log(RateFunction::log_power(3.0), 1e4) == doctest::Approx(0.5e-8).epsilon(1e-6));
    CHECK(osgood_test_log(RateFunction::iter_log_model(0, 1.0), 50.0).convergent);
}

TEST_CASE("finite integral") {
    CHECK(finite_integral(RateFunction::power_decay(1.0, 2.0), 1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(finite_integral(RateFunction::power_decay(1.0, 1.0), 1.0, std::exp(3.0)) ==
          doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("DP45 on the logistic equation") {
    auto F = [](double, double y) { return y * (1.0 - y); };
    ScalarPath p = integrate_dp45(F, 0.0, 0.1, {0.5, 1.0, 3.0}, Dp45Options{});
    REQUIRE(p.x.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        double t = p.x[i], exact = 0.1 * std::exp(t) / (1.0 - 0.1 + 0.1 * std::exp(t));
        CHECK(p.y[i] == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("IVP against closed forms") {
    auto s = solve_ivp(RateFunction::power_decay(1.0, 2.0), 2.0, 3.0, 1e-10, {0.0, 1.0, 3.0});
    CHECK(s.values[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK(s.values[2] == doctest::Approx(2.0 / 7.0).epsilon(1e-8));
    CHECK_THROWS_AS(solve_ivp(RateFunction([](double u) { return u * u; }), 1.0, 2.0, 1e-8), BlowUpError);
    std::ostringstream os;
    write_csv(s, os);
    CHECK(os.str().find("t,v") != std::string::npos);
}

TEST_CASE("v_inf against closed forms") {
    VInfinity q(RateFunction::power_decay(1.0, 2.0));
    VInfinity l(RateFunction::log_power(3.0));
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        CHECK(q(t) == doctest::Approx(1.0 / t).epsilon(1e-8));
        CHECK(l(t) == doctest::Approx(std::exp(1.0 / std::sqrt(2.0 * t))).epsilon(1e-6));
    }
    // log form stays finite where the value overflows
    CHECK(l.log_value(1e-8) == doctest::Approx(1.0 / std::sqrt(2e-8)).epsilon(1e-6));
}

TEST_CASE("v_inf is decreasing and tends to the largest root") {
    // G = -u(u-1)(u-2): largest root 2
    RateFunction G([](double u) { return -u * (u - 1.0) * (u - 2.0); }, "cubic");
    VInfinity v(G);
    double prev = INFINITY;
    for (double t : {0.05, 0.1, 0.3, 1.0, 3.0, 10.0}) {
        double x = v(t);
        CHECK(x < prev);
        CHECK(x > 2.0);
        prev = x;
    }
    CHECK(v(30.0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("largest root") {
    RateFunction G([](double u) { return -u * (u - 1.0) * (u - 2.0); });
    RootReport r = largest_root(G, 100.0);
    CHECK(r.c0 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(largest_root(RateFunction::power_decay(1.0, 2.0), 10.0).c0 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(largest_root(RateFunction([](double u) { return u; }), 10.0), NoRootError);
    RateFunction tangent([](double u) { return -(u - 1.0) * (u - 1.0) * u; });
    CHECK(largest_root(tangent, 10.0).tangency_warning);
    CHECK_FALSE(r.tangency_warning);
}

TEST_CASE("dichotomy agrees with the Osgood test") {
    const auto ladder = log_decade_ladder(0, 6);
    for (auto G : {RateFunction::power_decay(1.0, 2.0), RateFunction::log_power(2.0),
                   RateFunction::iter_log_model(0, 1.0)}) {
        DichotomyResult d = dichotomy(G, 1.0, ladder, 1e-5);
        CHECK_MESSAGE(d.bounded, G.id());
        CHECK(d.limit == doctest::Approx(d.v_inf).epsilon(1e-4));
    }
    for (auto G : {RateFunction::power_decay(1.0, 1.0), RateFunction::iter_log_product(1)})
        CHECK_FALSE_MESSAGE(dichotomy(G, 1.0, ladder, 1e-5).bounded, G.id());
    auto dl = decade_ladder(0, 2);
    REQUIRE(dl.size() == 3);
    CHECK(dl[2] == doctest::Approx(std::log(100.0)));
}

TEST_CASE("long-time limit equals the largest root") {
    CHECK(longtime_limit(RateFunction::power_decay(1.0, 2.0), 1e-6).limit == doctest::Approx(0.0).epsilon(1e-4));
    RateFunction cubic([](double u) { return -u * (u - 1.0) * (u - 2.0); });
    auto r = longtime_limit(cubic, 1e-6);
    CHECK(std::abs(r.limit - r.c0) <= 1e-4);
    LongtimeOptions o;
    o.ivp_fallback = true;
    auto lin = longtime_limit(RateFunction([](double u) { return 1.0 - u; }), 1e-6, o);
    CHECK(lin.used_ivp_fallback);
    CHECK(lin.limit == doctest::Approx(1.0).epsilon(1e-4));
}
