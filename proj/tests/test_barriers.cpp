#include <doctest.h>

#include <cmath>
#include <random>

#include "rdlab/barriers.hpp"
#include "rdlab/envelope.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/reaction.hpp"
#include "rdlab/residual_kernels.hpp"
#include "rdlab/stationary.hpp"

using namespace rdlab;

namespace {

/// (a phi'' + b phi') / phi from central differences of log phi
double fd_L_over_phi(const BarrierParams& p, const Operator1D& op, double x, double h = 1e-4) {
    double lm = log_phi(p, x - h), l0 = log_phi(p, x), lp = log_phi(p, x + h);
    double d1 = (lp - lm) / (2 * h), d2 = (lp - 2 * l0 + lm) / (h * h);
    return op.a(x) * (d2 + d1 * d1) + op.b(x) * d1;
}

const ReactionTerm& log3() {
    static const ReactionTerm t = ReactionTerm::shifted_log_power(3.0, "minus_u_log3");
    return t;
}

}  // namespace

TEST_CASE("barrier core derivatives against finite differences") {
    for (auto fam : {BarrierFamily::Thm1Barrier, BarrierFamily::Thm3Barrier}) {
        BarrierParams p{fam == BarrierFamily::Thm1Barrier ? 1.0 : 2.0, 3.0, 1.0, 0, fam};
        for (double x : {-0.6, 0.0, 0.25, 0.7}) {
            const double h = 1e-5;
            auto P = [&](double y) { return barrier_core(p, y).P; };
            BarrierCore c = barrier_core(p, x);
            CHECK(c.dP == doctest::Approx((P(x + h) - P(x - h)) / (2 * h)).epsilon(1e-7));
            CHECK(c.d2P == doctest::Approx((P(x + h) - 2 * P(x) + P(x - h)) / (h * h)).epsilon(1e-4));
        }
    }
}

TEST_CASE("L phi / phi against finite differences for m in {0, 1}") {
    Operator1D drifted(Coefficient::weight(1.0, 0.5), Coefficient::sine(0.2, 0.5));
    for (int m : {0, 1})
        for (auto fam : {BarrierFamily::Thm1Barrier, BarrierFamily::Thm3Barrier})
            for (const Operator1D* op : {&drifted}) {
                BarrierParams p{fam == BarrierFamily::Thm1Barrier ? 1.0 : 2.0, 3.0, 1.0, m, fam};
                for (double x : {-0.5, 0.0, 0.3}) {
                    BarrierDerivatives d = barrier_derivatives(p, *op, x);
                    CHECK(d.log_phi == doctest::Approx(log_phi(p, x)));
                    CHECK(d.L_phi_over_phi == doctest::Approx(fd_L_over_phi(p, *op, x)).epsilon(1e-5));
                }
            }
}

TEST_CASE("m = 0 decompositions sum to L phi / phi") {
    Operator1D op(Coefficient::weight(1.0, 0.5), Coefficient::constant(0.3));
    BarrierParams p1{1.0, 3.0, 1.0, 0, BarrierFamily::Thm1Barrier};
    BarrierParams p3{2.0, 3.0, 1.0, 0, BarrierFamily::Thm3Barrier};
    for (double x : {-0.4, 0.1, 0.8}) {
        auto d = barrier_derivatives(p1, op, x);
        CHECK(d.thm1_quadratic + d.thm1_trace + d.thm1_drift == doctest::Approx(d.L_phi_over_phi));
        auto e = barrier_derivatives(p3, op, x);
        double w = 0;
        for (double v : e.W) w += v;
        CHECK(w == doctest::Approx(e.L_phi_over_phi).epsilon(1e-12));
    }
}

TEST_CASE("closed-form barrier values") {
    BarrierParams p{1.0, 3.0, 1.0, 0, BarrierFamily::Thm1Barrier};
    CHECK(eval_phi(p, 0.0) == doctest::Approx(std::exp(1.0)));
    // P'' (0) = 2l R^{-2l-2} = 6, P'(0) = 0
    CHECK(barrier_derivatives(p, Operator1D::laplacian(), 0.0).L_phi_over_phi == doctest::Approx(6.0));
    BarrierParams q{2.0, 3.0, 1.0, 0, BarrierFamily::Thm3Barrier};
    CHECK(eval_phi(q, 0.0) == doctest::Approx(std::exp(1.0 / 64.0)));
    CHECK(eval_psi(p, 0.0, 0.5) == doctest::Approx((std::exp(1.0) - 1.0) * std::exp(1.5)));
    CHECK(log_psi(p, 0.0, 0.5) == doctest::Approx(std::log(eval_psi(p, 0.0, 0.5))));
}

TEST_CASE("barrier blows up at the rim") {
    BarrierParams p{1.0, 3.0, 1.0, 0, BarrierFamily::Thm1Barrier};
    double prev = -INFINITY;
    for (double x : {0.9, 0.99, 0.999}) {
        double v = log_phi(p, x);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev > 1e8);
    CHECK_THROWS_AS(barrier_derivatives(p, Operator1D::laplacian(), 1.0), DomainError);
    p.iter_m = 1;
    CHECK(log_phi(p, 0.9) > std::exp(100.0));
    CHECK_THROWS_AS(log_phi(p, 0.999), OverflowError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate({1.0, 2.0, 1.0, 0, BarrierFamily::Thm1Barrier}, 1.0), DomainError);
    CHECK_THROWS_AS(validate({1.0, 3.0, 1.0, 0, BarrierFamily::Thm3Barrier}, 1.0), DomainError);
    CHECK_NOTHROW(validate({1.0, 3.0, 1.0, 0, BarrierFamily::Thm1Barrier}, 1.0));
}

TEST_CASE("dominance constants bracket the envelope") {
    DominanceConstants d = dominance_constants(log3(), kInfiniteRadius, 0, 1.0);
    for (double u = std::max(d.u0, 3.0); u < 1e12; u *= 7.3)
        CHECK(-u * std::pow(std::log(std::exp(1.0) + u), 3) <= -u * std::pow(std::log(u), 3));
    CHECK(d.C0 >= 0.0);
    auto linear = ReactionTerm::linear_decay();
    CHECK_THROWS_AS(dominance_constants(linear, kInfiniteRadius, 0, 1.0), EnvelopeDominanceError);
}

TEST_CASE("Thm1 certificate is monotone in K") {
    BarrierParams p{1.0, 3.0, 0.0, 0, BarrierFamily::Thm1Barrier};
    ResidualGrid g{61, 12};
    Thm1Options o;
    o.refine = false;
    FindKResult k = find_K_thm1(p, Operator1D::laplacian(), log3(), g, o);
    REQUIRE(k.K > 0);
    bool prev = false;
    for (double K : {0.5 * k.K, k.K, 2 * k.K, 8 * k.K}) {
        p.K = K;
        bool cert = residual_thm1(p, Operator1D::laplacian(), log3(), g, o).sign_certified;
        if (prev) CHECK(cert);
        prev = cert;
    }
    CHECK(prev);
}

TEST_CASE("origin majorant: K just above 5 suffices") {
    for (double t : {0.0, 0.5, 1.0}) {
        CHECK(thm1_origin_majorant(1.0, 3.0, 1.0, 1.0, 5.01, t) < 0.0);
        CHECK(thm1_origin_majorant(1.0, 3.0, 1.0, 1.0, 4.9, t) > 0.0);
    }
    CHECK(find_K_origin(1.0, 3.0, 1.0, 1.0, 0.0, 1e-6) == doctest::Approx(5.0).epsilon(1e-5));
}

TEST_CASE("Thm3 rejects operators violating the drift growth condition") {
    BarrierParams p{2.0, 3.0, 10.0, 0, BarrierFamily::Thm3Barrier};
    auto w = StationaryWitness::ex3(0.5);
    CHECK_THROWS_AS(residual_thm3(p, w.op(), log3(), ResidualGrid{21, 5}), ConditionL1Error);
}

TEST_CASE("annulus barrier profile") {
    for (int m : {4, 6, 9}) {
        const double l = (m - 1) / 2.0, W = 1.7;
        CHECK(annulus_barrier_Q(m, W, m + 1.0) == doctest::Approx(0.0).scale(1));
        CHECK(annulus_barrier_Q(m, W, -2.0 * m) == doctest::Approx(0.0).scale(1));
        CHECK(annulus_barrier_Q(m, W, m + 1 + l) == doctest::Approx(l * l * W));
        for (double x = m + 1.1; x < 2 * m; x += 0.37) CHECK(annulus_barrier_Q(m, W, x) > 0.0);
    }
}

TEST_CASE("subadditivity of -u log^{2+eps} u") {
    std::mt19937_64 rng(20261017);
    std::uniform_real_distribution<double> lg(0.0, 6.0);
    for (double eps : {0.5, 1.0, 2.0}) {
        int bad = 0;
        for (int i = 0; i < 2000; ++i) {
            double a = std::pow(10.0, lg(rng)), b = std::pow(10.0, lg(rng));
            if (a > b) std::swap(a, b);
            if (!(subadditivity_gap(eps, a, b) > 0.0)) ++bad;
            // direct evaluation in long double as an independent check
            auto Q = [eps](long double u) { return -u * std::pow(std::log(u), 2.0L + eps); };
            long double direct = Q(a) - (Q((long double)b + a) - Q(b));
            CHECK(static_cast<double>(direct) == doctest::Approx(subadditivity_gap(eps, a, b)).epsilon(1e-6).scale(1e-6 * (1 + b)));
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("serial and parallel grid kernels agree") {
    GridResidual r = [](std::size_t i, std::size_t j) { return std::sin(0.37 * i) * std::cos(0.11 * j) + 1e-3 * j; };
    std::vector<double> fs, fp;
    GridMax s = grid_max_serial(r, 301, 40, &fs), p = grid_max_parallel(r, 301, 40, &fp);
    CHECK(s.value == p.value);
    CHECK(s.i == p.i);
    CHECK(s.j == p.j);
    CHECK(fs == fp);
    GridResidual bad = [](std::size_t i, std::size_t) { return i == 5 ? NAN : 0.0; };
    CHECK(grid_max_parallel(bad, 10, 3).has_nan);
    CHECK(grid_max_serial(bad, 10, 3).has_nan);
}
