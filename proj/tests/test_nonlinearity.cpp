#include <doctest.h>

#include <cmath>
#include <random>

#include "rdlab/envelope.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/growth.hpp"
#include "rdlab/iterlog.hpp"
#include "rdlab/reaction.hpp"

using namespace rdlab;

TEST_CASE("iterated logarithm matches repeated std::log") {
    for (double u : {20.0, 1e3, 1e8, 1e200}) {
        CHECK(iter_log(0, u) == u);
        CHECK(iter_log(1, u) == doctest::Approx(std::log(u)).epsilon(1e-15));
        CHECK(iter_log(2, u) == doctest::Approx(std::log(std::log(u))).epsilon(1e-15));
        CHECK(iter_log_product(2, u) ==
              doctest::Approx(std::log(u) * std::log(std::log(u))).epsilon(1e-14));
        CHECK(iter_log_from_log(2, std::log(u)) == doctest::Approx(iter_log(2, u)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(iter_log(2, 0.5), DomainError);
    CHECK(iter_log_product(0, 7.0) == 1.0);
}

TEST_CASE("iterated exp inverts the iterated log") {
    for (int m = 0; m <= 3; ++m)
        for (double x : {0.0, 0.3, 1.0}) {
            double u = iter_exp(m, x);
            if (m > 0) CHECK(iter_log(m, u) == doctest::Approx(x).epsilon(1e-12));
        }
    CHECK(iter_exp(2, 1.0) == doctest::Approx(std::exp(std::exp(1.0))));
    CHECK(log_iter_exp(3, 2.0) == doctest::Approx(std::exp(std::exp(2.0))));
    CHECK(iter_log_domain_floor(2) == doctest::Approx(std::exp(1.0)));
    CHECK_THROWS_AS(iter_exp(3, 3.0), OverflowError);
}

TEST_CASE("iter_log_from_log reaches far past the double range") {
    // u = exp(1e5): log log u = log 1e5
    CHECK(iter_log_from_log(2, 1e5) == doctest::Approx(std::log(1e5)));
    CHECK(iter_log_product_from_log(2, 1e5) == doctest::Approx(1e5 * std::log(1e5)));
}

TEST_CASE("closed-form envelope of the sine-linear cubic term") {
    auto term = ReactionTerm::linear_minus_power(Coefficient::sine(0.0, 1.0), Coefficient::constant(1.0), 3.0);
    Envelope F = envelope(term, kInfiniteRadius);
    CHECK(F.method() == EnvelopeMethod::ClosedForm);
    for (double u : {0.1, 1.0, 3.0, 100.0}) CHECK(F(u) == doctest::Approx(u - u * u * u));
    Envelope F1 = envelope(term, 1.0);
    for (double u : {0.5, 2.0}) CHECK(F1(u) == doctest::Approx(std::sin(1.0) * u - u * u * u).epsilon(1e-9));
}

TEST_CASE("grid envelope agrees with the closed form") {
    auto V = Coefficient::custom([](double x) { return 1.0 / (1.0 + x * x); });
    auto term = ReactionTerm::custom([V](double x, double u) { return V(x) * u - u * u; });
    Envelope F = envelope(term, 2.0, 4001);
    CHECK(F.method() == EnvelopeMethod::GridSup);
    for (double u : {0.2, 1.0, 5.0}) CHECK(F(u) == doctest::Approx(u - u * u).epsilon(1e-9));
}

TEST_CASE("envelope is monotone in R") {
    auto term = ReactionTerm::linear_minus_power(Coefficient::weight(1.0, 0.5), Coefficient::constant(1.0), 2.0);
    for (double u : {0.5, 2.0, 10.0}) {
        double prev = -INFINITY;
        for (double R : {0.5, 1.0, 2.0, 4.0}) {
            double v = envelope(term, R)(u);
            CHECK(v >= prev);
            prev = v;
        }
    }
    CHECK_THROWS_AS(envelope(term, kInfiniteRadius)(1.0), UnboundedEnvelope);
}

TEST_CASE("F2 verdicts on the catalog ratios") {
    auto q = [](double p) { return [p](double u) { return -u * std::pow(std::log(u), p); }; };
    CHECK(check_F2([](double u) { return -u * u; }, 0, 1.0, default_f2_probes()).verdict ==
          F2Verdict::SatisfiesF2);
    // ratio -(log u)^{-1-eps} tends to 0 from below
    CHECK(check_F2(q(2.0), 0, 1.0, default_f2_probes()).verdict == F2Verdict::FailsF2);
    CHECK(check_F2([](double u) { return -u; }, 0, 1.0, default_f2_probes()).verdict == F2Verdict::FailsF2);
    // ratio -(log log u)^{0.5}, resolved only in log space
    auto r = [](double s) { return -s * s * std::pow(std::log(s), 3.0); };
    GrowthSpec g = check_F2_log(r, 1, 0.5, extended_f2_log_probes());
    CHECK(g.verdict == F2Verdict::SatisfiesF2);
    CHECK(g.log_space);
    for (auto [s, ratio] : g.probe_log) CHECK(ratio == doctest::Approx(-std::sqrt(std::log(s))).epsilon(1e-9));
}

TEST_CASE("F2 verdict is monotone under pointwise smaller envelopes") {
    auto base = [](double u) { return -u * u; };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> extra(0.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        double c = extra(rng), p = 1.0 + extra(rng);
        auto lower = [&](double u) { return base(u) - c * std::pow(u, p); };
        CHECK(check_F2(lower, 0, 1.0, default_f2_probes()).verdict == F2Verdict::SatisfiesF2);
    }
}

TEST_CASE("ratio tail classifier") {
    CHECK(classify_ratio_tail({-1, -2, -4, -8, -16, -32}) == F2Verdict::SatisfiesF2);
    CHECK(classify_ratio_tail({-1, -1, -1, -1, -1, -1}) == F2Verdict::FailsF2);
    CHECK(classify_ratio_tail({-1, -2}) == F2Verdict::Inconclusive);
    CHECK(classify_ratio_tail({-1, -2, NAN, -4, -5, -6}) == F2Verdict::Inconclusive);
}

TEST_CASE("F1 check") {
    CHECK(check_F1(envelope(ReactionTerm::pure_power(1.0, 2.0), kInfiniteRadius)) == F1Verdict::Holds);
    auto growing = ReactionTerm::linear_minus_power(Coefficient::constant(1.0), Coefficient::constant(0.0), 2.0);
    CHECK(check_F1(envelope(growing, kInfiniteRadius)) != F1Verdict::Holds);
}

TEST_CASE("shift envelopes: G equals H") {
    std::vector<ReactionTerm> terms{
        ReactionTerm::pure_power(1.0, 2.0),
        ReactionTerm::linear_minus_power(Coefficient::constant(1.0), Coefficient::constant(1.0), 2.0),
        ReactionTerm::linear_minus_power(Coefficient::sine(0.0, 1.0), Coefficient::constant(1.0), 3.0)};
    for (const auto& t : terms) {
        ShiftEnvelopes s = shift_envelopes(t, false);
        for (double u : {0.1, 0.5, 1.0, 2.0, 10.0}) CHECK(s.G(u) == doctest::Approx(s.H(u)).epsilon(1e-9));
    }
}

TEST_CASE("concave shortcut agrees with the grid sup") {
    auto t = ReactionTerm::linear_minus_power(Coefficient::constant(1.0), Coefficient::constant(1.0), 2.0);
    REQUIRE(numerically_concave(t, 5.0));
    ShiftEnvelopes fast = shift_envelopes(t, true);
    ShiftEnvelopes slow = shift_envelopes(t, false);
    CHECK(fast.method == ShiftMethod::ConcaveShortcut);
    // for concave f with f(0) = 0, G(u) = f(u)
    for (double u : {0.2, 1.0, 3.0}) {
        CHECK(fast.G(u) == doctest::Approx(u - u * u).epsilon(1e-9));
        CHECK(slow.G(u) == doctest::Approx(fast.G(u)).epsilon(1e-6));
    }
    auto convex = ReactionTerm::linear_minus_power(Coefficient::constant(0.0), Coefficient::constant(-1.0), 2.0);
    CHECK_THROWS_AS(shift_envelopes(convex, true), ConcavityMismatch);
}

TEST_CASE("term parser") {
    auto t = parse_term({{"kind", "power"}, {"V", "sin(0,1)"}, {"gamma", "weight(1,0)"}, {"p", "3"}}, "cubic");
    CHECK(t.id() == "cubic");
    CHECK(t(0.0, 2.0) == doctest::Approx(-8.0));
    CHECK_THROWS_AS(parse_term({{"kind", "power"}}, "bad"), ConfigError);
    CHECK_THROWS_AS(parse_term({{"kind", "power"}, {"p", "2"}, {"colour", "red"}}, "bad"), ConfigError);
    CHECK_THROWS_AS(parse_term({{"kind", "spline"}}, "bad"), ConfigError);
}

TEST_CASE("Lipschitz classification") {
    CHECK(ReactionTerm::pure_power(1.0, 2.0).lipschitz());
    auto sq = ReactionTerm::table(TableEntry::SqrtDrift, 0.5, Coefficient::constant(0.0), Coefficient::constant(1.0));
    CHECK_FALSE(sq.lipschitz());
    CHECK(lipschitz_probe(ReactionTerm::pure_power(1.0, 2.0), 1.0, 3.0) == doctest::Approx(6.0).epsilon(1e-3));
}
