/// Acceptance checks 1-10. One PASS/FAIL line each; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "rdlab/barriers.hpp"
#include "rdlab/ode_oracle.hpp"
#include "rdlab/pde.hpp"
#include "rdlab/pde_scenarios.hpp"
#include "rdlab/quadrature.hpp"
#include "rdlab/rate.hpp"
#include "rdlab/stationary.hpp"

using namespace rdlab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream note;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [miss: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.note << " [exception: " << e.what() << "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < budget_s, "runtime budget " + std::to_string(budget_s) + " s");
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s (%.2f s)%s\n", id, o.pass ? "PASS" : "FAIL", title, secs, o.note.str().c_str());
    std::fflush(stdout);
}

const ReactionTerm& log3_term() {
    static const ReactionTerm t = ReactionTerm::shifted_log_power(3.0, "minus_u_log3");
    return t;
}

}  // namespace

int main() {
    criterion(1, "stationary identities", 3.0, [](Outcome& o) {
        for (const auto& w : {StationaryWitness::ex1(1), StationaryWitness::ex2(1.0), StationaryWitness::ex3(0.5)}) {
            auto t0 = std::chrono::steady_clock::now();
            StationaryReport r = residual_stationary(w);
            double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            o.note << " " << r.witness << "=" << r.max_residual;
            o.require(r.max_residual <= 1e-9, r.witness + " residual");
            o.require(s < 1.0, r.witness + " runtime");
        }
    });

    criterion(2, "v_inf against closed forms", 1.0, [](Outcome& o) {
        VInfinity l(RateFunction::log_power(3.0)), q(RateFunction::power_decay(1.0, 2.0));
        double worst_l = 0, worst_q = 0;
        for (double t : {0.1, 0.5, 1.0, 2.0}) {
            worst_l = std::max(worst_l, std::abs(l(t) / std::exp(1.0 / std::sqrt(2 * t)) - 1.0));
            worst_q = std::max(worst_q, std::abs(q(t) * t - 1.0));
        }
        o.note << " rel err log^3 " << worst_l << ", u^2 " << worst_q;
        o.require(worst_l <= 1e-6, "-u log^3 u");
        o.require(worst_q <= 1e-8, "-u^2");
    });

    criterion(3, "Osgood dichotomy", 5.0, [](Outcome& o) {
        struct Case {
            RateFunction G;
            bool convergent;
        };
        std::vector<Case> cases{{RateFunction::power_decay(1.0, 2.0), true},
                                {RateFunction::log_power(2.0), true},
                                {RateFunction::iter_log_model(0, 1.0), true},
                                {RateFunction::iter_log_model(1, 1.0), true},
                                {RateFunction::power_decay(1.0, 1.0), false},
                                {RateFunction::iter_log_product(1), false},
                                {RateFunction::iter_log_product(2), false}};
        // rungs log c = 1, 10, ..., 1e6
        const auto ladder = log_decade_ladder(0, 6);
        int agree = 0;
        for (const auto& c : cases) {
            bool conv = osgood_test(c.G, 16.0).convergent;
            o.require(conv == c.convergent, "osgood " + c.G.id());
            bool bounded = dichotomy(c.G, 1.0, ladder, 1e-5).bounded;
            o.require(bounded == conv, "dichotomy " + c.G.id());
            agree += bounded == conv && conv == c.convergent;
        }
        o.note << " " << agree << "/" << cases.size() << " agree";
    });

    criterion(4, "Thm1 certificate", 10.0, [](Outcome& o) {
        BarrierParams p{1.0, 3.0, 0.0, 0, BarrierFamily::Thm1Barrier};
        ResidualGrid g{201, 50};
        Thm1Options opts;
        FindKResult k = find_K_thm1(p, Operator1D::laplacian(), log3_term(), g, opts);
        p.K = k.K;
        ResidualReport r = residual_thm1(p, Operator1D::laplacian(), log3_term(), g, opts);
        double K_origin = find_K_origin(1.0, 3.0, 1.0, 1.0, 0.0, 1e-6);
        o.note << " K=" << k.K << " max=" << r.max_residual << " refined=" << r.refined_max_residual
               << " origin K=" << K_origin;
        o.require(r.sign_certified, "sign certified");
        o.require(r.refined_max_residual <= 0.0, "2x refinement");
        o.require(K_origin > 5.0 && K_origin < 5.001, "origin threshold 5");
        bool majorant = true;
        for (double t : {0.0, 0.5, 1.0}) majorant = majorant && thm1_origin_majorant(1.0, 3.0, 1.0, 1.0, 5.001, t) < 0;
        o.require(majorant, "origin majorant negative just above 5");
    });

    criterion(5, "Thm3 R-uniform K", 30.0, [](Outcome& o) {
        BarrierParams p{2.0, 3.0, 0.0, 0, BarrierFamily::Thm3Barrier};
        FindKOptions ko;
        ko.ladder = 4;
        FindKResult k = find_K_thm3(p, Operator1D::laplacian(), log3_term(), ResidualGrid{201, 50}, Thm3Options{}, ko);
        o.note << " K=" << k.K << " R:";
        for (const auto& r : k.ladder) o.note << " " << r.R << (r.sign_certified ? "ok" : "x");
        o.require(k.ladder.size() == 4, "ladder R = 2, 4, 8, 16");
        o.require(k.ladder_certified, "single K certifies all radii");
    });

    criterion(6, "universal collapse", 60.0, [](Outcome& o) {
        CollapseOptions co;
        co.solver.dx = 0.005;
        co.solver.dt = 5e-4;
        const std::vector<double> As{1e2, 1e4, 1e6, 1e8};
        CollapseReport r = universal_collapse(log3_term(), Operator1D::laplacian(), As, co);
        BarrierBound b = thm1_barrier_bound(log3_term(), Operator1D::laplacian(), 1.0, 3.0, 1.0, 0.0, 0.1);
        o.note << " u(0,0.1)=";
        for (double v : r.values) o.note << v << " ";
        o.note << "shrink=";
        for (double s : r.shrink) o.note << s << " ";
        o.note << "log M=" << b.log_M;
        for (double s : r.shrink) o.require(s >= 5.0, "decade gains shrink by >= 5");
        // M overflows a double; compare logarithms
        for (double v : r.values) o.require(std::log(v) <= b.log_M, "below the barrier");
        CollapseReport lin = universal_collapse(ReactionTerm::linear_decay(), Operator1D::laplacian(), As, co);
        for (double g : lin.growth) o.require(std::abs(g / 100.0 - 1.0) <= 0.05, "linear contrast");
        o.note << " linear growth " << lin.growth.front();
    });

    criterion(7, "uniqueness vs nonuniqueness", 300.0, [](Outcome& o) {
        const std::vector<int> ladder{2, 4, 8};
        UniquenessReport u = uniqueness_probe(Operator1D::laplacian(), ReactionTerm::pure_power(1.0, 2.0), ladder,
                                              [](double) { return 0.0; });
        o.note << " (-u^2) " << to_string(u.verdict);
        o.require(u.verdict == UniquenessVerdict::NoNontrivialFound, "a=1, -u^2 decays");

        auto ex2 = StationaryWitness::ex2(1.0);
        UniquenessReport w2 = uniqueness_probe(ex2.op(), ex2.term(), ladder, [&](double x) { return ex2.W(x); });
        double oracle2 = witness_upper_oracle(ex2.term(), 1.0);
        o.note << "; ex2 " << to_string(w2.verdict) << " U=" << w2.rungs.back().value << " v_inf=" << oracle2;
        o.require(w2.verdict == UniquenessVerdict::NontrivialWitness, "ex2 witness");
        o.require(w2.rungs.back().value <= oracle2, "ex2 witness <= v_inf(1)");

        auto ex3 = StationaryWitness::ex3(0.5);
        auto reg = ReactionTerm::table(TableEntry::SqrtDriftRegularized, 0.5, Coefficient::constant(0.0),
                                       Coefficient::constant(1.0), "sqrt_drift_reg");
        UniquenessReport w3 = uniqueness_probe(ex3.op(), reg, ladder, [&](double x) { return ex3.W(x); });
        double oracle3 = witness_upper_oracle(reg, 1.0);
        o.note << "; ex3 " << to_string(w3.verdict) << " U=" << w3.rungs.back().value << " v_inf=" << oracle3;
        o.require(w3.verdict == UniquenessVerdict::NontrivialWitness, "ex3 witness");
        o.require(w3.rungs.back().value <= oracle3, "ex3 witness <= v_inf(1)");
    });

    criterion(8, "long-time root identity", 5.0, [](Outcome& o) {
        RateFunction cubic([](double u) { return -u * (u - 1.0) * (u - 2.0); }, "cubic");
        RateFunction lin([](double u) { return 1.0 - u; }, "1-u");
        LongtimeOptions fb;
        fb.ivp_fallback = true;
        for (auto [G, opts] : {std::pair{RateFunction::power_decay(1.0, 2.0), LongtimeOptions{}},
                               std::pair{cubic, LongtimeOptions{}}, std::pair{lin, fb}}) {
            LongtimeReport r = longtime_limit(G, 1e-6, opts);
            double c0 = largest_root(G, 1e3).c0;
            o.note << " " << G.id() << ":" << r.limit << "/" << c0;
            o.require(std::abs(r.limit - c0) <= 1e-4, G.id());
        }
    });

    criterion(9, "comparison principle", 120.0, [](Outcome& o) {
        int violations = 0, terms = 0;
        for (const auto& term : evolvable_catalog()) {
            ComparisonReport r = comparison_suite(term, Operator1D::laplacian(), 50, 1234 + terms++);
            violations += r.violations;
            if (r.violations) o.note << " " << term.id() << ":" << r.violations;
        }
        o.note << " " << terms << " terms x 50 triples, violations " << violations;
        o.require(violations == 0, "no order violations");
    });

    criterion(10, "subadditivity", 1.0, [](Outcome& o) {
        std::mt19937_64 rng(10);
        std::uniform_real_distribution<double> lg(0.0, 6.0);
        int bad = 0;
        for (double eps : {0.5, 1.0, 2.0})
            for (int i = 0; i < 10000; ++i) {
                double a = std::pow(10.0, lg(rng)), b = std::pow(10.0, lg(rng));
                if (a > b) std::swap(a, b);
                bad += !(subadditivity_gap(eps, a, b) > 0.0);
            }
        o.note << " violations " << bad << " of 30000";
        o.require(bad == 0, "zero violations");
    });

    std::printf("acceptance: %d of 10 criteria failed\n", failures);
    return failures ? 1 : 0;
}
