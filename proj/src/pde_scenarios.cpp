#include "rdlab/pde_scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rdlab/envelope.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/ode_oracle.hpp"
#include "rdlab/rate.hpp"

namespace rdlab {

CollapseReport universal_collapse(const ReactionTerm& term, const Operator1D& op,
                                  const std::vector<double>& As, const CollapseOptions& opts) {
    CollapseReport rep;
    rep.A = As;
    rep.values.resize(As.size());
    for (std::size_t j = 0; j < As.size(); ++j) {
        const double A = As[j];
        Trajectory tr = solve_dirichlet([A](double) { return A; }, op, term, -opts.X, opts.X,
                                        {opts.t_probe}, Dirichlet::constant(A, A), opts.solver);
        rep.values[j] = tr.value(tr.frames.size() - 1, opts.x_probe);
    }
    for (std::size_t j = 1; j < As.size(); ++j) {
        rep.diffs.push_back(rep.values[j] - rep.values[j - 1]);
        rep.growth.push_back(rep.values[j] / rep.values[j - 1]);
    }
    for (std::size_t j = 1; j < rep.diffs.size(); ++j) rep.shrink.push_back(rep.diffs[j - 1] / rep.diffs[j]);
    return rep;
}

BarrierBound thm1_barrier_bound(const ReactionTerm& term, const Operator1D& op, double R, double l,
                                double eps, double x, double t, const ResidualGrid& grid) {
    BarrierParams p{R, l, 0.0, 0, BarrierFamily::Thm1Barrier};
    Thm1Options o;
    o.eps = eps;
    FindKResult k = find_K_thm1(p, op, term, grid, o, {});
    p.K = k.K;
    BarrierBound b;
    b.K = k.K;
    b.report = residual_thm1(p, op, term, grid, o);
    double v = v_infinity(RateFunction::iter_log_model(0, eps), t);
    b.log_M = log_M(p, x, t, v);
    b.M = std::exp(b.log_M);
    return b;
}

double witness_upper_oracle(const ReactionTerm& term, double T) {
    if (term.concave_in_u()) {
        Envelope F = envelope(term, kInfiniteRadius);
        return v_infinity(RateFunction::from_envelope(F), T);
    }
    ShiftEnvelopes se = shift_envelopes(term, false);
    return v_infinity(RateFunction(se.G, "G[" + term.id() + "]"), T);
}

namespace {

struct Bumps {
    std::vector<double> a, c, w;
    double operator()(double x) const {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::exp(-std::pow((x - c[k]) / w[k], 2));
        return s;
    }
};

Bumps random_bumps(std::mt19937_64& rng, double X, double amp) {
    std::uniform_real_distribution<double> ua(0.0, amp), uc(-X, X), uw(0.2, 1.0);
    Bumps b;
    for (int k = 0; k < 3; ++k) {
        b.a.push_back(ua(rng));
        b.c.push_back(uc(rng));
        b.w.push_back(uw(rng));
    }
    return b;
}

}  // namespace

ComparisonReport comparison_suite(const ReactionTerm& term, const Operator1D& op, int triples,
                                  std::uint64_t seed, const ComparisonOptions& opts) {
    ComparisonReport rep;
    rep.term_id = term.id();
    rep.triples = triples;
    rep.tolerance = 10.0 * (opts.solver.dx * opts.solver.dx + opts.solver.dt);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ub(0.0, opts.amplitude);
    const std::vector<double> outs{0.1 * opts.T, 0.5 * opts.T, opts.T};
    for (int n = 0; n < triples; ++n) {
        Bumps g[3], f[3];
        double bl[3], br[3];
        for (int r = 0; r < 3; ++r) {
            g[r] = random_bumps(rng, opts.X, opts.amplitude);
            f[r] = random_bumps(rng, opts.X, opts.amplitude);
            bl[r] = ub(rng);
            br[r] = ub(rng);
        }
        // cumulative sums give ordered data, boundary values and forcings
        std::vector<Trajectory> runs;
        for (int r = 0; r < 3; ++r) {
            auto gr = [&, r](double x) {
                double s = 0.0;
                for (int q = 0; q <= r; ++q) s += g[q](x);
                return s;
            };
            auto fr = [&, r](double x) {
                double s = 0.0;
                for (int q = 1; q <= r; ++q) s += f[q](x);
                return s;
            };
            double L = 0.0, Rv = 0.0;
            for (int q = 0; q <= r; ++q) {
                L += bl[q];
                Rv += br[q];
            }
            runs.push_back(solve_dirichlet(gr, op, term, -opts.X, opts.X, outs,
                                           Dirichlet::constant(L, Rv), opts.solver, fr));
        }
        bool bad = false;
        for (int r = 0; r + 1 < 3; ++r)
            for (std::size_t j = 0; j < runs[r].frames.size(); ++j)
                for (std::size_t i = 0; i < runs[r].x.size(); ++i) {
                    double gap = runs[r].frames[j][i] - runs[r + 1].frames[j][i];
                    rep.max_violation = std::max(rep.max_violation, gap);
                    if (gap > rep.tolerance) bad = true;
                }
        if (bad) ++rep.violations;
    }
    return rep;
}

std::vector<ReactionTerm> evolvable_catalog() {
    auto one = Coefficient::constant(1.0), zero = Coefficient::constant(0.0);
    return {
        ReactionTerm::pure_power(1.0, 2.0, "minus_u2"),
        ReactionTerm::shifted_log_power(3.0, "minus_u_log3"),
        ReactionTerm::linear_decay("minus_u"),
        ReactionTerm::linear_minus_power(one, one, 2.0, "logistic"),
        ReactionTerm::linear_minus_power(Coefficient::sine(0.0, 1.0), Coefficient::weight(1.0, 0.0),
                                         3.0, "sin_u_minus_u3"),
        ReactionTerm::linear_minus_iter_log(zero, one, 0, 1.0, "iterlog_m0"),
        ReactionTerm::linear_minus_iter_log(zero, one, 1, 0.5, "iterlog_m1"),
        ReactionTerm::table(TableEntry::SqrtDriftRegularized, 0.5, zero, one, "sqrt_drift_reg"),
    };
}

}  // namespace rdlab
