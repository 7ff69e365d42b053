#include "rdlab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdlab/envelope.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/iterlog.hpp"
#include "rdlab/numeric.hpp"
#include "rdlab/ode_oracle.hpp"
#include "rdlab/residual_kernels.hpp"

namespace rdlab {

const char* to_string(BarrierFamily f) {
    return f == BarrierFamily::Thm1Barrier ? "Thm1Barrier" : "Thm3Barrier";
}

void validate(const BarrierParams& p, double eps) {
    if (!(p.l > 0)) throw DomainError("barrier exponent l must be positive");
    if (!(p.l * eps > 2)) throw DomainError("barrier needs l*eps > 2");
    if (p.iter_m < 0) throw DomainError("barrier iterate level must be >= 0");
    if (!(p.R > 0)) throw DomainError("barrier radius must be positive");
    if (p.family == BarrierFamily::Thm3Barrier && !(p.R > 1))
        throw DomainError("Thm3 barrier needs R > 1");
}

namespace {

void check_inside(const BarrierParams& p, double x) {
    if (!(std::abs(x) < p.R))
        throw DomainError("barrier evaluated at |x| = " + std::to_string(std::abs(x)) +
                          " >= R = " + std::to_string(p.R));
}

double log_sum_exp(double a, double b) {
    double m = std::max(a, b);
    if (std::isinf(m)) return m;
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// largest P for which exp^{(m)}(P) stays below 1e100
double core_cap(int m) {
    double c = std::log(1e100);
    for (int k = 1; k < m; ++k) c = std::log(c);
    return m == 0 ? std::numeric_limits<double>::infinity() : c;
}

// |x| at which the core reaches P = cap
double window_for_cap(const BarrierParams& p, double cap) {
    if (std::isinf(cap)) return p.R;
    if (p.family == BarrierFamily::Thm1Barrier) {
        double D = std::pow(cap, -1.0 / p.l);
        return D >= p.R * p.R ? 0.0 : std::sqrt(p.R * p.R - D);
    }
    double Z = std::pow(cap, 1.0 / p.l);
    double x2 = (Z * p.R * p.R - 1.0) / (Z + 1.0);
    return x2 <= 0 ? 0.0 : std::sqrt(x2);
}

double log_phi_from_core(int m, double P) {
    double v = P;
    for (int k = 0; k < m; ++k) {
        v = std::exp(v);
        if (!std::isfinite(v)) throw OverflowError("log phi leaves the double range");
    }
    return v;
}

}  // namespace

BarrierCore barrier_core(const BarrierParams& p, double x) {
    check_inside(p, x);
    const double R2 = p.R * p.R, l = p.l, x2 = x * x;
    const double D = R2 - x2;
    BarrierCore c;
    if (p.family == BarrierFamily::Thm1Barrier) {
        c.P = std::pow(D, -l);
        c.dP = 2 * l * x * std::pow(D, -l - 1);
        c.d2P = 2 * l * std::pow(D, -l - 1) + 4 * l * (l + 1) * x2 * std::pow(D, -l - 2);
    } else {
        const double Z = (1 + x2) / D;
        const double dZ = 2 * x * (R2 + 1) / (D * D);
        const double d2Z = 2 * (R2 + 1) / (D * D) + 8 * x2 * (R2 + 1) / (D * D * D);
        c.P = std::pow(Z, l);
        c.dP = l * std::pow(Z, l - 1) * dZ;
        c.d2P = l * (l - 1) * std::pow(Z, l - 2) * dZ * dZ + l * std::pow(Z, l - 1) * d2Z;
    }
    return c;
}

double log_phi(const BarrierParams& p, double x) {
    return log_phi_from_core(p.iter_m, barrier_core(p, x).P);
}

double eval_phi(const BarrierParams& p, double x) {
    double v = std::exp(log_phi(p, x));
    if (!std::isfinite(v)) throw OverflowError("phi leaves the double range");
    return v;
}

double log_psi(const BarrierParams& p, double x, double t) {
    double lp = log_phi(p, x);
    return p.K * (t + 1) + lp + std::log(-std::expm1(-lp));
}

double eval_psi(const BarrierParams& p, double x, double t) {
    double v = std::exp(log_psi(p, x, t));
    if (!std::isfinite(v)) throw OverflowError("psi leaves the double range");
    return v;
}

double log_M(const BarrierParams& p, double x, double t, double v_inf) {
    double logE = p.K * (t + 1) + log_phi(p, x);
    return log_sum_exp(logE, std::log(v_inf));
}

BarrierDerivatives barrier_derivatives(const BarrierParams& p, const Operator1D& op, double x,
                                       double /*t*/) {
    BarrierDerivatives d;
    d.core = barrier_core(p, x);
    const double a = op.a(x), b = op.b(x);
    const double P = d.core.P, dP = d.core.dP, d2P = d.core.d2P;
    // Phi_0 = P, Phi_k = exp(Phi_{k-1}); phi = Phi_{m+1}
    std::vector<double> Phi{P};
    for (int k = 1; k <= p.iter_m; ++k) Phi.push_back(std::exp(Phi.back()));
    d.log_phi = Phi.back();
    double logPi = 0.0;
    for (int k = 0; k < p.iter_m; ++k) logPi += Phi[k];
    d.log_Pi = logPi;
    // S = sum_{k=0}^m prod_{j=1}^k Phi_j
    double S = 0.0, prod = 1.0;
    for (int k = 0; k <= p.iter_m; ++k) {
        if (k > 0) prod *= Phi[k];
        S += prod;
    }
    d.bracket = a * (d2P + dP * dP * S) + b * dP;
    d.L_phi_over_phi = p.iter_m == 0 ? d.bracket : std::exp(logPi) * d.bracket;
    d.dt_ratio = p.K;
    if (p.iter_m == 0) {
        const double R2 = p.R * p.R, l = p.l, x2 = x * x, D = R2 - x2;
        if (p.family == BarrierFamily::Thm1Barrier) {
            d.thm1_quadratic =
                (4 * l * l * std::pow(D, -2 * l - 2) + 4 * l * (l + 1) * std::pow(D, -l - 2)) * a * x2;
            d.thm1_trace = 2 * l * a * std::pow(D, -l - 1);
            d.thm1_drift = 2 * l * std::pow(D, -l - 1) * x * b;
        } else {
            const double q = 1 + x2;
            d.W[0] = 4 * l * l * std::pow(q, 2 * l - 2) * std::pow(D, -2 * l - 2) * (R2 + 1) * (R2 + 1) * a * x2;
            d.W[1] = 4 * l * (l - 1) * std::pow(q, l - 2) * std::pow(D, -l - 2) * (R2 + 1) * (R2 + 1) * a * x2;
            d.W[2] = 8 * l * std::pow(q, l - 1) * std::pow(D, -l - 2) * (R2 + 1) * a * x2;
            d.W[3] = 2 * l * a * std::pow(q, l - 1) * std::pow(D, -l - 1) * (R2 + 1);
            d.W[4] = 2 * l * std::pow(q, l - 1) * std::pow(D, -l - 1) * (R2 + 1) * x * b;
        }
    }
    return d;
}

DominanceConstants dominance_constants(const ReactionTerm& term, double R, int m, double eps) {
    Envelope F = envelope(term, R);
    RateFunction Q = RateFunction::iter_log_model(m, eps);
    const double s_min = iter_exp(m, 0.0) + 0.01;
    std::vector<double> ss = linspace(s_min, std::max(s_min + 1.0, std::log(1e12)), 200);
    for (int k = 0; k < 16; ++k) ss.push_back(ss.back() * 2.0);
    long last_fail = -1;
    for (std::size_t i = 0; i < ss.size(); ++i) {
        double rhs = -std::exp(Q.log_neg_rate(ss[i]));
        // relative slack absorbs round-off where both sides agree asymptotically
        if (!(F.rate_log(ss[i]) <= rhs * (1.0 - 1e-12))) last_fail = static_cast<long>(i);
    }
    if (last_fail == static_cast<long>(ss.size()) - 1)
        throw EnvelopeDominanceError("F_R(u) <= -u (prod log)^2 (log^{(m+1)} u)^{2+eps} fails at u = exp(" +
                                     std::to_string(ss.back()) + ") for term '" + term.id() + "'");
    DominanceConstants dc;
    dc.u0 = std::exp(ss[static_cast<std::size_t>(last_fail + 1)]);
    double c0 = 0.0;
    for (double u : logspace(-6.0, std::log10(dc.u0), 121)) c0 = std::max(c0, F(u) / u);
    dc.C0 = c0;
    return dc;
}

namespace {

struct GridEval {
    GridMax gm;
    std::vector<double> xs, ts, field;
};

GridEval evaluate(const std::vector<double>& xs, const std::vector<double>& ts,
                  const std::function<double(double, std::size_t, double, std::size_t)>& r,
                  bool keep) {
    GridEval g;
    g.xs = xs;
    g.ts = ts;
    GridResidual kernel = [&](std::size_t i, std::size_t j) { return r(xs[i], i, ts[j], j); };
    g.gm = grid_max(kernel, xs.size(), ts.size(), keep ? &g.field : nullptr);
    return g;
}

// sum of terms over the largest magnitude; sign-faithful and always finite
double normalised(std::initializer_list<double> terms) {
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    if (std::isnan(sum)) return sum;
    if (std::isinf(scale)) {
        // dominant infinite terms decide the sign
        double pos = 0, neg = 0;
        for (double t : terms) {
            if (t == std::numeric_limits<double>::infinity()) pos = 1;
            if (t == -std::numeric_limits<double>::infinity()) neg = 1;
        }
        if (pos && neg) return std::numeric_limits<double>::quiet_NaN();
        return pos ? 1.0 : -1.0;
    }
    return scale > 0 ? sum / scale : 0.0;
}

}  // namespace

ResidualReport residual_thm1(const BarrierParams& p, const Operator1D& op,
                             const ReactionTerm& term, const ResidualGrid& grid,
                             const Thm1Options& opts) {
    if (p.family != BarrierFamily::Thm1Barrier) throw DomainError("residual_thm1 needs a Thm1 barrier");
    validate(p, opts.eps);
    const int m = p.iter_m;
    DominanceConstants dc = dominance_constants(term, p.R, m, opts.eps);
    RateFunction Q = RateFunction::iter_log_model(m, opts.eps);
    VInfinity vinf(Q, 1e-10);

    ResidualReport rep;
    rep.family = p.family;
    rep.R = p.R;
    rep.l = p.l;
    rep.K = p.K;
    rep.eps = opts.eps;
    rep.iter_m = m;
    rep.grid = grid;
    rep.u0 = dc.u0;
    // T0: largest t <= cap with v_inf(t) > 1
    double T0 = opts.T0_cap;
    if (!(vinf.log_value(T0) > 0)) {
        double lo = grid.t_min, hi = T0;
        for (int i = 0; i < 100; ++i) {
            double mid = 0.5 * (lo + hi);
            (vinf.log_value(mid) > 0 ? lo : hi) = mid;
        }
        T0 = lo;
    }
    rep.T0 = T0;
    const double T = std::min(grid.T, T0);
    const double xw = std::min(p.R * (1 - grid.margin), window_for_cap(p, core_cap(m)));
    rep.x_window = xw;

    auto run = [&](int nx, int nt, bool keep) {
        auto xs = linspace(-xw, xw, nx);
        auto ts = linspace(grid.t_min, T, nt);
        std::vector<double> logv(ts.size()), rQ(ts.size());
        for (std::size_t j = 0; j < ts.size(); ++j) {
            logv[j] = vinf.log_value(ts[j]);
            rQ[j] = -std::exp(Q.log_neg_rate(logv[j]));
        }
        std::vector<BarrierDerivatives> ders;
        ders.reserve(xs.size());
        for (double x : xs) ders.push_back(barrier_derivatives(p, op, x));
        auto r = [&](double x, std::size_t i, double t, std::size_t j) {
            const BarrierDerivatives& d = ders[i];
            double logE = p.K * (t + 1) + d.log_phi;
            double ratio = std::exp(logv[j] - logE);
            double logM = logE + std::log1p(ratio);
            double rf = term.rate_log(x, logM);
            return normalised({d.L_phi_over_phi, -p.K, rf, ratio * rf, -ratio * rQ[j]});
        };
        return evaluate(xs, ts, r, keep);
    };
    GridEval base = run(grid.nx, grid.nt, opts.keep_field);
    rep.max_residual = base.gm.value;
    rep.worst_x = base.xs[base.gm.i];
    rep.worst_t = base.ts[base.gm.j];
    rep.has_nan = base.gm.has_nan;
    bool ok = base.gm.value <= 0 && !base.gm.has_nan;
    rep.refined_max_residual = rep.max_residual;
    if (opts.refine && ok) {
        GridEval fine = run(2 * grid.nx - 1, 2 * grid.nt - 1, false);
        rep.refined_max_residual = fine.gm.value;
        rep.has_nan = rep.has_nan || fine.gm.has_nan;
        ok = fine.gm.value <= 0 && !fine.gm.has_nan;
    }
    // the construction needs exp(K) > u0 as well
    rep.sign_certified = ok && std::exp(p.K) > dc.u0;
    if (opts.keep_field) {
        rep.xs = std::move(base.xs);
        rep.ts = std::move(base.ts);
        rep.field = std::move(base.field);
    }
    return rep;
}

ResidualReport residual_thm3(const BarrierParams& p, const Operator1D& op,
                             const ReactionTerm& term, const ResidualGrid& grid,
                             const Thm3Options& opts) {
    if (p.family != BarrierFamily::Thm3Barrier) throw DomainError("residual_thm3 needs a Thm3 barrier");
    validate(p, opts.eps);
    GrowthProbe gp = op.probe_growth();
    if (!gp.b_bounded)
        throw ConditionL1Error("|b(x)|/(1+|x|) keeps growing (" + std::to_string(gp.b_ratio) +
                               " on |x| <= 1000)");
    if (!gp.a_bounded)
        throw ConditionL1Error("a(x)/(1+x^2) keeps growing (" + std::to_string(gp.a_ratio) +
                               " on |x| <= 1000)");
    const int m = p.iter_m;
    double M0 = opts.M0, C0 = opts.C0;
    if (M0 <= 0 || C0 < 0) {
        DominanceConstants dc = dominance_constants(term, kInfiniteRadius, m, opts.eps);
        if (M0 <= 0) M0 = dc.u0;
        if (C0 < 0) C0 = dc.C0;
    }
    const double logM0 = std::log(M0);

    ResidualReport rep;
    rep.family = p.family;
    rep.R = p.R;
    rep.l = p.l;
    rep.K = p.K;
    rep.eps = opts.eps;
    rep.iter_m = m;
    rep.grid = grid;
    rep.M0 = M0;
    rep.C0 = C0;
    rep.diagnostics = opts.diagnostics && m == 0;
    const double xw = std::min(p.R * (1 - grid.margin), window_for_cap(p, core_cap(m)));
    rep.x_window = xw;

    auto run = [&](int nx, int nt, bool keep) {
        auto xs = linspace(-xw, xw, nx);
        auto ts = linspace(grid.t_min, grid.T, nt);
        std::vector<BarrierDerivatives> ders;
        ders.reserve(xs.size());
        for (double x : xs) ders.push_back(barrier_derivatives(p, op, x));
        auto r = [&](double x, std::size_t i, double t, std::size_t) {
            const BarrierDerivatives& d = ders[i];
            double frac = 1.0 / (-std::expm1(-d.log_phi));  // phi / (phi - 1)
            double lpsi = p.K * (t + 1) + d.log_phi + std::log(-std::expm1(-d.log_phi));
            double rf = term.rate_log(x, lpsi);
            double Lterm = std::isinf(d.L_phi_over_phi) ? d.L_phi_over_phi : frac * d.L_phi_over_phi;
            return normalised({Lterm, -p.K, rf});
        };
        return evaluate(xs, ts, r, keep);
    };
    GridEval base = run(grid.nx, grid.nt, opts.keep_field);
    rep.max_residual = base.gm.value;
    rep.worst_x = base.xs[base.gm.i];
    rep.worst_t = base.ts[base.gm.j];
    rep.has_nan = base.gm.has_nan;
    bool ok = base.gm.value <= 0 && !base.gm.has_nan;
    rep.refined_max_residual = rep.max_residual;
    if (opts.refine && ok) {
        GridEval fine = run(2 * grid.nx - 1, 2 * grid.nt - 1, false);
        rep.refined_max_residual = fine.gm.value;
        rep.has_nan = rep.has_nan || fine.gm.has_nan;
        ok = fine.gm.value <= 0 && !fine.gm.has_nan;
    }
    rep.sign_certified = ok;

    if (rep.diagnostics) {
        WDiagnostics& w = rep.wdiag;
        const double ninf = -std::numeric_limits<double>::infinity();
        w.worst_a.fill(ninf);
        w.worst_b.fill(ninf);
        w.c0_empirical = 1.0;
        for (double x : base.xs) {
            BarrierDerivatives d = barrier_derivatives(p, op, x);
            double frac = 1.0 / (-std::expm1(-d.log_phi));
            for (double t : base.ts) {
                double lpsi = p.K * (t + 1) + d.log_phi + std::log(-std::expm1(-d.log_phi));
                bool low = lpsi <= logM0, high = lpsi >= logM0;
                for (int k = 0; k < 5; ++k) {
                    double v = d.W[k] * frac;
                    if (low) w.worst_a[k] = std::max(w.worst_a[k], v - (p.K - C0) / 5);
                    if (high)
                        w.worst_b[k] = std::max(w.worst_b[k], v - p.K / 5 -
                                                                  std::pow(lpsi, 2 + opts.eps) / 5);
                }
                if (high) w.c0_empirical = std::min(w.c0_empirical, 1.0 / frac);
            }
        }
        w.split_certified = true;
        for (int k = 0; k < 5; ++k)
            w.split_certified = w.split_certified && w.worst_a[k] <= 0 && w.worst_b[k] <= 0;
        w.L0 = std::pow(std::log(M0 + 1), 1.0 / p.l);
        double g = std::log1p(M0 * std::exp(-p.K * (grid.T + 1)));
        w.gamma0 = std::pow(g, 1.0 / p.l);
    }
    if (opts.keep_field) {
        rep.xs = std::move(base.xs);
        rep.ts = std::move(base.ts);
        rep.field = std::move(base.field);
    }
    return rep;
}

double thm1_origin_majorant(double R, double l, double eps, double a0, double K, double t) {
    const double R2 = R * R;
    const double phi0 = std::exp(std::pow(R2, -l));
    const double Lratio = 2 * l * a0 * std::pow(R2, -l - 1);
    return std::exp(K * (t + 1)) * phi0 * (Lratio - std::pow(R2, -(2 + eps) * l) - K);
}

namespace {

template <class Cert>
double k_schedule(Cert&& certified, double K_start, double K_max, double rel_tol, double abs_tol,
                  int& evals) {
    double lo = 0.0, K = K_start;
    while (true) {
        ++evals;
        if (certified(K)) break;
        lo = K;
        K *= 2.0;
        if (K > K_max)
            throw KExhaustedError("no certified K up to " + std::to_string(K_max));
    }
    double hi = K;
    while (hi - lo > std::max(rel_tol * hi, abs_tol)) {
        double mid = 0.5 * (lo + hi);
        ++evals;
        if (certified(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace

FindKResult find_K_thm1(BarrierParams p, const Operator1D& op, const ReactionTerm& term,
                        const ResidualGrid& grid, const Thm1Options& opts,
                        const FindKOptions& kopts) {
    FindKResult res;
    auto cert = [&](double K) {
        p.K = K;
        return residual_thm1(p, op, term, grid, opts).sign_certified;
    };
    res.K = k_schedule(cert, kopts.K_start, kopts.K_max, kopts.rel_tol, 0.0, res.evaluations);
    return res;
}

FindKResult find_K_thm3(BarrierParams p, const Operator1D& op, const ReactionTerm& term,
                        const ResidualGrid& grid, const Thm3Options& opts,
                        const FindKOptions& kopts) {
    FindKResult res;
    Thm3Options o = opts;
    if (kopts.split) o.diagnostics = true;
    // fix M0, C0 once so that every evaluation uses the same constants
    if (o.M0 <= 0 || o.C0 < 0) {
        DominanceConstants dc = dominance_constants(term, kInfiniteRadius, p.iter_m, o.eps);
        if (o.M0 <= 0) o.M0 = dc.u0;
        if (o.C0 < 0) o.C0 = dc.C0;
    }
    auto cert = [&](double K) {
        p.K = K;
        ResidualReport r = residual_thm3(p, op, term, grid, o);
        return kopts.split ? r.sign_certified && r.wdiag.split_certified : r.sign_certified;
    };
    res.K = k_schedule(cert, kopts.K_start, kopts.K_max, kopts.rel_tol, 0.0, res.evaluations);
    res.ladder_certified = true;
    for (int j = 0; j < kopts.ladder; ++j) {
        BarrierParams q = p;
        q.K = res.K;
        q.R = p.R * std::ldexp(1.0, j);
        ResidualReport r = residual_thm3(q, op, term, grid, o);
        bool ok = kopts.split ? r.sign_certified && r.wdiag.split_certified : r.sign_certified;
        res.ladder_certified = res.ladder_certified && ok;
        res.ladder.push_back(std::move(r));
    }
    return res;
}

double find_K_origin(double R, double l, double eps, double a0, double t, double tol) {
    int evals = 0;
    auto cert = [&](double K) { return thm1_origin_majorant(R, l, eps, a0, K, t) < 0; };
    return k_schedule(cert, 1.0, 1e9, 0.0, tol, evals);
}

double annulus_barrier_Q(int m, double W, double x) {
    if (m < 4) throw DomainError("annulus barrier needs m >= 4");
    const double ax = std::abs(x);
    if (ax < m + 1 || ax > 2 * m)
        throw DomainError("annulus barrier evaluated outside m+1 <= |x| <= 2m");
    const double l = 0.5 * (m - 1);
    const double d = m + 1 + l - ax;
    return (l * l - d * d) * W;
}

double subadditivity_gap(double eps, double a, double b) {
    auto Q = [eps](double u) { return -u * std::pow(std::log(u), 2 + eps); };
    return Q(a) - (Q(b + a) - Q(b));
}

}  // namespace rdlab
