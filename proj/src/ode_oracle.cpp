#include "rdlab/ode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "rdlab/errors.hpp"
#include "rdlab/numeric.hpp"

namespace rdlab {

namespace {

const double kSwitchLog = std::log(1e6);

bool negative_at(const RateFunction& G, double u) {
    if (u > 1e300) return !std::isnan(G.log_neg_rate(std::log(u)));
    return G(u) < 0;
}

}  // namespace

double eventual_negativity_scale(const RateFunction& G) {
    static const double band[] = {1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 1e2, 1e4, 1e8};
    for (int k = 0; k < 200; ++k) {
        double base = std::ldexp(1.0, k);
        bool ok = true;
        for (double f : band) ok = ok && negative_at(G, base * f);
        if (ok && G.has_log_form()) {
            double s = std::log(base);
            for (double d : {10.0, 100.0, 1e3, 1e4})
                ok = ok && !std::isnan(G.log_neg_rate(s + d));
        }
        if (ok) return base;
    }
    throw NoRootError("G is not eventually negative on the probe band up to 2^200");
}

RootReport largest_root(const RateFunction& G, double search_hi, int grid_points) {
    if (!(search_hi > 0)) throw DomainError("largest_root needs search_hi > 0");
    for (int i = 0; i <= 16; ++i) {
        double u = search_hi * (1.0 + 9.0 * i / 16.0);
        if (!(G(u) < 0))
            throw NoRootError("G(" + std::to_string(u) + ") >= 0 in [search_hi, 10 search_hi]");
    }
    auto us = logspace(std::log10(search_hi) - 12.0, std::log10(search_hi), grid_points);
    std::vector<double> gs(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) gs[i] = G(us[i]);
    long last_nonneg = -1;
    for (long i = static_cast<long>(us.size()) - 1; i >= 0; --i)
        if (!(gs[i] < 0)) {
            last_nonneg = i;
            break;
        }
    RootReport rep;
    if (last_nonneg == static_cast<long>(us.size()) - 1)
        throw NoRootError("G >= 0 at search_hi");
    if (last_nonneg < 0) {
        double g0 = G(0.0);
        if (g0 == 0.0) {
            rep.c0 = 0.0;
            rep.lo = 0.0;
            rep.hi = us[0];
        } else if (g0 > 0) {
            auto g = [&G](double u) { return G(u) >= 0 ? 1.0 : -1.0; };
            rep.c0 = bisect(g, 0.0, us[0]);
            rep.lo = 0.0;
            rep.hi = us[0];
        } else {
            throw NoRootError("G < 0 on [0, search_hi]: no root");
        }
    } else {
        double lo = us[last_nonneg], hi = us[last_nonneg + 1];
        auto g = [&G](double u) { return G(u) >= 0 ? 1.0 : -1.0; };
        rep.c0 = bisect(g, lo, hi);
        rep.lo = lo;
        rep.hi = hi;
    }
    rep.residual = std::abs(G(rep.c0));

    // local maxima of G above c0 that nearly touch zero
    double scale = 0.0;
    for (double g : gs) scale = std::max(scale, std::abs(g));
    for (std::size_t j = static_cast<std::size_t>(last_nonneg + 2); j + 1 < us.size(); ++j) {
        if (gs[j] >= gs[j - 1] && gs[j] >= gs[j + 1] && gs[j] > -1e-6 * scale) {
            auto [arg, val] = golden_max([&G](double u) { return G(u); }, us[j - 1], us[j + 1]);
            (void)arg;
            if (val >= -1e-9 * std::max(1.0, scale)) rep.tangency_warning = true;
        }
    }
    return rep;
}

VInfinity::VInfinity(RateFunction G, double tol) : G_(std::move(G)), tol_(tol) {
    double hi = eventual_negativity_scale(G_);
    root_ = largest_root(G_, hi);
    handoff_ = root_.c0 > 0 ? root_.c0 * (1.0 + 1e-3) : 1e-9 * hi;
    T_handoff_ = tail_integral(G_, handoff_);
}

double VInfinity::log_value(double t) const {
    if (!(t > 0)) throw DomainError("v_infinity needs t > 0");
    if (t >= T_handoff_) {
        OdeSolution sol = solve_ivp_from(G_, T_handoff_, handoff_, {t}, tol_);
        return std::log(sol.values.back());
    }
    // T(L) = int_{e^L}^inf du/(-G) is decreasing in L; dT/dL = -exp(-log_neg_rate(L))
    const double L0 = std::log(handoff_);
    double lo = L0, hi = L0 + 1.0;
    for (int k = 0; tail_integral_log(G_, hi) >= t; ++k) {
        lo = hi;
        hi = L0 + std::ldexp(1.0, k + 1);
        if (k > 60) throw ConvergenceError("v_infinity: cannot bracket t = " + std::to_string(t));
    }
    double L = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double T = tail_integral_log(G_, L);
        double r = T - t;
        if (r > 0) lo = L;
        else hi = L;
        double slope = -std::exp(-G_.log_neg_rate(L));
        double next = L - r / slope;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        double step = std::abs(next - L);
        L = next;
        if (step < 1e-3 * tol_ || hi - lo < 1e-3 * tol_) break;
    }
    return L;
}

double VInfinity::operator()(double t) const { return std::exp(log_value(t)); }

double v_infinity(const RateFunction& G, double t, double tol) {
    return VInfinity(G, tol)(t);
}

std::vector<double> decade_ladder(int k_lo, int k_hi) {
    std::vector<double> out;
    for (int k = k_lo; k <= k_hi; ++k) out.push_back(k * std::log(10.0));
    return out;
}

std::vector<double> log_decade_ladder(int k_lo, int k_hi) {
    std::vector<double> out;
    for (int k = k_lo; k <= k_hi; ++k) out.push_back(std::pow(10.0, k));
    return out;
}

double log_vc(const RateFunction& G, double log_c, double t, double tol) {
    bool descend = log_c > kSwitchLog && !std::isnan(G.log_neg_rate(log_c));
    if (!descend) {
        if (log_c > 709.0) throw DomainError("log_vc: c outside the double range needs a log form");
        OdeSolution sol = solve_ivp(G, std::exp(log_c), t, tol);
        return std::log(sol.values.back());
    }
    // phase 1: tau(s) = time needed to fall from log c to s, dtau/ds = -exp(-log_neg_rate(s))
    auto F = [&G](double s, double) { return -std::exp(-G.log_neg_rate(s)); };
    Dp45Options o;
    o.rtol = 1e-3 * tol;
    o.atol = 1e-3 * tol * t;
    ScalarPath p = integrate_dp45(F, log_c, 0.0, {kSwitchLog}, o,
                                  [t](double, double tau) { return tau >= t; });
    if (p.halted) {
        double a = p.halt_x1, b = p.halt_x0;  // tau(a) >= t > tau(b), a < b
        double x0 = p.halt_x0, y0 = p.halt_y0;
        for (int it = 0; it < 200 && b - a > 1e-3 * tol * std::max(1.0, std::abs(a)); ++it) {
            double mid = 0.5 * (a + b);
            double tau = integrate_dp45(F, x0, y0, {mid}, o).y.back();
            if (tau >= t) a = mid;
            else b = mid;
        }
        return 0.5 * (a + b);
    }
    double tau1 = p.y.back();
    OdeSolution sol = solve_ivp_from(G, tau1, std::exp(kSwitchLog), {t}, tol);
    return std::log(sol.values.back());
}

DichotomyResult dichotomy(const RateFunction& G, double t, const std::vector<double>& log_c,
                          double tol) {
    if (!(t > 0)) throw DomainError("dichotomy needs t > 0");
    if (log_c.size() < 4) throw DomainError("dichotomy needs at least four rungs");
    for (std::size_t i = 1; i < log_c.size(); ++i)
        if (!(log_c[i] > log_c[i - 1])) throw DomainError("dichotomy ladder must increase");
    if (log_c.back() - log_c.front() < 6.0 * std::log(10.0) * (1.0 - 1e-12))
        throw DomainError("dichotomy ladder must span at least six decades of c");

    DichotomyResult res;
    std::vector<double> L;
    for (double lc : log_c) {
        L.push_back(log_vc(G, lc, t, 1e-2 * tol));
        res.rungs.emplace_back(lc, L.back());
    }
    const std::size_t n = L.size();
    bool osgood = true;
    double vinf = 0.0;
    try {
        vinf = VInfinity(G, 1e-2 * tol)(t);
        res.v_inf = vinf;
    } catch (const NotOsgoodError&) {
        osgood = false;
    }
    double rel_change = std::abs(std::expm1(L[n - 1] - L[n - 2]));
    if (rel_change < tol && osgood) {
        double v = std::exp(L[n - 1]);
        if (std::abs(v - vinf) <= 10 * tol * std::max(1.0, vinf)) {
            res.bounded = true;
            res.limit = v;
            return res;
        }
    }
    double d1 = L[n - 3] - L[n - 4], d2 = L[n - 2] - L[n - 3], d3 = L[n - 1] - L[n - 2];
    if (d1 > 0 && d2 > 0 && d3 > 0 && d2 >= 0.8 * d1 && d3 >= 0.8 * d2) {
        res.bounded = false;
        return res;
    }
    throw InconclusiveError("dichotomy: ladder neither stabilises nor diverges (last relative change " +
                            std::to_string(rel_change) + ")");
}

LongtimeReport longtime_limit(const RateFunction& G, double tol, const LongtimeOptions& opts) {
    LongtimeReport rep;
    RootReport root = largest_root(G, eventual_negativity_scale(G));
    rep.c0 = root.c0;
    std::function<double(double)> v_at;
    std::unique_ptr<VInfinity> vi;
    double t_prev = 0.0, v_prev = opts.fallback_c;
    try {
        vi = std::make_unique<VInfinity>(G, 1e-3 * tol);
        v_at = [&vi](double t) { return (*vi)(t); };
    } catch (const NotOsgoodError&) {
        if (!opts.ivp_fallback) throw;
        rep.used_ivp_fallback = true;
        v_at = [&](double t) {
            double v = solve_ivp_from(G, t_prev, v_prev, {t}, 1e-3 * tol).values.back();
            t_prev = t;
            v_prev = v;
            return v;
        };
    }
    double prev = v_at(1.0);
    double t = 1.0;
    bool done = false;
    for (int k = 1; k <= opts.max_doublings; ++k) {
        t *= 2.0;
        double v = v_at(t);
        double change = std::abs(v - prev);
        prev = v;
        if (change < tol) {
            done = true;
            break;
        }
    }
    if (!done)
        throw ConvergenceError("longtime_limit: v_inf(t) still moving at t = " + std::to_string(t));
    rep.limit = prev;
    rep.t_final = t;
    if (std::abs(rep.limit - rep.c0) > 10 * tol * std::max(1.0, rep.c0))
        throw ConvergenceError("longtime limit " + std::to_string(rep.limit) +
                               " disagrees with the largest root " + std::to_string(rep.c0));
    return rep;
}

}  // namespace rdlab
