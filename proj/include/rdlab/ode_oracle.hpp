#pragma once

#include <utility>
#include <vector>

#include "rdlab/ode.hpp"
#include "rdlab/quadrature.hpp"

namespace rdlab {

struct RootReport {
    double c0 = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double residual = 0.0;
    bool tangency_warning = false;
};

/// Largest zero of G below search_hi: log-grid sign scan followed by bisection.
/// Throws NoRootError if G is not negative on [search_hi, 10 search_hi].
RootReport largest_root(const RateFunction& G, double search_hi, int grid_points = 2048);

/// Smallest power of two 2^k such that G < 0 on a wide band of probes above it.
double eventual_negativity_scale(const RateFunction& G);

/// v_inf(t), inverting int_{v}^inf du/(-G) = t above the handoff level c0 (1 + 1e-3)
/// and continuing by the IVP below it. The setup (root, handoff time) is computed once.
class VInfinity {
public:
    VInfinity(RateFunction G, double tol = 1e-10);

    double operator()(double t) const;
    /// log v_inf(t), defined even when v_inf(t) exceeds the double range.
    double log_value(double t) const;

    double c0() const { return root_.c0; }
    double handoff() const { return handoff_; }
    double handoff_time() const { return T_handoff_; }
    const RootReport& root() const { return root_; }
    const RateFunction& G() const { return G_; }

private:
    RateFunction G_;
    double tol_;
    RootReport root_;
    double handoff_ = 0.0;
    double T_handoff_ = 0.0;
};

double v_infinity(const RateFunction& G, double t, double tol = 1e-10);

/// log c ladders: c = 10^k, and log c = 10^k (c far beyond the double range).
std::vector<double> decade_ladder(int k_lo, int k_hi);
std::vector<double> log_decade_ladder(int k_lo, int k_hi);

/// log v_c(t) for v(0) = c = exp(log_c). Above u = 1e6 the descent is integrated with
/// the state s = log v as independent variable; below it the plain IVP takes over.
double log_vc(const RateFunction& G, double log_c, double t, double tol);

struct DichotomyResult {
    bool bounded = false;
    double limit = 0.0;   // v_c(t) at the last rung when bounded
    double v_inf = 0.0;   // oracle value when available
    std::vector<std::pair<double, double>> rungs;  // (log c, log v_c(t))
};

/// Bounded when v_c(t) stabilises along the ladder (relative change < tol) and matches
/// v_inf(t) within 10 tol; Unbounded when log v_c(t) keeps growing with increments whose
/// ratio stays >= 0.8 over the last three rungs. InconclusiveError otherwise.
/// The ladder is given as log c values and must span at least six decades of c.
DichotomyResult dichotomy(const RateFunction& G, double t, const std::vector<double>& log_c,
                          double tol = 1e-6);

struct LongtimeReport {
    double limit = 0.0;
    double c0 = 0.0;
    double t_final = 0.0;
    bool used_ivp_fallback = false;
};

struct LongtimeOptions {
    bool ivp_fallback = false;   // if G is not Osgood, follow v_c from c = fallback_c
    double fallback_c = 1e6;
    int max_doublings = 40;
};

/// lim_{t->inf} v_inf(t) by doubling times; checked against largest_root within 10 tol.
LongtimeReport longtime_limit(const RateFunction& G, double tol, const LongtimeOptions& opts = {});

}  // namespace rdlab
