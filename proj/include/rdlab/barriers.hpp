#pragma once

#include <array>
#include <string>
#include <vector>

#include "rdlab/operator1d.hpp"
#include "rdlab/reaction.hpp"

namespace rdlab {

enum class BarrierFamily { Thm1Barrier, Thm3Barrier };
const char* to_string(BarrierFamily f);

/// phi = exp^{(m+1)}(P) with P = (R^2-x^2)^{-l} (Thm1) or ((1+x^2)/(R^2-x^2))^l (Thm3).
struct BarrierParams {
    double R = 1.0;
    double l = 3.0;
    double K = 1.0;
    int iter_m = 0;
    BarrierFamily family = BarrierFamily::Thm1Barrier;
};

/// Throws DomainError unless l*eps > 2, R > 0 (R > 1 for Thm3), l > 0, iter_m >= 0.
void validate(const BarrierParams& p, double eps);

/// Core exponent P(x) and its first two derivatives.
struct BarrierCore {
    double P = 0, dP = 0, d2P = 0;
};
BarrierCore barrier_core(const BarrierParams& p, double x);

/// log phi(x) = exp^{(m)}(P(x)); OverflowError if that leaves the double range.
double log_phi(const BarrierParams& p, double x);
double eval_phi(const BarrierParams& p, double x);
/// psi(x,t) = (phi(x) - 1) exp(K(t+1)) and its logarithm.
double eval_psi(const BarrierParams& p, double x, double t);
double log_psi(const BarrierParams& p, double x, double t);
/// M(x,t) = exp(K(t+1)) phi(x) + v_inf(t), given v_inf(t); log form for huge values.
double log_M(const BarrierParams& p, double x, double t, double v_inf);

struct BarrierDerivatives {
    BarrierCore core;
    double log_phi = 0;
    double log_Pi = 0;        // log prod_{k=1}^m exp^{(k)}(P); 0 when m = 0
    double bracket = 0;       // a (P'' + P'^2 S) + b P', with L phi / phi = Pi * bracket
    double L_phi_over_phi = 0;  // may be +-inf when Pi overflows
    // m = 0 decomposition of L phi / phi for Thm1: a x^2 terms, trace term, drift term
    double thm1_quadratic = 0, thm1_trace = 0, thm1_drift = 0;
    // m = 0 terms W_1..W_5 for Thm3 (L psi = exp(K(t+1)) phi sum W)
    std::array<double, 5> W{};
    double dt_ratio = 0;      // d/dt of the time factor over itself, i.e. K
};

/// DomainError for |x| >= R.
BarrierDerivatives barrier_derivatives(const BarrierParams& p, const Operator1D& op, double x,
                                       double t = 0.0);

struct ResidualGrid {
    int nx = 201;
    int nt = 50;
    double margin = 1e-3;
    double t_min = 1e-3;
    double T = 1.0;
};

struct WDiagnostics {
    std::array<double, 5> worst_a{};  // max over points with psi <= M0 of W_i phi/(phi-1) - (K-C0)/5
    std::array<double, 5> worst_b{};  // max over points with psi >= M0 of ... - K/5 - (log psi)^{2+eps}/5
    bool split_certified = false;
    double c0_empirical = 1.0;        // min (phi-1)/phi over psi >= M0
    double L0 = 0.0;
    double gamma0 = 0.0;
};

/// Residual of the super-solution inequality, divided by the largest of its
/// constituent magnitudes so that values are comparable across the grid.
struct ResidualReport {
    BarrierFamily family = BarrierFamily::Thm1Barrier;
    double R = 0, l = 0, K = 0, eps = 0;
    int iter_m = 0;
    ResidualGrid grid;
    double x_window = 0;     // |x| range actually evaluated
    double max_residual = 0;
    double refined_max_residual = 0;
    bool sign_certified = false;
    double worst_x = 0, worst_t = 0;
    bool has_nan = false;
    // constants used
    double u0 = 0, T0 = 0, M0 = 0, C0 = 0;
    bool diagnostics = false;
    WDiagnostics wdiag;
    std::vector<double> xs, ts, field;  // base grid field (row-major in t) when requested
};

struct DominanceConstants {
    double u0 = 0;   // F(u) <= -u (prod log)^2 (log^{(m+1)} u)^{2+eps} for probes u >= u0 (also M0)
    double C0 = 0;   // max(sup_{u <= u0} F(u)/u, 0) on probes
};

/// EnvelopeDominanceError if the dominance fails at the largest probes.
DominanceConstants dominance_constants(const ReactionTerm& term, double R, int m, double eps);

struct Thm1Options {
    double eps = 1.0;
    double T0_cap = 1.0;
    bool keep_field = false;
    bool refine = true;
};

ResidualReport residual_thm1(const BarrierParams& p, const Operator1D& op,
                             const ReactionTerm& term, const ResidualGrid& grid,
                             const Thm1Options& opts = {});

struct Thm3Options {
    double eps = 1.0;
    double M0 = -1.0;   // <= 0: computed from the envelope
    double C0 = -1.0;
    bool diagnostics = false;
    bool keep_field = false;
    bool refine = true;
};

ResidualReport residual_thm3(const BarrierParams& p, const Operator1D& op,
                             const ReactionTerm& term, const ResidualGrid& grid,
                             const Thm3Options& opts = {});

/// The x = 0 value of exp(K(t+1)) (L phi - (R^2)^{-(2+eps)l} phi - K phi) for Thm1, m = 0.
double thm1_origin_majorant(double R, double l, double eps, double a0, double K, double t);

struct FindKOptions {
    double K_start = 1.0;
    double K_max = 1e7;
    double rel_tol = 1e-3;
    bool split = false;             // Thm3: certify the per-W_i split instead of the aggregate
    int ladder = 4;                 // Thm3: validate at R 2^j, j < ladder
};

struct FindKResult {
    double K = 0;
    int evaluations = 0;
    std::vector<ResidualReport> ladder;  // Thm3 validation reports (R, 2R, 4R, ...)
    bool ladder_certified = false;
};

/// Smallest K (doubling, then bisection to rel_tol) whose report is sign certified.
FindKResult find_K_thm1(BarrierParams p, const Operator1D& op, const ReactionTerm& term,
                        const ResidualGrid& grid, const Thm1Options& opts,
                        const FindKOptions& kopts = {});
FindKResult find_K_thm3(BarrierParams p, const Operator1D& op, const ReactionTerm& term,
                        const ResidualGrid& grid, const Thm3Options& opts,
                        const FindKOptions& kopts = {});
/// Smallest K making thm1_origin_majorant negative, by the same schedule.
double find_K_origin(double R, double l, double eps, double a0, double t, double tol);

/// Q(x) = (l^2 - (m+1+l-|x|)^2) W(x), l = (m-1)/2, on m+1 <= |x| <= 2m.
double annulus_barrier_Q(int m, double W, double x);

/// Q(a) - (Q(b+a) - Q(b)) for Q(u) = -u (log u)^{2+eps}; positive means the inequality holds.
double subadditivity_gap(double eps, double a, double b);

}  // namespace rdlab
