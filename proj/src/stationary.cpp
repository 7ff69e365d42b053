#include "rdlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rdlab/errors.hpp"
#include "rdlab/iterlog.hpp"
#include "rdlab/numeric.hpp"

namespace rdlab {

const char* to_string(WitnessKind k) {
    switch (k) {
        case WitnessKind::Ex1DoubleExp: return "Ex1_DoubleExp";
        case WitnessKind::Ex2Quadratic: return "Ex2_Quadratic";
        case WitnessKind::Ex3Drifted: return "Ex3_Drifted";
    }
    return "?";
}

StationaryWitness::StationaryWitness(WitnessKind k, int level, double shift, double eps,
                                     Operator1D op, ReactionTerm term)
    : which_(k), level_(level), shift_(shift), eps_(eps), op_(std::move(op)),
      term_(std::move(term)) {}

StationaryWitness StationaryWitness::ex1(int level, double shift) {
    if (level < 1) throw DomainError("Ex1 witness needs level >= 1");
    auto term = ReactionTerm::table(TableEntry::DoubleExponential, level, Coefficient::constant(0.0),
                                    Coefficient::constant(1.0), "ex1_level" + std::to_string(level));
    return {WitnessKind::Ex1DoubleExp, level, shift, 0.0, Operator1D::laplacian(), std::move(term)};
}

StationaryWitness StationaryWitness::ex2(double eps) {
    if (!(eps > 0)) throw DomainError("Ex2 witness needs eps > 0");
    Operator1D op(Coefficient::weight(1.0, 1.0 + eps), Coefficient::constant(0.0), std::nullopt,
                  "ex2_operator");
    auto term = ReactionTerm::linear_minus_power(Coefficient::constant(0.0), Coefficient::constant(2.0),
                                                 1.0 + eps, "ex2_term");
    return {WitnessKind::Ex2Quadratic, 0, 0.0, eps, std::move(op), std::move(term)};
}

StationaryWitness StationaryWitness::ex3(double eps) {
    if (!(eps > 0)) throw DomainError("Ex3 witness needs eps > 0");
    Operator1D op(Coefficient::constant(1.0), Coefficient::signed_weight(1.0, 0.5 + eps),
                  std::nullopt, "ex3_operator");
    auto term = ReactionTerm::table(TableEntry::SqrtDrift, eps, Coefficient::constant(0.0),
                                    Coefficient::constant(1.0), "ex3_term");
    return {WitnessKind::Ex3Drifted, 0, 0.0, eps, std::move(op), std::move(term)};
}

std::string StationaryWitness::id() const {
    std::string s = to_string(which_);
    if (which_ == WitnessKind::Ex1DoubleExp)
        return s + "(level=" + std::to_string(level_) + ",shift=" + std::to_string(shift_) + ")";
    return s + "(eps=" + std::to_string(eps_) + ")";
}

namespace {

/// E_0 = y, E_k = exp(E_{k-1}) for k = 1..level; E_level = log W
std::vector<double> tower(int level, double y) {
    std::vector<double> E{y};
    for (int k = 1; k <= level; ++k) {
        E.push_back(std::exp(E.back()));
        if (!std::isfinite(E.back())) throw OverflowError("Ex1 witness outside the representable window");
    }
    return E;
}

}  // namespace

double StationaryWitness::log_W(double x) const {
    switch (which_) {
        case WitnessKind::Ex1DoubleExp: return tower(level_, x + shift_).back();
        case WitnessKind::Ex2Quadratic: return std::log1p(x * x);
        case WitnessKind::Ex3Drifted: return 2.0 * std::log(std::abs(x));
    }
    return 0.0;
}

double StationaryWitness::W(double x) const {
    double v = std::exp(log_W(x));
    if (!std::isfinite(v)) throw OverflowError("W leaves the double range");
    return v;
}

double StationaryWitness::dW_over_W(double x) const {
    switch (which_) {
        case WitnessKind::Ex1DoubleExp: {
            auto E = tower(level_, x + shift_);
            double P = 1.0;
            for (int k = 1; k <= level_; ++k) P *= E[k];
            return P;
        }
        case WitnessKind::Ex2Quadratic: return 2 * x / (1 + x * x);
        case WitnessKind::Ex3Drifted: return 2.0 / x;
    }
    return 0.0;
}

double StationaryWitness::d2W_over_W(double x) const {
    switch (which_) {
        case WitnessKind::Ex1DoubleExp: {
            // (log W)' = P = E_1 ... E_level, W''/W = P^2 + P'
            auto E = tower(level_, x + shift_);
            double P = 1.0, sum = 0.0, partial = 1.0;
            for (int k = 1; k <= level_; ++k) {
                P *= E[k];
                sum += partial;
                partial *= E[k];
            }
            return P * P + P * sum;
        }
        case WitnessKind::Ex2Quadratic: return 2 / (1 + x * x);
        case WitnessKind::Ex3Drifted: return 2.0 / (x * x);
    }
    return 0.0;
}

double StationaryWitness::default_lo() const {
    return which_ == WitnessKind::Ex1DoubleExp ? -3.0 : -10.0;
}

double StationaryWitness::default_hi() const {
    if (which_ != WitnessKind::Ex1DoubleExp) return 10.0;
    // keep log W = exp^{(level)}(x+shift) below 1e300
    double cap = 690.0;
    for (int k = 1; k < level_; ++k) cap = std::log(cap);
    return std::min(3.0, cap - shift_);
}

StationaryReport residual_stationary(const StationaryWitness& w, double lo, double hi, int n,
                                     double collar) {
    if (!(hi > lo) || n < 2) throw DomainError("residual_stationary needs lo < hi and n >= 2");
    StationaryReport rep;
    rep.witness = w.id();
    rep.lo = lo;
    rep.hi = hi;
    rep.n = n;
    rep.collar = collar;
    rep.max_residual = 0.0;
    rep.worst_x = lo;
    for (double x : linspace(lo, hi, n)) {
        if (std::abs(x) < collar) continue;
        double lw = w.log_W(x);
        double LWW = w.op().a(x) * w.d2W_over_W(x) + w.op().b(x) * w.dW_over_W(x);
        double fW = w.term().rate_log(x, lw);
        double scale = std::max(std::exp(-lw), std::abs(LWW));
        double r = std::abs(LWW + fW) / scale;
        if (!(r <= rep.max_residual)) {
            rep.max_residual = r;
            rep.worst_x = x;
        }
    }
    return rep;
}

StationaryReport residual_stationary(const StationaryWitness& w, int n) {
    return residual_stationary(w, w.default_lo(), w.default_hi(), n, w.default_collar());
}

}  // namespace rdlab
