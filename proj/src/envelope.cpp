#include "rdlab/envelope.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <vector>

#include "rdlab/errors.hpp"
#include "rdlab/numeric.hpp"

namespace rdlab {

const char* to_string(EnvelopeMethod m) {
    return m == EnvelopeMethod::ClosedForm ? "ClosedForm" : "GridSup";
}

const char* to_string(ShiftMethod m) {
    return m == ShiftMethod::ConcaveShortcut ? "ConcaveShortcut" : "GridSup";
}

namespace {

// sup over the grid, refined by golden section between the neighbours of the best node
template <class F>
double grid_sup(const std::vector<double>& xs, F&& g) {
    std::size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = g(xs[i]);
        if (v > best_v || (std::isnan(best_v))) {
            best_v = v;
            best = i;
        }
    }
    if (!std::isfinite(best_v) || xs.size() < 3) return best_v;
    double a = xs[best > 0 ? best - 1 : 0];
    double b = xs[std::min(best + 1, xs.size() - 1)];
    auto [arg, val] = golden_max(g, a, b);
    (void)arg;
    return std::max(best_v, val);
}

}  // namespace

Envelope envelope(const ReactionTerm& term, double R, int x_probe_count) {
    if (!(R > 0)) throw DomainError("envelope radius must be positive");
    if (x_probe_count < 3) throw DomainError("envelope needs at least 3 probe points");
    Envelope env;
    auto src = std::make_shared<const ReactionTerm>(term);
    env.source_ = src;
    env.radius_ = R;

    if (term.has_structure()) {
        auto vb = term.V().bounds(R);
        auto gb = term.gamma().bounds(R);
        bool one_constant = term.V().is_constant() || term.gamma().is_constant();
        if (vb && gb && one_constant) {
            double vhi = vb->hi;
            double glo = gb->lo;
            if (std::isinf(vhi))
                throw UnboundedEnvelope("sup of V over |x| <= R is infinite, so F_R(u) = +inf");
            if (glo < 0) throw DomainError("gamma must be positive");
            env.method_ = EnvelopeMethod::ClosedForm;
            env.x_extent_ = R;
            env.value_ = [src, vhi, glo](double u) {
                double h = src->absorption().value(u);
                return vhi * u - (glo == 0.0 ? 0.0 : glo * h);
            };
            env.rate_log_ = [src, vhi, glo](double s) {
                return vhi - (glo == 0.0 ? 0.0 : glo * src->absorption().rate_log(s));
            };
            return env;
        }
    }

    double X = R;
    if (std::isinf(R)) {
        // grow the window until the sup at u = 1 settles
        double prev = 0.0, prev_inc = std::numeric_limits<double>::infinity();
        int growing = 0;
        for (int k = 0; k < 4; ++k) {
            double w = 10.0 * std::pow(2.0, k);
            auto xs = linspace(-w, w, x_probe_count);
            double s = grid_sup(xs, [&](double x) { return (*src)(x, 1.0); });
            if (!std::isfinite(s)) throw UnboundedEnvelope("grid sup of f(x,1) is not finite");
            if (k > 0) {
                double inc = s - prev;
                if (inc > 1e-9 * (1.0 + std::abs(s)) && inc >= 0.5 * prev_inc) ++growing;
                prev_inc = inc;
            }
            prev = s;
            X = w;
        }
        if (growing >= 2)
            throw UnboundedEnvelope("sup_x f(x,1) keeps growing with the x window (F(1) = +inf)");
    }
    auto xs = std::make_shared<const std::vector<double>>(linspace(-X, X, x_probe_count));
    env.method_ = EnvelopeMethod::GridSup;
    env.x_extent_ = X;
    env.value_ = [src, xs](double u) { return grid_sup(*xs, [&](double x) { return (*src)(x, u); }); };
    env.rate_log_ = [src, xs](double s) {
        return grid_sup(*xs, [&](double x) { return src->rate_log(x, s); });
    };
    return env;
}

bool numerically_concave(const ReactionTerm& term, double x_extent, double tol) {
    auto xs = linspace(-x_extent, x_extent, 41);
    auto us = logspace(-3.0, 6.0, 61);
    for (double x : xs) {
        for (double u : us) {
            double h = 1e-3 * u;
            double fm = term(x, u - h), f0 = term(x, u), fp = term(x, u + h);
            double scale = std::abs(fm) + 2 * std::abs(f0) + std::abs(fp);
            if (fp - 2 * f0 + fm > 64 * DBL_EPSILON * scale + tol) return false;
        }
    }
    return true;
}

ShiftEnvelopes shift_envelopes(const ReactionTerm& term, bool concave_hint,
                               const ShiftOptions& opts) {
    ShiftEnvelopes out;
    out.truncation = opts;
    if (concave_hint) {
        if (!numerically_concave(term, opts.x_extent))
            throw ConcavityMismatch("term '" + term.id() +
                                    "' was hinted concave but a second difference is positive");
        out.method = ShiftMethod::ConcaveShortcut;
        std::function<double(double)> F;
        if (term.vanishes_at_zero()) {
            Envelope env = envelope(term, kInfiniteRadius);
            F = env.as_function();
        } else {
            auto shifted = ReactionTerm::custom(
                [term](double x, double u) { return term(x, u) - term(x, 0.0); }, term.id() + "-f0");
            Envelope env = envelope(shifted, kInfiniteRadius);
            F = env.as_function();
        }
        out.G = F;
        out.H = F;
        return out;
    }
    // With w = v - u the G supremum runs over the same set as the H supremum, so one
    // search serves both.
    out.method = ShiftMethod::GridSup;
    auto xs = std::make_shared<const std::vector<double>>(
        linspace(-opts.x_extent, opts.x_extent, opts.x_points));
    std::vector<double> wv{0.0};
    for (double w : logspace(-6.0, std::log10(opts.v_max), opts.v_points - 1)) wv.push_back(w);
    auto ws = std::make_shared<const std::vector<double>>(std::move(wv));
    auto src = std::make_shared<const ReactionTerm>(term);
    auto sup = [src, xs, ws](double u) {
        auto diff = [&](double x, double w) { return (*src)(x, u + w) - (*src)(x, w); };
        double best = -std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < xs->size(); ++i)
            for (std::size_t j = 0; j < ws->size(); ++j) {
                double v = diff((*xs)[i], (*ws)[j]);
                if (v > best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        double x = (*xs)[bi], w = (*ws)[bj];
        for (int sweep = 0; sweep < 2; ++sweep) {
            double xa = (*xs)[bi > 0 ? bi - 1 : 0], xb = (*xs)[std::min(bi + 1, xs->size() - 1)];
            auto [xr, vx] = golden_max([&](double t) { return diff(t, w); }, xa, xb);
            if (vx > best) {
                best = vx;
                x = xr;
            }
            double wa = (*ws)[bj > 0 ? bj - 1 : 0], wb = (*ws)[std::min(bj + 1, ws->size() - 1)];
            auto [wr, vw] = golden_max([&](double t) { return diff(x, t); }, wa, wb);
            if (vw > best) {
                best = vw;
                w = wr;
            }
        }
        return best;
    };
    out.G = sup;
    out.H = sup;
    return out;
}

}  // namespace rdlab
