#include "rdlab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "rdlab/errors.hpp"

namespace rdlab {

namespace {

using boost::math::quadrature::gauss_kronrod;

template <class F>
double gk(F&& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    // Boost compares an unscaled error against a scaled tolerance, so very short
    // intervals would always recurse to max depth; integrate over [0, 1] instead.
    const double w = b - a;
    auto g = [&](double tau) { return f(a + w * tau); };
    return w * gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, 12, tol);
}

void sign_check(const RateFunction& G, double s0) {
    for (int k = 0; k <= 60; ++k) {
        double s = s0 + (std::ldexp(1.0, k) - 1.0) * 0.01;
        if (!G.has_log_form() && s > 700.0) break;
        double r = G.log_neg_rate(s);
        if (std::isnan(r))
            throw SignError("G(u) >= 0 at u = exp(" + std::to_string(s) + ") above u0");
    }
}

// integral over [a, b] in s, graded geometrically toward a
double graded(const RateFunction& G, double a, double b, double tol) {
    auto f = [&G](double s) { return std::exp(-G.log_neg_rate(s)); };
    double total = 0.0;
    double hi = b;
    for (int j = 1; j <= 40; ++j) {
        double lo = a + (b - a) * std::ldexp(1.0, -j);
        total += gk(f, lo, hi, tol);
        hi = lo;
    }
    return total + gk(f, a, hi, tol);
}

enum class Outcome { Convergent, Divergent, Undecided };

struct LevelResult {
    Outcome outcome = Outcome::Undecided;
    double sum = 0.0;
    double end = 0.0;
    int segments = 0;
    double last_ratio = 0.0;
};

// windows [start + (2^j - 1) h, start + (2^{j+1} - 1) h]; h = start gives geometric windows
template <class F>
LevelResult run_level(F&& f, double start, double h, int budget, double cap, double tol) {
    LevelResult out;
    double prev = std::numeric_limits<double>::quiet_NaN();
    int conv = 0, div = 0;
    bool certified = false;
    double remainder = 0.0;
    out.end = start;
    for (int j = 0; j < budget; ++j) {
        double a = start + (std::ldexp(1.0, j) - 1.0) * h;
        double b = start + (std::ldexp(1.0, j + 1) - 1.0) * h;
        bool last = false;
        if (b >= cap) {
            b = cap;
            last = true;
        }
        if (!(b > a)) break;
        double I = gk(f, a, b, tol);
        out.end = b;
        ++out.segments;
        if (std::isnan(I)) break;
        if (std::isinf(I)) {
            out.outcome = Outcome::Divergent;
            return out;
        }
        out.sum += I;
        if (j > 0) {
            if (I == 0.0) {
                certified = true;
                remainder = 0.0;
                out.last_ratio = 0.0;
                break;
            }
            double rho = I / prev;
            out.last_ratio = rho;
            conv = rho < 0.5 ? conv + 1 : 0;
            div = rho >= 1.0 - 1e-7 ? div + 1 : 0;
            if (div >= 3 && !certified) {
                out.outcome = Outcome::Divergent;
                return out;
            }
            if (conv >= 3) certified = true;
            if (certified) {
                remainder = rho < 1.0 ? I * rho / (1.0 - rho) : 0.0;
                if (std::abs(remainder) <= 1e-15 * std::abs(out.sum)) break;
            }
        }
        prev = I;
        if (last) break;
    }
    if (certified) {
        out.outcome = Outcome::Convergent;
        out.sum += remainder;
    }
    return out;
}

}  // namespace

double finite_integral(const RateFunction& G, double a, double b, double tol) {
    if (!(a > 0) || !(b > a)) return 0.0;
    return graded(G, std::log(a), std::log(b), tol);
}

OsgoodResult osgood_test(const RateFunction& G, double u0, const OsgoodOptions& opts) {
    if (!(u0 > 0)) throw DomainError("osgood_test needs u0 > 0");
    return osgood_test_log(G, std::log(u0), opts);
}

OsgoodResult osgood_test_log(const RateFunction& G, double s0, const OsgoodOptions& opts) {
    sign_check(G, s0);

    OsgoodResult res;
    const double sa = std::max(s0 + 1.0, 1.0);
    double head = graded(G, s0, sa, opts.quad_tol);

    auto f1 = [&G](double s) { return std::exp(-G.log_neg_rate(s)); };
    LevelResult l1 = run_level(f1, sa, sa, opts.level1_doublings,
                               std::numeric_limits<double>::infinity(), opts.quad_tol);
    res.segments = l1.segments;
    res.last_ratio = l1.last_ratio;
    if (l1.outcome == Outcome::Convergent) {
        res.convergent = true;
        res.value = head + l1.sum;
        return res;
    }
    if (l1.outcome == Outcome::Divergent) return res;

    auto f2 = [&G](double w) { return std::exp(w - G.log_neg_rate(std::exp(w))); };
    const double wb = std::log(l1.end);
    LevelResult l2 = run_level(f2, wb, 1.0, opts.level2_doublings, opts.level2_cap, opts.quad_tol);
    res.level = 2;
    res.segments += l2.segments;
    res.last_ratio = l2.last_ratio;
    if (l2.outcome == Outcome::Convergent) {
        res.convergent = true;
        res.value = head + l1.sum + l2.sum;
        return res;
    }
    if (l2.outcome == Outcome::Divergent) return res;
    throw InconclusiveError("no convergence or divergence certificate after " +
                            std::to_string(res.segments) + " doublings (last ratio " +
                            std::to_string(res.last_ratio) + ")");
}

OsgoodResult osgood_test(const std::function<double(double)>& G, double u0,
                         const OsgoodOptions& opts) {
    return osgood_test(RateFunction(G), u0, opts);
}

double tail_integral(const RateFunction& G, double v, const OsgoodOptions& opts) {
    if (!(v > 0)) throw DomainError("tail_integral needs v > 0");
    return tail_integral_log(G, std::log(v), opts);
}

double tail_integral_log(const RateFunction& G, double log_v, const OsgoodOptions& opts) {
    OsgoodResult r = osgood_test_log(G, log_v, opts);
    if (!r.convergent)
        throw NotOsgoodError("int^inf du/(-G) diverges for G = " + G.id());
    return r.value;
}

}  // namespace rdlab
