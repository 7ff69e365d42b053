#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace rdlab {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

/// n points from 10^lo to 10^hi, equally spaced in the exponent.
inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out = linspace(lo, hi, n);
    for (double& v : out) v = std::pow(10.0, v);
    return out;
}

/// Golden-section search for a maximum of f on [a, b]; returns (argmax, max).
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters = 60) {
    const double r = 0.6180339887498949;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Bisection on a bracket with g(lo) and g(hi) of opposite sign.
template <class F>
double bisect(F&& g, double lo, double hi, int iters = 200) {
    double glo = g(lo);
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace rdlab
