#include "rdlab/ode.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "rdlab/errors.hpp"

namespace rdlab {

const char* to_string(OdeMethod m) {
    return m == OdeMethod::AdaptiveIVP ? "AdaptiveIVP" : "IntegralInversion";
}

namespace {

struct Dp45Step {
    double y = 0;
    double err = 0;
    double k7 = 0;  // F at the new point (first-same-as-last)
};

Dp45Step dp45_step(const std::function<double(double, double)>& F, double x, double y, double k1,
                   double h) {
    const double k2 = F(x + h / 5, y + h * (k1 / 5));
    const double k3 = F(x + 3 * h / 10, y + h * (3 * k1 / 40 + 9 * k2 / 40));
    const double k4 = F(x + 4 * h / 5, y + h * (44 * k1 / 45 - 56 * k2 / 15 + 32 * k3 / 9));
    const double k5 = F(x + 8 * h / 9, y + h * (19372 * k1 / 6561 - 25360 * k2 / 2187 +
                                                 64448 * k3 / 6561 - 212 * k4 / 729));
    const double k6 = F(x + h, y + h * (9017 * k1 / 3168 - 355 * k2 / 33 + 46732 * k3 / 5247 +
                                        49 * k4 / 176 - 5103 * k5 / 18656));
    Dp45Step s;
    s.y = y + h * (35 * k1 / 384 + 500 * k3 / 1113 + 125 * k4 / 192 - 2187 * k5 / 6784 +
                   11 * k6 / 84);
    s.k7 = F(x + h, s.y);
    s.err = h * (71 * k1 / 57600 - 71 * k3 / 16695 + 71 * k4 / 1920 - 17253 * k5 / 339200 +
                 22 * k6 / 525 - s.k7 / 40);
    return s;
}

}  // namespace

ScalarPath integrate_dp45(const std::function<double(double, double)>& F, double x0, double y0,
                          const std::vector<double>& outputs, const Dp45Options& opts,
                          const std::function<bool(double, double)>& halt) {
    ScalarPath path;
    double x = x0, y = y0;
    double k1 = F(x, y);
    std::size_t next = 0;
    while (next < outputs.size() && outputs[next] == x) {
        path.x.push_back(x);
        path.y.push_back(y);
        ++next;
    }
    if (next == outputs.size()) return path;
    const double dir = outputs.back() >= x0 ? 1.0 : -1.0;
    double h = opts.h0;
    if (h <= 0) {
        double scale = opts.atol + opts.rtol * std::abs(y);
        double d = std::abs(k1);
        h = d > 0 ? 0.01 * std::pow(scale / d, 0.2) * std::max(1.0, std::abs(y) / d) : 1e-3;
        h = std::min(h, std::abs(outputs.back() - x0));
        if (!(h > 0)) h = 1e-6;
    }
    while (next < outputs.size()) {
        if (path.steps + path.rejected > opts.max_steps)
            throw ConvergenceError("integrate_dp45: step budget exhausted at x = " +
                                   std::to_string(x));
        double target = outputs[next];
        double hs = std::min(h, std::abs(target - x));
        bool clipped = hs < h;
        Dp45Step st = dp45_step(F, x, y, k1, dir * hs);
        double scale = opts.atol + opts.rtol * std::max(std::abs(y), std::abs(st.y));
        double err = std::abs(st.err) / scale;
        if (!std::isfinite(st.y) || !std::isfinite(err)) err = std::numeric_limits<double>::infinity();
        if (opts.keep_nonnegative && st.y < 0) err = std::max(err, 2.0);
        if (err > 1.0) {
            ++path.rejected;
            double fac = std::isfinite(err) ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.1;
            h = hs * fac;
            if (h < 1e-15 * std::max(1.0, std::abs(x))) {
                if (std::abs(y) > opts.overflow_guard * 1e-10 || !std::isfinite(st.y))
                    throw BlowUpError("solution leaves the double range near x = " +
                                      std::to_string(x));
                throw ConvergenceError("integrate_dp45: step size underflow at x = " +
                                       std::to_string(x));
            }
            continue;
        }
        double x_prev = x, y_prev = y;
        x = (hs == std::abs(target - x)) ? target : x + dir * hs;
        y = st.y;
        k1 = st.k7;
        ++path.steps;
        if (std::abs(y) > opts.overflow_guard)
            throw BlowUpError("solution exceeds " + std::to_string(opts.overflow_guard) +
                              " at x = " + std::to_string(x));
        double fac = err > 0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
        if (!clipped) h = hs * fac;
        else h = std::max(h, hs * fac);
        while (next < outputs.size() && x == outputs[next]) {
            path.x.push_back(x);
            path.y.push_back(y);
            ++next;
        }
        if (halt && halt(x, y)) {
            path.halted = true;
            path.halt_x0 = x_prev;
            path.halt_y0 = y_prev;
            path.halt_x1 = x;
            path.halt_y1 = y;
            return path;
        }
    }
    return path;
}

OdeSolution solve_ivp_from(const RateFunction& G, double t0, double v0,
                           const std::vector<double>& t_grid, double tol) {
    if (!(tol > 0)) throw DomainError("solve_ivp needs tol > 0");
    if (!std::isfinite(v0) || v0 < 0) throw DomainError("solve_ivp needs a finite c >= 0");
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (t_grid[i] < t0 || (i > 0 && t_grid[i] < t_grid[i - 1]))
            throw DomainError("solve_ivp: t_grid must be increasing and start at or after t0");
    Dp45Options o;
    o.rtol = 1e-2 * tol;
    o.atol = 1e-2 * tol;
    o.keep_nonnegative = G(0.0) == 0.0;
    auto F = [&G](double, double v) { return G(v); };
    ScalarPath p = integrate_dp45(F, t0, v0, t_grid, o);
    OdeSolution sol;
    sol.G_id = G.id();
    sol.c = v0;
    sol.tol = tol;
    sol.t_grid = p.x;
    sol.values = p.y;
    sol.steps = p.steps;
    return sol;
}

OdeSolution solve_ivp(const RateFunction& G, double c, double t_end, double tol,
                      std::vector<double> t_grid) {
    if (t_grid.empty()) t_grid = {0.0, t_end};
    return solve_ivp_from(G, 0.0, c, t_grid, tol);
}

void write_csv(const OdeSolution& sol, std::ostream& os) {
    os << "# G=" << sol.G_id << "\n# c=" << std::setprecision(17) << sol.c
       << "\n# method=" << to_string(sol.method) << "\n# tol=" << sol.tol << "\nt,v\n";
    for (std::size_t i = 0; i < sol.t_grid.size(); ++i)
        os << sol.t_grid[i] << "," << sol.values[i] << "\n";
}

}  // namespace rdlab
