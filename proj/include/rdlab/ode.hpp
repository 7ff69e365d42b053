#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rdlab/rate.hpp"

namespace rdlab {

struct Dp45Options {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h0 = 0.0;      // 0: automatic
    long max_steps = 2'000'000;
    /// Reject steps that produce y < 0 (used when G(0) = 0 keeps solutions nonnegative).
    bool keep_nonnegative = false;
    double overflow_guard = 1e300;
};

struct ScalarPath {
    std::vector<double> x;   // requested outputs actually reached
    std::vector<double> y;
    long steps = 0;
    long rejected = 0;
    bool halted = false;     // halt predicate fired
    double halt_x0 = 0, halt_y0 = 0, halt_x1 = 0, halt_y1 = 0;  // the step that fired it
};

/// Dormand-Prince 4(5) for y' = F(x, y). Outputs must be monotone in the direction of
/// integration starting from x0; steps are clipped to land on them exactly. The optional
/// halt predicate is checked after every accepted step.
ScalarPath integrate_dp45(const std::function<double(double, double)>& F, double x0, double y0,
                          const std::vector<double>& outputs, const Dp45Options& opts,
                          const std::function<bool(double, double)>& halt = {});

enum class OdeMethod { AdaptiveIVP, IntegralInversion };
const char* to_string(OdeMethod m);

struct OdeSolution {
    std::string G_id;
    double c = 0.0;
    double tol = 0.0;
    OdeMethod method = OdeMethod::AdaptiveIVP;
    std::vector<double> t_grid;
    std::vector<double> values;
    long steps = 0;
};

/// v' = G(v), v(0) = c on t_grid (default {0, t_end}). Throws BlowUpError past the
/// overflow guard.
OdeSolution solve_ivp(const RateFunction& G, double c, double t_end, double tol,
                      std::vector<double> t_grid = {});

/// Same, started from v(t0) = v0; t_grid entries must be >= t0.
OdeSolution solve_ivp_from(const RateFunction& G, double t0, double v0,
                           const std::vector<double>& t_grid, double tol);

/// CSV with '#' metadata lines followed by "t,v" rows.
void write_csv(const OdeSolution& sol, std::ostream& os);

}  // namespace rdlab
