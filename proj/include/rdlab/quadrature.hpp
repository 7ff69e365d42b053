#pragma once

#include <functional>

#include "rdlab/rate.hpp"

namespace rdlab {

struct OsgoodOptions {
    int level1_doublings = 40;
    int level2_doublings = 12;
    double level2_cap = 700.0;  // largest w = log log u visited
    double quad_tol = 1e-12;
};

/// Outcome of the improper-integral test for int_{u0}^inf du / (-G(u)).
struct OsgoodResult {
    bool convergent = false;
    double value = 0.0;   // integral value when convergent
    int level = 1;        // 1: decided in s = log u, 2: decided in w = log log u
    int segments = 0;
    double last_ratio = 0.0;
};

/// Throws SignError if G >= 0 at a probe >= u0 and InconclusiveError if no certificate fires.
OsgoodResult osgood_test(const RateFunction& G, double u0, const OsgoodOptions& opts = {});
OsgoodResult osgood_test(const std::function<double(double)>& G, double u0,
                         const OsgoodOptions& opts = {});
/// Same test with the lower limit given as s0 = log u0.
OsgoodResult osgood_test_log(const RateFunction& G, double s0, const OsgoodOptions& opts = {});

/// int_v^inf du / (-G(u)); NotOsgoodError when it diverges.
double tail_integral(const RateFunction& G, double v, const OsgoodOptions& opts = {});
double tail_integral_log(const RateFunction& G, double log_v, const OsgoodOptions& opts = {});

/// int_a^b du / (-G(u)) for u0 <= a < b, computed in s = log u with grading toward a.
double finite_integral(const RateFunction& G, double a, double b, double tol = 1e-12);

}  // namespace rdlab
