#include "rdlab/iterlog.hpp"

#include <cmath>
#include <string>

#include "rdlab/errors.hpp"

namespace rdlab {

double iter_log(int m, double u) {
    if (m < 0) throw DomainError("iter_log: negative iterate count " + std::to_string(m));
    double v = u;
    for (int i = 0; i < m; ++i) {
        if (!(v > 0.0))
            throw DomainError("iter_log: log applied to non-positive value at level " +
                              std::to_string(i + 1));
        v = std::log(v);
    }
    return v;
}

double iter_log_product(int m, double u) {
    if (m < 0) throw DomainError("iter_log_product: negative iterate count");
    double prod = 1.0;
    double v = u;
    for (int i = 0; i < m; ++i) {
        if (!(v > 0.0))
            throw DomainError("iter_log_product: log applied to non-positive value at level " +
                              std::to_string(i + 1));
        v = std::log(v);
        prod *= v;
    }
    return prod;
}

double iter_log_from_log(int m, double log_u) {
    if (m < 1) throw DomainError("iter_log_from_log: needs m >= 1");
    return iter_log(m - 1, log_u);
}

double iter_log_product_from_log(int m, double log_u) {
    if (m == 0) return 1.0;
    return log_u * iter_log_product(m - 1, log_u);
}

double iter_exp(int m, double x) {
    if (m < 0) throw DomainError("iter_exp: negative iterate count");
    double v = x;
    for (int i = 0; i < m; ++i) {
        v = std::exp(v);
        if (!std::isfinite(v))
            throw OverflowError("iter_exp: exp^(" + std::to_string(i + 1) + ") of " +
                                std::to_string(x) + " exceeds the double range");
    }
    return v;
}

double log_iter_exp(int m, double x) {
    if (m < 1) throw DomainError("log_iter_exp: needs m >= 1");
    return iter_exp(m - 1, x);
}

double iter_log_domain_floor(int m) { return iter_exp(m, 0.0); }

}  // namespace rdlab
