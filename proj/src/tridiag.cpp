#include "rdlab/tridiag.hpp"

#include <cmath>

#include "rdlab/errors.hpp"

namespace rdlab {

std::vector<double> Tridiag::apply(const std::vector<double>& x) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i] * x[i - 1];
        if (i + 1 < n) s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::vector<double> solve_tridiag(const Tridiag& T, const std::vector<double>& rhs) {
    const std::size_t n = T.size();
    if (rhs.size() != n) throw DomainError("tridiagonal rhs has the wrong length");
    if (n == 0) return {};
    std::vector<double> c(n), d(n);
    double piv = T.diag[0];
    if (piv == 0.0 || !std::isfinite(piv)) throw StabilityError("zero pivot in tridiagonal solve");
    c[0] = T.upper[0] / piv;
    d[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = T.diag[i] - T.lower[i] * c[i - 1];
        if (piv == 0.0 || !std::isfinite(piv)) throw StabilityError("zero pivot in tridiagonal solve");
        c[i] = i + 1 < n ? T.upper[i] / piv : 0.0;
        d[i] = (rhs[i] - T.lower[i] * d[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

}  // namespace rdlab
