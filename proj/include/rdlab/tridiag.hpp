#pragma once

#include <vector>

namespace rdlab {

/// Tridiagonal system: lower[i] u[i-1] + diag[i] u[i] + upper[i] u[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
struct Tridiag {
    std::vector<double> lower, diag, upper;

    explicit Tridiag(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const { return diag.size(); }
    /// y = T x
    std::vector<double> apply(const std::vector<double>& x) const;
};

/// Thomas algorithm without pivoting; throws StabilityError on a vanishing pivot.
std::vector<double> solve_tridiag(const Tridiag& T, const std::vector<double>& rhs);

}  // namespace rdlab
