#pragma once

namespace rdlab {

/// m-th iterate of the natural logarithm; iter_log(0, u) == u.
/// Throws DomainError if some intermediate argument is not positive.
double iter_log(int m, double u);

/// prod_{i=1}^m log^{(i)} u, with the empty product equal to 1.
double iter_log_product(int m, double u);

/// Same quantities, starting from s = log u so that astronomically large u
/// (far beyond the double range) can be handled.
double iter_log_from_log(int m, double log_u);
double iter_log_product_from_log(int m, double log_u);

/// m-fold composition of exp; iter_exp(0, x) == x.
/// Throws OverflowError when the result leaves the double range.
double iter_exp(int m, double x);

/// log(exp^{(m)}(x)) == exp^{(m-1)}(x) for m >= 1. Overflows one level later.
double log_iter_exp(int m, double x);

/// Smallest u for which log^{(m)} u is defined and positive, i.e. exp^{(m)}(0).
double iter_log_domain_floor(int m);

}  // namespace rdlab
