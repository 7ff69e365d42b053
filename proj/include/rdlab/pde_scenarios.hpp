#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdlab/barriers.hpp"
#include "rdlab/pde.hpp"

namespace rdlab {

struct CollapseOptions {
    double X = 1.0;
    double x_probe = 0.0;
    double t_probe = 0.1;
    SolverOptions solver{0.01, 1e-3, 1e-8};
};

/// u(x_probe, t_probe) for g = A with Dirichlet data A on [-X, X], one entry per A.
struct CollapseReport {
    std::vector<double> A, values;
    std::vector<double> diffs;   // values[j+1] - values[j]
    std::vector<double> shrink;  // diffs[j] / diffs[j+1]
    std::vector<double> growth;  // values[j+1] / values[j]
};

CollapseReport universal_collapse(const ReactionTerm& term, const Operator1D& op,
                                  const std::vector<double>& As, const CollapseOptions& opts = {});

/// M_R(x, t) of the certified Thm1 barrier with the K found on the given grid.
struct BarrierBound {
    double K = 0.0;
    double log_M = 0.0;
    double M = 0.0;
    ResidualReport report;
};

BarrierBound thm1_barrier_bound(const ReactionTerm& term, const Operator1D& op, double R, double l,
                                double eps, double x, double t, const ResidualGrid& grid = {});

/// v_inf(T) for the comparison equation v' = G(v): the concave shortcut F when the term is
/// concave in u, else the grid-sup G of the shift envelopes.
double witness_upper_oracle(const ReactionTerm& term, double T);

struct ComparisonOptions {
    double X = 2.0;
    double T = 0.5;
    double amplitude = 5.0;
    SolverOptions solver{0.05, 1e-2, 1e-5};
};

struct ComparisonReport {
    std::string term_id;
    int triples = 0;
    int violations = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
};

/// Random triples of ordered initial data, boundary data and forcings; counts order
/// violations beyond 10 (dx^2 + dt) over every output frame.
ComparisonReport comparison_suite(const ReactionTerm& term, const Operator1D& op, int triples,
                                  std::uint64_t seed, const ComparisonOptions& opts = {});

/// Locally Lipschitz terms used by the property suites.
std::vector<ReactionTerm> evolvable_catalog();

}  // namespace rdlab
