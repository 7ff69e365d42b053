#pragma once

#include <string>

#include "rdlab/operator1d.hpp"
#include "rdlab/reaction.hpp"

namespace rdlab {

enum class WitnessKind { Ex1DoubleExp, Ex2Quadratic, Ex3Drifted };

const char* to_string(WitnessKind k);

/// Closed-form stationary solution W of L W + f(x, W) = 0 together with its L and f.
class StationaryWitness {
public:
    /// W = exp^{(level+1)}(x + shift), L = d^2/dx^2
    static StationaryWitness ex1(int level, double shift = 0.0);
    /// W = 1 + x^2, L = (1+x^2)^{1+eps} d^2/dx^2, f = -2 u^{1+eps}
    static StationaryWitness ex2(double eps);
    /// W = x^2, L = d^2/dx^2 + (1+x^2)^{1/2+eps} sgn(x) d/dx, f = -2 - 2 (1+u)^{1/2+eps} u^{1/2}
    static StationaryWitness ex3(double eps);

    WitnessKind which() const { return which_; }
    int level() const { return level_; }
    double shift() const { return shift_; }
    double eps() const { return eps_; }
    const Operator1D& op() const { return op_; }
    const ReactionTerm& term() const { return term_; }
    std::string id() const;

    double log_W(double x) const;
    double W(double x) const;
    double dW_over_W(double x) const;
    double d2W_over_W(double x) const;

    /// documented residual window and collar around x = 0
    double default_lo() const;
    double default_hi() const;
    double default_collar() const { return which_ == WitnessKind::Ex3Drifted ? 1e-6 : 0.0; }

private:
    StationaryWitness(WitnessKind k, int level, double shift, double eps, Operator1D op,
                      ReactionTerm term);

    WitnessKind which_;
    int level_ = 0;
    double shift_ = 0.0;
    double eps_ = 0.0;
    Operator1D op_;
    ReactionTerm term_;
};

struct StationaryReport {
    std::string witness;
    double lo = 0, hi = 0, collar = 0;
    int n = 0;
    double max_residual = 0;
    double worst_x = 0;
};

/// max over the grid of |L W + f(x, W)| / max(1, |L W|), evaluated as
/// |LW/W + f/W| / max(1/W, |LW/W|) so double exponentials stay representable.
StationaryReport residual_stationary(const StationaryWitness& w, double lo, double hi, int n = 2001,
                                     double collar = 0.0);
StationaryReport residual_stationary(const StationaryWitness& w, int n = 2001);

}  // namespace rdlab
