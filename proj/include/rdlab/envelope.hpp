#pragma once

#include <functional>
#include <limits>
#include <memory>

#include "rdlab/reaction.hpp"

namespace rdlab {

enum class EnvelopeMethod { ClosedForm, GridSup };
enum class ShiftMethod { ConcaveShortcut, GridSup };

const char* to_string(EnvelopeMethod m);
const char* to_string(ShiftMethod m);

constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

/// F_R(u) = sup_{|x|<=R} f(x,u); R = inf gives F.
class Envelope {
public:
    double operator()(double u) const { return value_(u); }
    /// F_R(e^s)/e^s, usable far past the double range of u.
    double rate_log(double s) const { return rate_log_(s); }
    double radius() const { return radius_; }
    EnvelopeMethod method() const { return method_; }
    /// Half-width of the x window actually searched (R, or the truncation for R = inf).
    double x_extent() const { return x_extent_; }
    const ReactionTerm& source() const { return *source_; }
    std::function<double(double)> as_function() const { return value_; }

private:
    friend Envelope envelope(const ReactionTerm&, double, int);
    Envelope() = default;

    std::shared_ptr<const ReactionTerm> source_;
    std::function<double(double)> value_;
    std::function<double(double)> rate_log_;
    double radius_ = 0.0;
    double x_extent_ = 0.0;
    EnvelopeMethod method_ = EnvelopeMethod::GridSup;
};

/// Closed form when the term has structure and one of V, gamma is constant with the
/// other carrying interval bounds; grid sup (plus golden refinement) otherwise.
/// For R = inf the grid is grown over windows 10, 20, 40, 80 and UnboundedEnvelope
/// is raised if the sup at u = 1 keeps growing.
Envelope envelope(const ReactionTerm& term, double R, int x_probe_count = 2001);

struct ShiftOptions {
    double x_extent = 20.0;
    int x_points = 257;
    double v_max = 1e6;
    int v_points = 129;
};

/// G(u) = sup_x sup_{v>=u} (f(x,v) - f(x,v-u)) and H(u) = sup_x sup_{v>=0} (f(x,u+v) - f(x,v)).
struct ShiftEnvelopes {
    std::function<double(double)> G;
    std::function<double(double)> H;
    ShiftMethod method = ShiftMethod::GridSup;
    ShiftOptions truncation;
};

/// Second differences of f in u on a probe box are <= tol.
bool numerically_concave(const ReactionTerm& term, double x_extent, double tol = 1e-9);

ShiftEnvelopes shift_envelopes(const ReactionTerm& term, bool concave_hint,
                               const ShiftOptions& opts = {});

}  // namespace rdlab
