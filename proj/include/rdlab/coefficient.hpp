#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace rdlab {

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

/// A real coefficient function of x, optionally carrying closed-form bounds
/// over centred balls |x| <= R (R may be +inf).
class Coefficient {
public:
    using Fn = std::function<double(double)>;
    using BoundsFn = std::function<std::optional<Interval>(double radius)>;

    Coefficient() = default;
    Coefficient(Fn fn, std::string spec, BoundsFn bounds, bool constant)
        : fn_(std::move(fn)), spec_(std::move(spec)), bounds_(std::move(bounds)),
          constant_(constant) {}

    double operator()(double x) const { return fn_(x); }
    const std::string& spec() const { return spec_; }
    bool is_constant() const { return constant_; }
    std::optional<Interval> bounds(double radius) const;

    static Coefficient constant(double c);
    /// a + b sin(x)
    static Coefficient sine(double a, double b);
    /// c (1 + x^2)^q with c > 0, q >= 0
    static Coefficient weight(double c, double q);
    /// c (1 + x^2)^q sgn(x)
    static Coefficient signed_weight(double c, double q);
    /// arbitrary function, no bounds known
    static Coefficient custom(Fn fn, std::string spec = "custom");

private:
    Fn fn_ = [](double) { return 0.0; };
    std::string spec_ = "0";
    BoundsFn bounds_;
    bool constant_ = true;
};

/// Parses "2.5", "const(2.5)", "sin(a,b)", "weight(c,q)", "sweight(c,q)".
/// Throws ConfigError on anything else.
Coefficient parse_coefficient(std::string_view text);

}  // namespace rdlab
