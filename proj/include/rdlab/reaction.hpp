#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "rdlab/coefficient.hpp"

namespace rdlab {

enum class TermKind { LinearMinusPower, LinearMinusIterLog, ExplicitTable, Custom };

/// Closed-form absorption profiles available to the ExplicitTable kind.
enum class TableEntry {
    None,
    Linear,              // h(u) = u
    ShiftedLogPower,     // h(u) = u log(e+u)^q
    DoubleExponential,   // h(u) = u S(u), exact stationary law for exp^{(level+1)}(x)
    SqrtDrift,           // h(u) = 2 + 2 (1+u)^{1/2+eps} u^{1/2}
    SqrtDriftRegularized // h(u) = 2 u (1+u)^eps
};

const char* to_string(TermKind k);
const char* to_string(TableEntry e);

/// Absorption profile h >= 0 on [0, inf). The reaction is f(x,u) = V(x) u - gamma(x) h(u).
struct Absorption {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    /// h(e^s) / e^s as a function of s = log u; may return +inf.
    std::function<double(double)> rate_log;
    bool convex = false;
    bool zero_at_origin = true;
    bool lipschitz = true;
    /// Below this point the profile is a documented extension, not the natural formula.
    double splice = 0.0;
};

/// Reaction term f(x,u). Immutable after construction; cheap to copy.
class ReactionTerm {
public:
    using Fn = std::function<double(double, double)>;

    static ReactionTerm linear_minus_power(Coefficient V, Coefficient gamma, double p,
                                           std::string id = "power");
    static ReactionTerm linear_minus_iter_log(Coefficient V, Coefficient gamma, int m, double eps,
                                              std::string id = "iterlog");
    static ReactionTerm table(TableEntry entry, double param, Coefficient V, Coefficient gamma,
                              std::string id = "table");
    static ReactionTerm custom(Fn f, std::string id = "custom", bool zero_at_origin = true,
                               Fn du = {});

    /// -u log(e+u)^q
    static ReactionTerm shifted_log_power(double q, std::string id = "shifted_log");
    /// -gamma u^p
    static ReactionTerm pure_power(double gamma, double p, std::string id = "pure_power");
    /// -u
    static ReactionTerm linear_decay(std::string id = "linear");
    static ReactionTerm zero(std::string id = "zero");

    double operator()(double x, double u) const;
    double du(double x, double u) const;
    /// f(x,u)/u evaluated from s = log u; valid far beyond the double range of u.
    double rate_log(double x, double log_u) const;

    TermKind kind() const { return kind_; }
    TableEntry entry() const { return entry_; }
    const std::string& id() const { return id_; }
    const Coefficient& V() const { return V_; }
    const Coefficient& gamma() const { return gamma_; }
    double power_p() const { return power_p_; }
    int iter_m() const { return iter_m_; }
    double eps() const { return eps_; }
    double table_param() const { return table_param_; }
    bool has_structure() const { return kind_ != TermKind::Custom; }
    bool concave_in_u() const;
    bool vanishes_at_zero() const;
    bool lipschitz() const;
    const Absorption& absorption() const { return *absorption_; }
    std::string describe() const;

private:
    ReactionTerm() = default;

    TermKind kind_ = TermKind::Custom;
    TableEntry entry_ = TableEntry::None;
    std::string id_;
    Coefficient V_ = Coefficient::constant(0.0);
    Coefficient gamma_ = Coefficient::constant(1.0);
    double power_p_ = 0.0;
    int iter_m_ = 0;
    double eps_ = 0.0;
    double table_param_ = 0.0;
    std::shared_ptr<const Absorption> absorption_;
    Fn custom_;
    Fn custom_du_;
    bool custom_zero_ = true;
};

/// Builds a term from a key-value block:
///   kind = power | iterlog | table
///   V = <coefficient>, gamma = <coefficient>
///   p = <real>              (power)
///   m = <int>, eps = <real> (iterlog)
///   entry = linear | shifted_log | double_exp | sqrt_drift | sqrt_drift_reg, param = <real>
ReactionTerm parse_term(const std::map<std::string, std::string>& block, const std::string& id);

/// Largest finite-difference slope |f(x,u+h)-f(x,u)|/h over the probe box.
double lipschitz_probe(const ReactionTerm& term, double x_extent, double u_max, int n = 64);

}  // namespace rdlab
