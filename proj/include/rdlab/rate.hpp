#pragma once

#include <functional>
#include <string>

#include "rdlab/envelope.hpp"

namespace rdlab {

/// Scalar right-hand side G(u) of v' = G(v), with an optional log-space view.
class RateFunction {
public:
    using Fn = std::function<double(double)>;

    RateFunction(Fn value, std::string id = "G", Fn log_neg_rate = {});

    double operator()(double u) const { return value_(u); }
    /// log(-G(e^s)/e^s), NaN where G(e^s) >= 0. Falls back to direct evaluation.
    double log_neg_rate(double s) const;
    bool has_log_form() const { return static_cast<bool>(log_neg_rate_); }
    const std::string& id() const { return id_; }
    const Fn& function() const { return value_; }

    /// -gamma u^p
    static RateFunction power_decay(double gamma, double p);
    /// -u (prod_{i<=m} log^{(i)} u)^2 (log^{(m+1)} u)^{2+eps}; zero where undefined.
    static RateFunction iter_log_model(int m, double eps);
    /// -u prod_{i<=m} log^{(i)} u; zero where undefined.
    static RateFunction iter_log_product(int m);
    /// -u sgn(log u) |log u|^q
    static RateFunction log_power(double q);
    /// -gamma u log(e+u)^q
    static RateFunction shifted_log_power(double q, double gamma = 1.0);
    /// F from an envelope, with the log form taken from its rate_log.
    static RateFunction from_envelope(const Envelope& env);

private:
    Fn value_;
    Fn log_neg_rate_;
    std::string id_;
};

}  // namespace rdlab
