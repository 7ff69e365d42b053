#include "rdlab/rate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rdlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double log1p_exp(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

// sum_{i<=m} 2 log L_i + (2+eps) log L_{m+1} with L_1 = s; NaN if some L_i <= 0
double iterlog_log_rate(int m, double eps, double s) {
    double acc = 0.0;
    double L = s;
    for (int i = 1; i <= m + 1; ++i) {
        if (!(L > 0)) return kNaN;
        acc += (i <= m ? 2.0 : 2.0 + eps) * std::log(L);
        L = std::log(L);
    }
    return acc;
}

}  // namespace

RateFunction::RateFunction(Fn value, std::string id, Fn log_neg_rate)
    : value_(std::move(value)), log_neg_rate_(std::move(log_neg_rate)), id_(std::move(id)) {}

double RateFunction::log_neg_rate(double s) const {
    if (log_neg_rate_) return log_neg_rate_(s);
    if (s > 709.0) return kNaN;
    double u = std::exp(s);
    double g = value_(u);
    if (!(g < 0)) return kNaN;
    return std::log(-g) - s;
}

RateFunction RateFunction::power_decay(double gamma, double p) {
    return RateFunction([gamma, p](double u) { return -gamma * std::pow(std::max(u, 0.0), p); },
                        "-" + num(gamma) + "u^" + num(p),
                        [gamma, p](double s) { return std::log(gamma) + (p - 1.0) * s; });
}

RateFunction RateFunction::iter_log_model(int m, double eps) {
    auto value = [m, eps](double u) {
        if (!(u > 0)) return 0.0;
        double lr = iterlog_log_rate(m, eps, std::log(u));
        if (std::isnan(lr)) return 0.0;
        return -u * std::exp(lr);
    };
    return RateFunction(value, "iterlog_model(m=" + std::to_string(m) + ",eps=" + num(eps) + ")",
                        [m, eps](double s) { return iterlog_log_rate(m, eps, s); });
}

RateFunction RateFunction::iter_log_product(int m) {
    auto log_rate = [m](double s) {
        double acc = 0.0;
        double L = s;
        for (int i = 1; i <= m; ++i) {
            if (!(L > 0)) return kNaN;
            acc += std::log(L);
            L = std::log(L);
        }
        return acc;
    };
    auto value = [m](double u) {
        if (!(u > 0)) return 0.0;
        double prod = 1.0;
        double L = u;
        for (int i = 1; i <= m; ++i) {
            if (!(L > 0)) return 0.0;
            L = std::log(L);
            prod *= L;
        }
        return -u * prod;
    };
    return RateFunction(value, "iterlog_product(m=" + std::to_string(m) + ")", log_rate);
}

RateFunction RateFunction::log_power(double q) {
    auto value = [q](double u) {
        if (!(u > 0)) return 0.0;
        double l = std::log(u);
        return -u * std::copysign(std::pow(std::abs(l), q), l);
    };
    return RateFunction(value, "-u(log u)^" + num(q),
                        [q](double s) { return s > 0 ? q * std::log(s) : kNaN; });
}

RateFunction RateFunction::shifted_log_power(double q, double gamma) {
    auto value = [q, gamma](double u) {
        if (!(u > 0)) return 0.0;
        return -gamma * u * std::pow(std::log(std::exp(1.0) + u), q);
    };
    auto log_rate = [q, gamma](double s) {
        double l = 1.0 + log1p_exp(s - 1.0);
        return std::log(gamma) + q * std::log(l);
    };
    return RateFunction(value, "-" + num(gamma) + "u log(e+u)^" + num(q), log_rate);
}

RateFunction RateFunction::from_envelope(const Envelope& env) {
    auto log_rate = [env](double s) {
        double r = env.rate_log(s);
        return r < 0 ? std::log(-r) : kNaN;
    };
    return RateFunction(env.as_function(), "F[" + env.source().id() + "]", log_rate);
}

}  // namespace rdlab
