#include "rdlab/growth.hpp"

#include <cmath>

#include "rdlab/errors.hpp"
#include "rdlab/iterlog.hpp"
#include "rdlab/numeric.hpp"

namespace rdlab {

const char* to_string(F2Verdict v) {
    switch (v) {
        case F2Verdict::SatisfiesF2: return "SatisfiesF2";
        case F2Verdict::FailsF2: return "FailsF2";
        case F2Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(F1Verdict v) {
    switch (v) {
        case F1Verdict::Holds: return "Holds";
        case F1Verdict::Fails: return "Fails";
        case F1Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::vector<double> default_f2_probes() { return logspace(1.0, 12.0, 12); }

std::vector<double> extended_f2_log_probes(int count) {
    // s from 10 up to 10^(count/2 + 1), geometric
    std::vector<double> s(count);
    for (int i = 0; i < count; ++i) s[i] = 10.0 * std::pow(10.0, 0.5 * i);
    return s;
}

namespace {

// log of the F2 denominator divided by u, from s = log u
double log_denominator_rate(int m, double eps, double s) {
    double acc = 0.0;
    double L = s;
    for (int i = 1; i <= m; ++i) {
        if (!(L > 0)) throw DomainError("check_F2: probe below the iterated-log domain");
        acc += 2.0 * std::log(L);
        L = std::log(L);
    }
    if (!(L > 0)) throw DomainError("check_F2: probe below the iterated-log domain");
    return acc + (2.0 + eps) * std::log(L);
}

}  // namespace

F2Verdict classify_ratio_tail(const std::vector<double>& ratios) {
    const std::size_t n = ratios.size();
    if (n < 6) return F2Verdict::Inconclusive;
    std::vector<double> tail(ratios.begin() + static_cast<long>(n / 3), ratios.end());
    for (double r : tail)
        if (std::isnan(r)) return F2Verdict::Inconclusive;
    if (std::isinf(tail.back()) && tail.back() < 0) return F2Verdict::SatisfiesF2;
    if (tail.back() >= 0) return F2Verdict::FailsF2;
    for (std::size_t i = 1; i < tail.size(); ++i)
        if (!(tail[i] < tail[i - 1])) return F2Verdict::FailsF2;
    const std::size_t h = tail.size() / 2;
    double first = tail[0] - tail[h - 1];
    double second = tail[tail.size() - h] - tail.back();
    double q = second / first;
    if (q >= 0.45) return F2Verdict::SatisfiesF2;
    if (q < 0.25) return F2Verdict::FailsF2;
    return F2Verdict::Inconclusive;
}

GrowthSpec check_F2(const std::function<double(double)>& env, int m, double eps,
                    const std::vector<double>& u_probes, std::string term_id) {
    if (m < 0 || !(eps > 0)) throw DomainError("check_F2 needs m >= 0 and eps > 0");
    GrowthSpec g;
    g.term_id = std::move(term_id);
    g.m = m;
    g.eps = eps;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < u_probes.size(); ++i) {
        if (i > 0 && !(u_probes[i] > u_probes[i - 1]))
            throw DomainError("check_F2: probes must be strictly increasing");
        double u = u_probes[i];
        double s = std::log(u);
        double r = env(u) / u / std::exp(log_denominator_rate(m, eps, s));
        ratios.push_back(r);
        g.probe_log.emplace_back(u, r);
    }
    g.verdict = classify_ratio_tail(ratios);
    return g;
}

GrowthSpec check_F2(const Envelope& env, int m, double eps, const std::vector<double>& u_probes) {
    return check_F2(env.as_function(), m, eps, u_probes, env.source().id());
}

GrowthSpec check_F2_log(const std::function<double(double)>& rate_log, int m, double eps,
                        const std::vector<double>& s_probes, std::string term_id) {
    if (m < 0 || !(eps > 0)) throw DomainError("check_F2 needs m >= 0 and eps > 0");
    GrowthSpec g;
    g.term_id = std::move(term_id);
    g.m = m;
    g.eps = eps;
    g.log_space = true;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < s_probes.size(); ++i) {
        if (i > 0 && !(s_probes[i] > s_probes[i - 1]))
            throw DomainError("check_F2: probes must be strictly increasing");
        double s = s_probes[i];
        double rate = rate_log(s);
        double ld = log_denominator_rate(m, eps, s);
        double r;
        if (rate == 0.0) r = 0.0;
        else r = (rate < 0 ? -1.0 : 1.0) * std::exp(std::log(std::abs(rate)) - ld);
        ratios.push_back(r);
        g.probe_log.emplace_back(s, r);
    }
    g.verdict = classify_ratio_tail(ratios);
    return g;
}

GrowthSpec check_F2_log(const Envelope& env, int m, double eps,
                        const std::vector<double>& s_probes) {
    return check_F2_log([&env](double s) { return env.rate_log(s); }, m, eps, s_probes,
                        env.source().id());
}

F1Verdict check_F1(const Envelope& env) {
    auto us = logspace(-6.0, 12.0, 181);
    double sup = -std::numeric_limits<double>::infinity();
    for (double u : us) sup = std::max(sup, env(u));
    if (!std::isfinite(sup)) return F1Verdict::Fails;
    bool tail_negative = env(us.back()) < 0 && env(us[us.size() - 10]) < 0;
    if (!tail_negative) return F1Verdict::Fails;
    if (!env.source().has_structure()) return F1Verdict::Inconclusive;
    return F1Verdict::Holds;
}

}  // namespace rdlab
