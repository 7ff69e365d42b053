#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rdlab/envelope.hpp"

namespace rdlab {

enum class F2Verdict { SatisfiesF2, FailsF2, Inconclusive };
const char* to_string(F2Verdict v);

/// Verdict of the heuristic F2 classifier. probe_log holds (u, ratio); in log-space
/// mode the first component is s = log u instead.
struct GrowthSpec {
    std::string term_id;
    std::string condition = "F2";
    int m = 0;
    double eps = 1.0;
    F2Verdict verdict = F2Verdict::Inconclusive;
    bool log_space = false;
    std::vector<std::pair<double, double>> probe_log;
};

/// u = 10^k, k = 1..12.
std::vector<double> default_f2_probes();

/// log u for u = 10^(10^j) style probes, reaching far beyond the double range.
std::vector<double> extended_f2_log_probes(int count = 12);

/// ratio r(u) = env(u) / (u (prod log^{(i)} u)^2 (log^{(m+1)} u)^{2+eps}).
GrowthSpec check_F2(const std::function<double(double)>& env, int m, double eps,
                    const std::vector<double>& u_probes, std::string term_id = {});
GrowthSpec check_F2(const Envelope& env, int m, double eps,
                    const std::vector<double>& u_probes = default_f2_probes());

/// Same heuristic with r evaluated from s = log u through env.rate_log.
GrowthSpec check_F2_log(const std::function<double(double)>& rate_log, int m, double eps,
                        const std::vector<double>& s_probes, std::string term_id = {});
GrowthSpec check_F2_log(const Envelope& env, int m, double eps,
                        const std::vector<double>& s_probes = extended_f2_log_probes());

/// Tail verdict on a ratio sequence; exposed for tests.
F2Verdict classify_ratio_tail(const std::vector<double>& ratios);

enum class F1Verdict { Holds, Fails, Inconclusive };
const char* to_string(F1Verdict v);

/// F1 probe check: sup_{u>0} F_R(u) finite and F_R eventually negative on the probes.
/// For Custom terms the answer is at best Inconclusive.
F1Verdict check_F1(const Envelope& env);

}  // namespace rdlab
