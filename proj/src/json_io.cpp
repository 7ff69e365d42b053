#include "rdlab/json_io.hpp"

#include <cmath>

namespace rdlab {

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

namespace {

json base(const char* kind) {
    json j;
    j["schema"] = kJsonSchema;
    j["kind"] = kind;
    return j;
}

json pairs(const std::vector<std::pair<double, double>>& v) {
    json a = json::array();
    for (auto& [p, q] : v) a.push_back(json::array({num(p), num(q)}));
    return a;
}

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double e : v) a.push_back(num(e));
    return a;
}

}  // namespace

json to_json(const GrowthSpec& g) {
    json j = base("growth");
    j["term_id"] = g.term_id;
    j["condition"] = g.condition;
    j["m"] = g.m;
    j["eps"] = num(g.eps);
    j["verdict"] = to_string(g.verdict);
    j["log_space"] = g.log_space;
    j["probes"] = pairs(g.probe_log);
    return j;
}

json to_json(const OsgoodResult& r) {
    json j = base("osgood");
    j["verdict"] = r.convergent ? "Convergent" : "Divergent";
    j["value"] = num(r.value);
    j["level"] = r.level;
    j["segments"] = r.segments;
    j["last_ratio"] = num(r.last_ratio);
    return j;
}

json to_json(const RootReport& r) {
    json j = base("largest_root");
    j["c0"] = num(r.c0);
    j["bracket"] = json::array({num(r.lo), num(r.hi)});
    j["residual"] = num(r.residual);
    j["tangency_warning"] = r.tangency_warning;
    return j;
}

json to_json(const DichotomyResult& r) {
    json j = base("dichotomy");
    j["verdict"] = r.bounded ? "Bounded" : "Unbounded";
    j["limit"] = num(r.limit);
    j["v_inf"] = num(r.v_inf);
    j["rungs_log_c_log_v"] = pairs(r.rungs);
    return j;
}

json to_json(const LongtimeReport& r) {
    json j = base("longtime_limit");
    j["limit"] = num(r.limit);
    j["c0"] = num(r.c0);
    j["t_final"] = num(r.t_final);
    j["ivp_fallback"] = r.used_ivp_fallback;
    return j;
}

json to_json(const OdeSolution& s) {
    json j = base("ode_solution");
    j["G"] = s.G_id;
    j["c"] = num(s.c);
    j["method"] = to_string(s.method);
    j["tol"] = num(s.tol);
    j["t"] = numbers(s.t_grid);
    j["v"] = numbers(s.values);
    return j;
}

json to_json(const ResidualReport& r) {
    json j = base("residual");
    j["family"] = to_string(r.family);
    j["R"] = num(r.R);
    j["l"] = num(r.l);
    j["K"] = num(r.K);
    j["eps"] = num(r.eps);
    j["iter_m"] = r.iter_m;
    j["grid"] = {{"nx", r.grid.nx},       {"nt", r.grid.nt}, {"margin", num(r.grid.margin)},
                 {"t_min", num(r.grid.t_min)}, {"T", num(r.grid.T)}, {"x_window", num(r.x_window)}};
    j["max_residual"] = num(r.max_residual);
    j["refined_max_residual"] = num(r.refined_max_residual);
    j["sign_certified"] = r.sign_certified;
    j["has_nan"] = r.has_nan;
    j["worst_point"] = {{"x", num(r.worst_x)}, {"t", num(r.worst_t)}};
    if (r.family == BarrierFamily::Thm1Barrier)
        j["constants"] = {{"u0", num(r.u0)}, {"T0", num(r.T0)}};
    else
        j["constants"] = {{"M0", num(r.M0)}, {"C0", num(r.C0)}};
    if (r.diagnostics) {
        json w;
        json a = json::array(), b = json::array();
        for (int k = 0; k < 5; ++k) {
            a.push_back(num(r.wdiag.worst_a[k]));
            b.push_back(num(r.wdiag.worst_b[k]));
        }
        w["worst_branch_a"] = a;
        w["worst_branch_b"] = b;
        w["split_certified"] = r.wdiag.split_certified;
        w["c0_empirical"] = num(r.wdiag.c0_empirical);
        w["L0"] = num(r.wdiag.L0);
        w["gamma0"] = num(r.wdiag.gamma0);
        j["W_diagnostics"] = w;
    }
    return j;
}

json to_json(const StationaryReport& r) {
    json j = base("stationary");
    j["witness"] = r.witness;
    j["window"] = json::array({num(r.lo), num(r.hi)});
    j["n"] = r.n;
    j["collar"] = num(r.collar);
    j["max_residual"] = num(r.max_residual);
    j["worst_x"] = num(r.worst_x);
    return j;
}

json to_json(const UniquenessReport& r) {
    json j = base("uniqueness_probe");
    j["verdict"] = to_string(r.verdict);
    j["theta"] = num(r.theta);
    j["extrapolated"] = num(r.extrapolated);
    j["reason"] = r.reason;
    json rungs = json::array();
    for (const auto& g : r.rungs) {
        rungs.push_back({{"m", g.m},
                         {"k_used", num(g.k_used)},
                         {"k_converged", g.k_converged},
                         {"value", num(g.value)},
                         {"k_history", pairs(g.k_history)}});
    }
    j["rungs"] = rungs;
    return j;
}

json to_json(const MinimalSolutionReport& r) {
    json j = base("minimal_solution");
    j["ladder"] = numbers(r.ladder);
    j["probe"] = {{"x", num(r.probe_x)}, {"t", num(r.T)}};
    j["values"] = numbers(r.probe_values);
    j["gaps"] = numbers(r.gaps);
    return j;
}

}  // namespace rdlab
