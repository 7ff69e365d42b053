#include "scenarios.hpp"

#include <fnmatch.h>
#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "rdlab/barriers.hpp"
#include "rdlab/envelope.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/growth.hpp"
#include "rdlab/json_io.hpp"
#include "rdlab/ode_oracle.hpp"
#include "rdlab/pde_scenarios.hpp"
#include "rdlab/quadrature.hpp"
#include "rdlab/stationary.hpp"
#include "rdlab/trajectory_io.hpp"

namespace fs = std::filesystem;

namespace rdlab::cli {

namespace {

struct KindInfo {
    ScenarioKind kind;
    const char* name;
    std::set<std::string> required;
    std::set<std::string> optional;
    std::vector<std::string> outputs;
};

const std::vector<KindInfo>& kind_table() {
    static const std::vector<KindInfo> t{
        {ScenarioKind::ClassifyTerm, "ClassifyTerm", {"term"},
         {"m", "eps", "R", "log_space", "probes", "expect"}, {"growth.json"}},
        {ScenarioKind::OsgoodDichotomy, "OsgoodDichotomy", {"G"},
         {"t", "u0", "k_lo", "k_hi", "ladder", "tol", "expect"}, {"dichotomy.json"}},
        {ScenarioKind::VInfinityCurve, "VInfinityCurve", {"G"}, {"times", "tol"},
         {"vinf.csv", "vinf.json"}},
        {ScenarioKind::Thm1Certificate, "Thm1Certificate", {"term"},
         {"operator", "R", "l", "eps", "iter_m", "nx", "nt", "T", "K"},
         {"residual.json", "residual.csv"}},
        {ScenarioKind::Thm3Certificate, "Thm3Certificate", {"term"},
         {"operator", "R", "l", "eps", "iter_m", "nx", "nt", "T", "ladder", "diagnostics"},
         {"thm3.json"}},
        {ScenarioKind::StationaryResiduals, "StationaryResiduals", {},
         {"witnesses", "n", "tol"}, {"stationary.json"}},
        {ScenarioKind::UniversalCollapse, "UniversalCollapse", {"term"},
         {"operator", "A", "X", "t", "dx", "dt", "R", "l", "eps", "min_shrink", "contrast"},
         {"collapse.json", "collapse.csv"}},
        {ScenarioKind::UniquenessProbe, "UniquenessProbe", {"term", "operator"},
         {"ladder", "W", "T", "theta", "dx", "dt", "k_max", "expect"},
         {"uniqueness.json", "ladder.csv"}},
        {ScenarioKind::NonuniquenessWitness, "NonuniquenessWitness", {"term", "operator"},
         {"ladder", "W", "T", "theta", "dx", "dt", "k_max", "require_oracle_bound", "trajectory"},
         {"witness.json", "ladder.csv", "trajectory.csv"}},
        {ScenarioKind::LongtimeLimit, "LongtimeLimit", {"G"}, {"tol", "fallback", "fallback_c"},
         {"longtime.json"}},
    };
    return t;
}

const KindInfo& info(ScenarioKind k) {
    for (const auto& i : kind_table())
        if (i.kind == k) return i;
    throw ConfigError("unknown scenario kind");
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

}  // namespace

const char* to_string(ScenarioKind k) { return info(k).name; }

const char* to_string(Status s) {
    switch (s) {
        case Status::Passed: return "passed";
        case Status::Failed: return "failed";
        case Status::Inconclusive: return "inconclusive";
        case Status::Error: return "error";
    }
    return "?";
}

const ReactionTerm& Catalog::term(const std::string& id) const {
    auto it = terms.find(id);
    if (it == terms.end()) throw ConfigError("unknown term '" + id + "'");
    return it->second;
}

const Operator1D& Catalog::op(const std::string& id) const {
    auto it = operators.find(id);
    if (it == operators.end()) throw ConfigError("unknown operator '" + id + "'");
    return it->second;
}

std::pair<std::string, std::vector<double>> parse_call(const std::string& text, const std::string& where) {
    auto open = text.find('(');
    if (open == std::string::npos) return {text, {}};
    if (text.back() != ')') throw ConfigError(where + ": malformed call '" + text + "'");
    std::string name = text.substr(0, open);
    Block b{{"args", text.substr(open + 1, text.size() - open - 2)}};
    return {name, get_list(b, "args", {})};
}

RateFunction parse_rate(const std::string& text, const Catalog& cat) {
    if (text.rfind("term(", 0) == 0 && text.back() == ')') {
        const ReactionTerm& t = cat.term(text.substr(5, text.size() - 6));
        return RateFunction::from_envelope(envelope(t, kInfiniteRadius));
    }
    auto [name, a] = parse_call(text, "G");
    auto need = [&, n = name](std::size_t k) {
        if (a.size() != k)
            throw ConfigError("G: " + n + " takes " + std::to_string(k) + " arguments");
    };
    if (name == "power") {
        need(2);
        return RateFunction::power_decay(a[0], a[1]);
    }
    if (name == "iterlog") {
        need(2);
        return RateFunction::iter_log_model(static_cast<int>(a[0]), a[1]);
    }
    if (name == "product") {
        need(1);
        return RateFunction::iter_log_product(static_cast<int>(a[0]));
    }
    if (name == "logpower") {
        need(1);
        return RateFunction::log_power(a[0]);
    }
    if (name == "shiftedlog") {
        need(1);
        return RateFunction::shifted_log_power(a[0]);
    }
    if (name == "poly") {
        if (a.empty()) throw ConfigError("G: poly needs coefficients");
        auto c = a;
        return RateFunction(
            [c](double u) {
                double s = 0.0;
                for (std::size_t k = c.size(); k-- > 0;) s = s * u + c[k];
                return s;
            },
            "poly(" + text.substr(5));
    }
    throw ConfigError("G: unknown rate '" + text + "'");
}

Plan build_plan(const Config& cfg) {
    Plan plan;
    plan.config = cfg;
    for (const auto& t : evolvable_catalog()) plan.catalog.terms.emplace(t.id(), t);
    plan.catalog.terms.emplace("zero", ReactionTerm::zero());
    plan.catalog.terms.emplace("ex2_term", StationaryWitness::ex2(1.0).term());
    plan.catalog.terms.emplace("ex3_term", StationaryWitness::ex3(0.5).term());
    plan.catalog.operators.emplace("laplacian", Operator1D::laplacian());
    plan.catalog.operators.emplace("ex2_operator", StationaryWitness::ex2(1.0).op());
    plan.catalog.operators.emplace("ex3_operator", StationaryWitness::ex3(0.5).op());

    for (const Table* t : cfg.all("term")) {
        if (plan.catalog.terms.count(t->id))
            throw ConfigError("term." + t->id + ": shadows a built-in term");
        plan.catalog.terms.emplace(t->id, parse_term(t->values, t->id));
    }
    for (const Table* t : cfg.all("operator")) {
        if (plan.catalog.operators.count(t->id))
            throw ConfigError("operator." + t->id + ": shadows a built-in operator");
        plan.catalog.operators.emplace(t->id, parse_operator(t->values, t->id));
    }
    for (const Table* t : cfg.all("scenario")) {
        const std::string where = "scenario." + t->id;
        auto k = t->values.find("kind");
        if (k == t->values.end()) throw ConfigError(where + ".kind: missing");
        const KindInfo* ki = nullptr;
        for (const auto& i : kind_table())
            if (k->second == i.name) ki = &i;
        if (!ki) throw ConfigError(where + ".kind: unknown kind '" + k->second + "'");
        Scenario s{t->id, ki->kind, t->values, ki->outputs};
        s.params.erase("kind");
        for (const auto& [key, value] : s.params)
            if (!ki->required.count(key) && !ki->optional.count(key))
                throw ConfigError(where + "." + key + ": not a parameter of " + ki->name);
        for (const auto& key : ki->required)
            if (!s.params.count(key)) throw ConfigError(where + "." + key + ": missing");
        if (s.params.count("term")) plan.catalog.term(s.params.at("term"));
        if (s.params.count("operator")) plan.catalog.op(s.params.at("operator"));
        if (s.params.count("G")) parse_rate(s.params.at("G"), plan.catalog);
        if (s.kind == ScenarioKind::NonuniquenessWitness && !get_bool(s.params, "trajectory", false))
            s.outputs.pop_back();
        plan.scenarios.push_back(std::move(s));
    }
    return plan;
}

std::string list_table(const Plan& plan) {
    std::ostringstream os;
    os << std::left << std::setw(28) << "id" << " kind\n";
    for (const auto& s : plan.scenarios) os << std::setw(28) << s.id << " " << to_string(s.kind) << "\n";
    return os.str();
}

std::string describe_table(const Plan& plan) {
    std::ostringstream os;
    os << plan.scenarios.size() << " scenario(s) in " << plan.config.path << "\n";
    os << std::left << std::setw(28) << "id" << " " << std::setw(22) << "kind" << " " << std::setw(48)
       << "parameters" << " artifacts\n";
    for (const auto& s : plan.scenarios) {
        std::string params, arts;
        for (const auto& [k, v] : s.params) params += (params.empty() ? "" : " ") + k + "=" + v;
        for (const auto& a : s.outputs) arts += (arts.empty() ? "" : ",") + a;
        os << std::setw(28) << s.id << " " << std::setw(22) << to_string(s.kind) << " " << std::setw(48)
           << (params.empty() ? "-" : params) << " " << arts << "\n";
    }
    return os.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

namespace {

/// thrown to mark a verdict the run should not count as a pass or a failure
struct Inconclusive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    const Plan& plan;
    const Scenario& s;
    fs::path dir;
    std::vector<std::string>& artifacts;
    std::string rel;

    void write(const std::string& name, const std::string& content) const {
        std::ofstream f(dir / name, std::ios::binary);
        f << content;
        if (!f) throw ScenarioError(s.id + ": cannot write " + name);
        artifacts.push_back(rel + "/" + name);
    }
    void write_json(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }
    double number(const std::string& key, double fallback) const { return get_number(s.params, key, fallback); }
    int integer(const std::string& key, int fallback) const { return get_int(s.params, key, fallback); }
    std::string str(const std::string& key, const std::string& fallback) const {
        return get_string(s.params, key, fallback);
    }
    const ReactionTerm& term() const { return plan.catalog.term(s.params.at("term")); }
    const Operator1D& op() const { return plan.catalog.op(str("operator", "laplacian")); }
};

/// failure message or empty
using Outcome = std::string;

Outcome run_classify(const Context& c) {
    const ReactionTerm& term = c.term();
    const double R = c.number("R", kInfiniteRadius);
    const int m = c.integer("m", 0);
    const double eps = c.number("eps", 1.0);
    Envelope env = envelope(term, R);
    GrowthSpec g = get_bool(c.s.params, "log_space", false)
                       ? check_F2_log(env, m, eps, extended_f2_log_probes(c.integer("probes", 12)))
                       : check_F2(env, m, eps);
    g.term_id = term.id();
    json j = to_json(g);
    j["R"] = num(R);
    j["envelope"] = to_string(env.method());
    c.write_json("growth.json", j);
    const std::string expect = c.str("expect", "");
    if (!expect.empty()) return expect == to_string(g.verdict) ? "" : "verdict " + std::string(to_string(g.verdict)) + " != " + expect;
    if (g.verdict == F2Verdict::Inconclusive) throw Inconclusive("F2 verdict inconclusive");
    return "";
}

Outcome run_dichotomy(const Context& c) {
    RateFunction G = parse_rate(c.str("G", ""), c.plan.catalog);
    const double t = c.number("t", 1.0), tol = c.number("tol", 1e-4);
    const int k_lo = c.integer("k_lo", 0), k_hi = c.integer("k_hi", 6);
    const std::string ladder = c.str("ladder", "log_decade");
    std::vector<double> log_c;
    if (ladder == "log_decade") log_c = log_decade_ladder(k_lo, k_hi);
    else if (ladder == "decade") log_c = decade_ladder(k_lo, k_hi);
    else throw ConfigError("scenario." + c.s.id + ".ladder: expected log_decade or decade");
    OsgoodResult o = osgood_test(G, c.number("u0", 16.0));
    json j;
    j["schema"] = kJsonSchema;
    j["G"] = G.id();
    j["t"] = t;
    j["ladder"] = ladder;
    j["osgood"] = to_json(o);
    try {
        DichotomyResult d = dichotomy(G, t, log_c, tol);
        j["dichotomy"] = to_json(d);
        c.write_json("dichotomy.json", j);
        if (d.bounded != o.convergent) return "dichotomy disagrees with the Osgood test";
    } catch (const InconclusiveError& e) {
        j["dichotomy"] = {{"verdict", "Inconclusive"}, {"reason", e.what()}};
        c.write_json("dichotomy.json", j);
        throw Inconclusive(e.what());
    }
    const std::string expect = c.str("expect", "");
    if (!expect.empty() && expect != (o.convergent ? "Convergent" : "Divergent"))
        return "Osgood verdict differs from expected " + expect;
    return "";
}

Outcome run_vinf(const Context& c) {
    RateFunction G = parse_rate(c.str("G", ""), c.plan.catalog);
    const double tol = c.number("tol", 1e-10);
    VInfinity v(G, tol);
    std::ostringstream csv;
    csv << "t,v_inf\n" << std::setprecision(17);
    json pts = json::array();
    for (double t : get_list(c.s.params, "times", {0.1, 0.5, 1, 2})) {
        double val = v(t);
        csv << t << "," << val << "\n";
        pts.push_back({num(t), num(val)});
    }
    c.write("vinf.csv", csv.str());
    c.write_json("vinf.json", {{"schema", kJsonSchema}, {"kind", "v_infinity"}, {"G", G.id()},
                               {"c0", num(v.root().c0)}, {"tol", tol}, {"points", pts}});
    return "";
}

ResidualGrid grid_of(const Context& c) {
    ResidualGrid g;
    g.nx = c.integer("nx", 201);
    g.nt = c.integer("nt", 50);
    g.T = c.number("T", 1.0);
    return g;
}

Outcome run_thm1(const Context& c) {
    BarrierParams p{c.number("R", 1.0), c.number("l", 3.0), 0.0, c.integer("iter_m", 0),
                    BarrierFamily::Thm1Barrier};
    Thm1Options o;
    o.eps = c.number("eps", 1.0);
    ResidualGrid g = grid_of(c);
    if (c.s.params.count("K")) p.K = c.number("K", 0.0);
    else p.K = find_K_thm1(p, c.op(), c.term(), g, o).K;
    o.keep_field = true;
    ResidualReport r = residual_thm1(p, c.op(), c.term(), g, o);
    c.write_json("residual.json", to_json(r));
    std::ostringstream csv;
    write_residual_csv(r, csv);
    c.write("residual.csv", csv.str());
    return r.sign_certified ? "" : "residual not sign certified (max " + fmt(r.max_residual) + ")";
}

Outcome run_thm3(const Context& c) {
    BarrierParams p{c.number("R", 2.0), c.number("l", 3.0), 0.0, c.integer("iter_m", 0),
                    BarrierFamily::Thm3Barrier};
    Thm3Options o;
    o.eps = c.number("eps", 1.0);
    o.diagnostics = get_bool(c.s.params, "diagnostics", true);
    FindKOptions ko;
    ko.ladder = c.integer("ladder", 4);
    FindKResult k = find_K_thm3(p, c.op(), c.term(), grid_of(c), o, ko);
    json j{{"schema", kJsonSchema}, {"kind", "thm3_ladder"}, {"K", num(k.K)},
           {"evaluations", k.evaluations}, {"ladder_certified", k.ladder_certified}};
    json reps = json::array();
    for (const auto& r : k.ladder) reps.push_back(to_json(r));
    j["ladder"] = reps;
    c.write_json("thm3.json", j);
    return k.ladder_certified ? "" : "K from the base radius fails on the ladder";
}

StationaryWitness parse_witness(const std::string& text) {
    auto [name, a] = parse_call(text, "witnesses");
    if (name == "ex1" && (a.size() == 1 || a.size() == 2))
        return StationaryWitness::ex1(static_cast<int>(a[0]), a.size() == 2 ? a[1] : 0.0);
    if (name == "ex2" && a.size() == 1) return StationaryWitness::ex2(a[0]);
    if (name == "ex3" && a.size() == 1) return StationaryWitness::ex3(a[0]);
    throw ConfigError("witnesses: unknown witness '" + text + "'");
}

Outcome run_stationary(const Context& c) {
    const double tol = c.number("tol", 1e-9);
    const int n = c.integer("n", 2001);
    json reps = json::array();
    Outcome out;
    for (const auto& w : get_string_list(c.s.params, "witnesses", {"ex1(1)", "ex2(1)", "ex3(0.5)"})) {
        StationaryReport r = residual_stationary(parse_witness(w), n);
        reps.push_back(to_json(r));
        if (!(r.max_residual <= tol)) out += r.witness + " residual " + fmt(r.max_residual) + "; ";
    }
    c.write_json("stationary.json", {{"schema", kJsonSchema}, {"kind", "stationary_set"}, {"tol", tol},
                                     {"reports", reps}});
    return out;
}

Outcome run_collapse(const Context& c) {
    const ReactionTerm& term = c.term();
    CollapseOptions o;
    o.X = c.number("X", 1.0);
    o.t_probe = c.number("t", 0.1);
    o.solver.dx = c.number("dx", 0.005);
    o.solver.dt = c.number("dt", 5e-4);
    const auto As = get_list(c.s.params, "A", {1e2, 1e4, 1e6, 1e8});
    CollapseReport rep = universal_collapse(term, c.op(), As, o);
    BarrierBound b = thm1_barrier_bound(term, c.op(), c.number("R", o.X), c.number("l", 3.0),
                                        c.number("eps", 1.0), o.x_probe, o.t_probe);
    json j{{"schema", kJsonSchema}, {"kind", "universal_collapse"}, {"term", term.id()},
           {"x", o.x_probe}, {"t", o.t_probe}, {"barrier_K", num(b.K)}, {"barrier_log_M", num(b.log_M)}};
    json rows = json::array();
    std::ostringstream csv;
    csv << "A,u\n" << std::setprecision(17);
    Outcome out;
    /// M itself overflows for these K, so compare logarithms
    const double bound_log = b.log_M > 30.0 ? b.log_M : std::log(std::exp(b.log_M) + 1e-2);
    for (std::size_t i = 0; i < As.size(); ++i) {
        rows.push_back({num(As[i]), num(rep.values[i])});
        csv << As[i] << "," << rep.values[i] << "\n";
        if (!(std::log(std::max(rep.values[i], 1e-300)) <= bound_log)) out += "value above the barrier; ";
    }
    j["values"] = rows;
    j["shrink"] = json::array();
    for (double s : rep.shrink) j["shrink"].push_back(num(s));
    if (c.s.params.count("contrast")) {
        const ReactionTerm& lin = c.plan.catalog.term(c.str("contrast", ""));
        CollapseReport lr = universal_collapse(lin, c.op(), As, o);
        json g = json::array();
        for (double x : lr.growth) g.push_back(num(x));
        j["contrast"] = {{"term", lin.id()}, {"growth", g}};
    }
    if (c.s.params.count("min_shrink")) {
        const double ms = c.number("min_shrink", 5.0);
        for (double s : rep.shrink)
            if (!(s >= ms)) out += "decade gain shrink " + fmt(s) + " < " + fmt(ms) + "; ";
    }
    c.write_json("collapse.json", j);
    c.write("collapse.csv", csv.str());
    return out;
}

std::function<double(double)> parse_W(const std::string& text) {
    if (text == "zero") return [](double) { return 0.0; };
    if (text == "one") return [](double) { return 1.0; };
    StationaryWitness w = parse_witness(text);
    return [w](double x) { return w.W(x); };
}

Outcome run_uniqueness(const Context& c, bool witness_kind) {
    UniquenessOptions o;
    o.T = c.number("T", 1.0);
    o.theta = c.number("theta", 1e-3);
    o.solver.dx = c.number("dx", 0.05);
    o.solver.dt = c.number("dt", 1e-2);
    o.k_max = c.number("k_max", 1e12);
    std::vector<int> ladder;
    for (double m : get_list(c.s.params, "ladder", {2, 4, 8})) ladder.push_back(static_cast<int>(m));
    auto W = parse_W(c.str("W", "zero"));
    UniquenessReport r;
    try {
        r = uniqueness_probe(c.op(), c.term(), ladder, W, o);
    } catch (const InconclusiveError& e) {
        c.write_json(witness_kind ? "witness.json" : "uniqueness.json",
                     {{"schema", kJsonSchema}, {"verdict", "Inconclusive"}, {"reason", e.what()}});
        throw Inconclusive(e.what());
    }
    std::ostringstream csv;
    csv << "m,k_used,k_converged,value\n" << std::setprecision(17);
    for (const auto& g : r.rungs) csv << g.m << "," << g.k_used << "," << g.k_converged << "," << g.value << "\n";
    json j = to_json(r);
    Outcome out;
    if (witness_kind) {
        const double oracle = witness_upper_oracle(c.term(), o.T);
        j["oracle_v_inf"] = num(oracle);
        j["oracle_bound_holds"] = r.rungs.back().value <= oracle;
        if (r.verdict != UniquenessVerdict::NontrivialWitness) out += "no nontrivial witness; ";
        if (get_bool(c.s.params, "require_oracle_bound", false) && !(r.rungs.back().value <= oracle))
            out += "witness " + fmt(r.rungs.back().value) + " above v_inf " + fmt(oracle) + "; ";
        if (get_bool(c.s.params, "trajectory", false)) {
            const auto& top = r.rungs.back();
            Trajectory tr = solve_forced({top.m, top.k_used, W}, c.op(), c.term(),
                                         {0.25 * o.T, 0.5 * o.T, 0.75 * o.T, o.T}, o.solver);
            std::ostringstream ts;
            write_trajectory_csv(tr, ts, {{"m", std::to_string(top.m)}, {"k", fmt(top.k_used)}});
            c.write("trajectory.csv", ts.str());
        }
        c.write_json("witness.json", j);
    } else {
        const std::string expect = c.str("expect", "");
        if (!expect.empty() && expect != to_string(r.verdict)) out += std::string("verdict ") + to_string(r.verdict) + " != " + expect;
        c.write_json("uniqueness.json", j);
    }
    c.write("ladder.csv", csv.str());
    return out;
}

Outcome run_longtime(const Context& c) {
    RateFunction G = parse_rate(c.str("G", ""), c.plan.catalog);
    LongtimeOptions o;
    o.ivp_fallback = get_bool(c.s.params, "fallback", false);
    o.fallback_c = c.number("fallback_c", 1e6);
    const double tol = c.number("tol", 1e-5);
    LongtimeReport r = longtime_limit(G, tol, o);
    json j = to_json(r);
    j["G"] = G.id();
    j["tol"] = tol;
    c.write_json("longtime.json", j);
    return std::abs(r.limit - r.c0) <= 10 * tol * std::max(1.0, r.c0) ? "" : "limit differs from c0";
}

Outcome dispatch(const Context& c) {
    switch (c.s.kind) {
        case ScenarioKind::ClassifyTerm: return run_classify(c);
        case ScenarioKind::OsgoodDichotomy: return run_dichotomy(c);
        case ScenarioKind::VInfinityCurve: return run_vinf(c);
        case ScenarioKind::Thm1Certificate: return run_thm1(c);
        case ScenarioKind::Thm3Certificate: return run_thm3(c);
        case ScenarioKind::StationaryResiduals: return run_stationary(c);
        case ScenarioKind::UniversalCollapse: return run_collapse(c);
        case ScenarioKind::UniquenessProbe: return run_uniqueness(c, false);
        case ScenarioKind::NonuniquenessWitness: return run_uniqueness(c, true);
        case ScenarioKind::LongtimeLimit: return run_longtime(c);
    }
    return "unhandled kind";
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int run_plan(const Plan& plan, const RunOptions& opts, std::ostream& log,
             std::vector<ScenarioResult>* results_out) {
    const fs::path out(opts.out_dir);
    fs::create_directories(out);
    std::vector<const Scenario*> todo;
    for (const auto& s : plan.scenarios)
        if (fnmatch(opts.filter.c_str(), s.id.c_str(), 0) == 0) todo.push_back(&s);

    std::vector<ScenarioResult> results(todo.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < todo.size();) {
            const Scenario& s = *todo[i];
            ScenarioResult& r = results[i];
            r.id = s.id;
            r.kind = s.kind;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                fs::path dir = out / s.id;
                fs::remove_all(dir);
                fs::create_directories(dir);
                Context c{plan, s, dir, r.artifacts, s.id};
                r.message = dispatch(c);
                r.status = r.message.empty() ? Status::Passed : Status::Failed;
            } catch (const Inconclusive& e) {
                r.status = Status::Inconclusive;
                r.message = e.what();
            } catch (const std::exception& e) {
                r.status = Status::Error;
                r.message = ScenarioError(s.id + ": " + e.what()).what();
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::lock_guard<std::mutex> lock(log_mutex);
            log << "[" << s.id << "] " << to_string(r.status);
            if (!r.message.empty()) log << ": " << r.message;
            log << "\n";
        }
    };
    const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(std::max<std::size_t>(1, todo.size()))));
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int code = 0;
    json manifest{{"schema", kJsonSchema},
                  {"tool", "rdlab"},
                  {"version", opts.version},
                  {"config", plan.config.path},
                  {"config_sha256", sha256_hex(plan.config.text)},
                  {"filter", opts.filter},
                  {"strict", opts.strict}};
    if (const Table* run = plan.config.find("run", "")) {
        json params = json::object();
        for (const auto& [k, v] : run->values) params[k] = v;
        manifest["run"] = params;
    }
    json scen = json::array();
    json timing{{"schema", kJsonSchema}, {"scenarios", json::object()}};
    double total = 0.0;
    for (const auto& r : results) {
        const bool bad = r.status == Status::Failed || r.status == Status::Error ||
                         (opts.strict && r.status == Status::Inconclusive);
        if (bad) code = 1;
        json arts = json::array();
        for (const auto& a : r.artifacts) {
            std::string bytes = read_file(out / a);
            arts.push_back({{"path", a}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
        }
        json params = json::object();
        for (const auto& s : plan.scenarios)
            if (s.id == r.id)
                for (const auto& [k, v] : s.params) params[k] = v;
        scen.push_back({{"id", r.id}, {"kind", to_string(r.kind)}, {"status", to_string(r.status)},
                        {"message", r.message}, {"params", params}, {"artifacts", arts}});
        timing["scenarios"][r.id] = r.seconds;
        total += r.seconds;
    }
    manifest["scenarios"] = scen;
    timing["total_seconds"] = total;
    std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";
    std::ofstream(out / "timing.json") << timing.dump(2) << "\n";
    if (results_out) *results_out = std::move(results);
    return code;
}

}  // namespace rdlab::cli
