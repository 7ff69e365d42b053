#include "rdlab/reaction.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rdlab/errors.hpp"
#include "rdlab/iterlog.hpp"

namespace rdlab {

namespace {

constexpr double kE = std::numbers::e;

// log(1 + e^s) without overflow
double log1p_exp(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

// log(e + e^s)
double log_e_plus_exp(double s) { return 1.0 + log1p_exp(s - 1.0); }

std::shared_ptr<const Absorption> make_power(double p) {
    if (!(p > 1.0)) throw DomainError("power absorption needs p > 1, got " + std::to_string(p));
    auto a = std::make_shared<Absorption>();
    a->value = [p](double u) { return u > 0 ? std::pow(u, p) : 0.0; };
    a->deriv = [p](double u) { return u > 0 ? p * std::pow(u, p - 1.0) : 0.0; };
    a->rate_log = [p](double s) { return std::exp((p - 1.0) * s); };
    a->convex = true;
    return a;
}

// h(u)/u = (prod_{i<=m} L_i)^2 L_{m+1}^{2+eps} with L_1 = s
double iterlog_rate(int m, double eps, double s) {
    double prod = 1.0;
    double L = s;
    for (int i = 1; i <= m; ++i) {
        prod *= L;
        L = std::log(L);
    }
    return prod * prod * std::pow(L, 2.0 + eps);
}

// h'(u) u / h(u) = 1 + 2 sum_{i<=m} 1/(L_1..L_i) + (2+eps)/(L_1..L_{m+1})
double iterlog_log_slope(int m, double eps, double s) {
    double acc = 1.0;
    double prod = 1.0;
    double L = s;
    for (int i = 1; i <= m + 1; ++i) {
        prod *= L;
        acc += (i <= m ? 2.0 : 2.0 + eps) / prod;
        L = std::log(L);
    }
    return acc;
}

std::shared_ptr<const Absorption> make_iterlog(int m, double eps) {
    if (m < 0) throw DomainError("iterated-log absorption needs m >= 0");
    if (!(eps > 0)) throw DomainError("iterated-log absorption needs eps > 0");
    const double us = 2.0 * iter_exp(m + 1, 0.0);
    const double rate_s = iterlog_rate(m, eps, std::log(us));
    auto a = std::make_shared<Absorption>();
    a->splice = us;
    a->value = [=](double u) {
        if (u < us) return rate_s * u;
        return u * iterlog_rate(m, eps, std::log(u));
    };
    a->deriv = [=](double u) {
        if (u < us) return rate_s;
        double s = std::log(u);
        return iterlog_rate(m, eps, s) * iterlog_log_slope(m, eps, s);
    };
    a->rate_log = [=](double s) {
        if (s < std::log(us)) return rate_s;
        return iterlog_rate(m, eps, s);
    };
    a->convex = (m == 0);
    return a;
}

std::shared_ptr<const Absorption> make_shifted_log(double q) {
    if (!(q >= 0)) throw DomainError("shifted log absorption needs q >= 0");
    auto a = std::make_shared<Absorption>();
    a->value = [q](double u) {
        if (u <= 0) return u;  // slope 1 at the origin
        return u * std::pow(std::log(kE + u), q);
    };
    a->deriv = [q](double u) {
        if (u <= 0) return 1.0;
        double l = std::log(kE + u);
        return std::pow(l, q) + q * u * std::pow(l, q - 1.0) / (kE + u);
    };
    a->rate_log = [q](double s) { return std::pow(log_e_plus_exp(s), q); };
    a->convex = true;
    return a;
}

// S(u) for W = exp^{(level+1)}(x): W''/W written in terms of u = W
double double_exp_rate(int level, double s) {
    // g_level = s, g_{k-1} = log g_k
    std::vector<double> g(level + 1);
    g[level] = s;
    for (int k = level; k > 1; --k) g[k - 1] = std::log(g[k]);
    double P = 1.0;
    for (int k = 1; k <= level; ++k) P *= g[k];
    double sum = 0.0;
    double partial = 1.0;
    for (int k = 1; k <= level; ++k) {
        sum += partial;
        partial *= g[k];
    }
    return P * P + P * sum;
}

std::shared_ptr<const Absorption> make_double_exp(int level) {
    if (level < 1) throw DomainError("double exponential law needs level >= 1");
    const double floor_u = iter_exp(level, 0.0);
    const double floor_s = std::log(floor_u);
    auto a = std::make_shared<Absorption>();
    a->splice = floor_u;
    a->rate_log = [=](double s) { return s <= floor_s ? 0.0 : double_exp_rate(level, s); };
    a->value = [=](double u) { return u <= floor_u ? 0.0 : u * double_exp_rate(level, std::log(u)); };
    a->deriv = [=](double u) {
        if (u <= floor_u) return 0.0;
        double s = std::log(u);
        double h = 1e-5 * std::max(1.0, std::abs(s));
        double lo = std::max(s - h, floor_s);
        double dS = (double_exp_rate(level, s + h) - double_exp_rate(level, lo)) / (s + h - lo);
        return double_exp_rate(level, s) + dS;
    };
    a->convex = false;
    return a;
}

std::shared_ptr<const Absorption> make_sqrt_drift(double eps) {
    auto a = std::make_shared<Absorption>();
    const double e = 0.5 + eps;
    a->value = [e](double u) {
        if (u <= 0) return 2.0;
        return 2.0 + 2.0 * std::pow(1.0 + u, e) * std::sqrt(u);
    };
    a->deriv = [e](double u) {
        if (u <= 0) return std::numeric_limits<double>::infinity();
        return 2.0 * (e * std::pow(1.0 + u, e - 1.0) * std::sqrt(u) +
                      std::pow(1.0 + u, e) / (2.0 * std::sqrt(u)));
    };
    a->rate_log = [e](double s) {
        return 2.0 * std::exp(-s) + 2.0 * std::exp(e * log1p_exp(s) - 0.5 * s);
    };
    a->convex = false;
    a->zero_at_origin = false;
    a->lipschitz = false;
    return a;
}

std::shared_ptr<const Absorption> make_sqrt_drift_regularized(double eps) {
    auto a = std::make_shared<Absorption>();
    a->value = [eps](double u) {
        if (u <= 0) return 2.0 * u;
        return 2.0 * u * std::pow(1.0 + u, eps);
    };
    a->deriv = [eps](double u) {
        if (u <= 0) return 2.0;
        return 2.0 * std::pow(1.0 + u, eps) + 2.0 * eps * u * std::pow(1.0 + u, eps - 1.0);
    };
    a->rate_log = [eps](double s) { return 2.0 * std::exp(eps * log1p_exp(s)); };
    a->convex = true;
    return a;
}

std::shared_ptr<const Absorption> make_linear() {
    auto a = std::make_shared<Absorption>();
    a->value = [](double u) { return u; };
    a->deriv = [](double) { return 1.0; };
    a->rate_log = [](double) { return 1.0; };
    a->convex = true;
    return a;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

const char* to_string(TermKind k) {
    switch (k) {
        case TermKind::LinearMinusPower: return "LinearMinusPower";
        case TermKind::LinearMinusIterLog: return "LinearMinusIterLog";
        case TermKind::ExplicitTable: return "ExplicitTable";
        case TermKind::Custom: return "Custom";
    }
    return "?";
}

const char* to_string(TableEntry e) {
    switch (e) {
        case TableEntry::None: return "none";
        case TableEntry::Linear: return "linear";
        case TableEntry::ShiftedLogPower: return "shifted_log";
        case TableEntry::DoubleExponential: return "double_exp";
        case TableEntry::SqrtDrift: return "sqrt_drift";
        case TableEntry::SqrtDriftRegularized: return "sqrt_drift_reg";
    }
    return "?";
}

ReactionTerm ReactionTerm::linear_minus_power(Coefficient V, Coefficient gamma, double p,
                                              std::string id) {
    ReactionTerm t;
    t.kind_ = TermKind::LinearMinusPower;
    t.id_ = std::move(id);
    t.V_ = std::move(V);
    t.gamma_ = std::move(gamma);
    t.power_p_ = p;
    t.absorption_ = make_power(p);
    return t;
}

ReactionTerm ReactionTerm::linear_minus_iter_log(Coefficient V, Coefficient gamma, int m,
                                                 double eps, std::string id) {
    ReactionTerm t;
    t.kind_ = TermKind::LinearMinusIterLog;
    t.id_ = std::move(id);
    t.V_ = std::move(V);
    t.gamma_ = std::move(gamma);
    t.iter_m_ = m;
    t.eps_ = eps;
    t.absorption_ = make_iterlog(m, eps);
    return t;
}

ReactionTerm ReactionTerm::table(TableEntry entry, double param, Coefficient V, Coefficient gamma,
                                 std::string id) {
    ReactionTerm t;
    t.kind_ = TermKind::ExplicitTable;
    t.entry_ = entry;
    t.id_ = std::move(id);
    t.V_ = std::move(V);
    t.gamma_ = std::move(gamma);
    t.table_param_ = param;
    switch (entry) {
        case TableEntry::Linear: t.absorption_ = make_linear(); break;
        case TableEntry::ShiftedLogPower: t.absorption_ = make_shifted_log(param); break;
        case TableEntry::DoubleExponential:
            t.absorption_ = make_double_exp(static_cast<int>(param));
            break;
        case TableEntry::SqrtDrift:
            t.eps_ = param;
            t.absorption_ = make_sqrt_drift(param);
            break;
        case TableEntry::SqrtDriftRegularized:
            t.eps_ = param;
            t.absorption_ = make_sqrt_drift_regularized(param);
            break;
        case TableEntry::None: throw DomainError("table term needs an entry");
    }
    return t;
}

ReactionTerm ReactionTerm::custom(Fn f, std::string id, bool zero_at_origin, Fn du) {
    ReactionTerm t;
    t.kind_ = TermKind::Custom;
    t.id_ = std::move(id);
    t.custom_ = std::move(f);
    t.custom_du_ = std::move(du);
    t.custom_zero_ = zero_at_origin;
    auto a = std::make_shared<Absorption>();
    a->zero_at_origin = zero_at_origin;
    t.absorption_ = a;
    return t;
}

ReactionTerm ReactionTerm::shifted_log_power(double q, std::string id) {
    return table(TableEntry::ShiftedLogPower, q, Coefficient::constant(0.0),
                 Coefficient::constant(1.0), std::move(id));
}

ReactionTerm ReactionTerm::pure_power(double gamma, double p, std::string id) {
    return linear_minus_power(Coefficient::constant(0.0), Coefficient::constant(gamma), p,
                              std::move(id));
}

ReactionTerm ReactionTerm::linear_decay(std::string id) {
    return table(TableEntry::Linear, 0.0, Coefficient::constant(0.0), Coefficient::constant(1.0),
                 std::move(id));
}

ReactionTerm ReactionTerm::zero(std::string id) {
    return custom([](double, double) { return 0.0; }, std::move(id), true,
                  [](double, double) { return 0.0; });
}

double ReactionTerm::operator()(double x, double u) const {
    if (kind_ == TermKind::Custom) return custom_(x, u);
    return V_(x) * u - gamma_(x) * absorption_->value(u);
}

double ReactionTerm::du(double x, double u) const {
    if (kind_ == TermKind::Custom) {
        if (custom_du_) return custom_du_(x, u);
        double h = 1e-6 * std::max(1.0, std::abs(u));
        return (custom_(x, u + h) - custom_(x, u - h)) / (2 * h);
    }
    return V_(x) - gamma_(x) * absorption_->deriv(u);
}

double ReactionTerm::rate_log(double x, double log_u) const {
    if (kind_ == TermKind::Custom) {
        double u = std::exp(log_u);
        return custom_(x, u) / u;
    }
    return V_(x) - gamma_(x) * absorption_->rate_log(log_u);
}

bool ReactionTerm::concave_in_u() const {
    if (kind_ == TermKind::Custom) return false;
    return absorption_->convex;
}

bool ReactionTerm::vanishes_at_zero() const {
    if (kind_ == TermKind::Custom) return custom_zero_;
    return absorption_->zero_at_origin;
}

bool ReactionTerm::lipschitz() const {
    return kind_ == TermKind::Custom ? true : absorption_->lipschitz;
}

std::string ReactionTerm::describe() const {
    std::ostringstream os;
    os << id_ << " [" << to_string(kind_);
    switch (kind_) {
        case TermKind::LinearMinusPower: os << " p=" << power_p_; break;
        case TermKind::LinearMinusIterLog: os << " m=" << iter_m_ << " eps=" << eps_; break;
        case TermKind::ExplicitTable:
            os << " entry=" << to_string(entry_) << " param=" << fmt(table_param_);
            break;
        case TermKind::Custom: break;
    }
    if (kind_ != TermKind::Custom) os << " V=" << V_.spec() << " gamma=" << gamma_.spec();
    os << "]";
    return os.str();
}

ReactionTerm parse_term(const std::map<std::string, std::string>& block, const std::string& id) {
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = block.find(key);
        if (it == block.end()) throw ConfigError("term '" + id + "' is missing key '" + key + "'");
        return it->second;
    };
    auto num = [&](const std::string& key) {
        const std::string& s = get(key);
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("term '" + id + "': key '" + key + "' is not a number: " + s);
        }
    };
    auto coef = [&](const std::string& key, double dflt) {
        auto it = block.find(key);
        return it == block.end() ? Coefficient::constant(dflt) : parse_coefficient(it->second);
    };
    for (const auto& [key, _] : block) {
        static const char* known[] = {"kind", "V", "gamma", "p", "m", "eps", "entry", "param"};
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("term '" + id + "': unknown key '" + key + "'");
    }
    const std::string& kind = get("kind");
    try {
        if (kind == "power")
            return ReactionTerm::linear_minus_power(coef("V", 0.0), coef("gamma", 1.0), num("p"), id);
        if (kind == "iterlog")
            return ReactionTerm::linear_minus_iter_log(coef("V", 0.0), coef("gamma", 1.0),
                                                       static_cast<int>(num("m")), num("eps"), id);
        if (kind == "table") {
            const std::string& e = get("entry");
            double param = block.count("param") ? num("param") : 0.0;
            TableEntry entry = TableEntry::None;
            if (e == "linear") entry = TableEntry::Linear;
            else if (e == "shifted_log") entry = TableEntry::ShiftedLogPower;
            else if (e == "double_exp") entry = TableEntry::DoubleExponential;
            else if (e == "sqrt_drift") entry = TableEntry::SqrtDrift;
            else if (e == "sqrt_drift_reg") entry = TableEntry::SqrtDriftRegularized;
            else throw ConfigError("term '" + id + "': unknown table entry '" + e + "'");
            return ReactionTerm::table(entry, param, coef("V", 0.0), coef("gamma", 1.0), id);
        }
    } catch (const DomainError& e) {
        throw ConfigError("term '" + id + "': " + e.what());
    }
    throw ConfigError("term '" + id + "': unknown kind '" + kind + "'");
}

double lipschitz_probe(const ReactionTerm& term, double x_extent, double u_max, int n) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = -x_extent + 2.0 * x_extent * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            double u = u_max * j / (n - 1);
            double h = 1e-6 * std::max(1.0, u);
            double slope = std::abs(term(x, u + h) - term(x, u)) / h;
            worst = std::max(worst, slope);
        }
    }
    return worst;
}

}  // namespace rdlab
