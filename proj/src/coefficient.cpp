#include "rdlab/coefficient.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "rdlab/errors.hpp"

namespace rdlab {

namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& s, std::string_view ctx) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + s + "' in coefficient '" +
                          std::string(ctx) + "'");
    }
}

}  // namespace

std::optional<Interval> Coefficient::bounds(double radius) const {
    if (!bounds_) return std::nullopt;
    return bounds_(radius);
}

Coefficient Coefficient::constant(double c) {
    return Coefficient([c](double) { return c; }, fmt_num(c),
                       [c](double) { return std::optional<Interval>(Interval{c, c}); }, true);
}

Coefficient Coefficient::sine(double a, double b) {
    auto bounds = [a, b](double R) -> std::optional<Interval> {
        double amp = std::abs(b);
        double reach = (R >= std::numbers::pi / 2) ? 1.0 : std::sin(R);
        return Interval{a - amp * reach, a + amp * reach};
    };
    return Coefficient([a, b](double x) { return a + b * std::sin(x); },
                       "sin(" + fmt_num(a) + "," + fmt_num(b) + ")", bounds, b == 0.0);
}

Coefficient Coefficient::weight(double c, double q) {
    auto bounds = [c, q](double R) -> std::optional<Interval> {
        double far = 1.0;
        if (std::isinf(R))
            far = q > 0 ? std::numeric_limits<double>::infinity() : (q < 0 ? 0.0 : 1.0);
        else
            far = std::pow(1.0 + R * R, q);
        double lo = c * std::min(1.0, far);
        double hi = c * std::max(1.0, far);
        if (c < 0) std::swap(lo, hi);
        return Interval{lo, hi};
    };
    return Coefficient([c, q](double x) { return c * std::pow(1.0 + x * x, q); },
                       "weight(" + fmt_num(c) + "," + fmt_num(q) + ")", bounds, q == 0.0);
}

Coefficient Coefficient::signed_weight(double c, double q) {
    auto bounds = [c, q](double R) -> std::optional<Interval> {
        double far = std::isinf(R) ? std::numeric_limits<double>::infinity()
                                   : std::abs(c) * std::pow(1.0 + R * R, q);
        return Interval{-far, far};
    };
    return Coefficient(
        [c, q](double x) {
            double s = (x > 0) - (x < 0);
            return c * std::pow(1.0 + x * x, q) * s;
        },
        "sweight(" + fmt_num(c) + "," + fmt_num(q) + ")", bounds, false);
}

Coefficient Coefficient::custom(Fn fn, std::string spec) {
    return Coefficient(std::move(fn), std::move(spec), {}, false);
}

Coefficient parse_coefficient(std::string_view text) {
    std::string t = trim(text);
    if (t.empty()) throw ConfigError("empty coefficient spec");
    auto open = t.find('(');
    if (open == std::string::npos) return Coefficient::constant(parse_number(t, text));
    if (t.back() != ')') throw ConfigError("unbalanced parentheses in coefficient '" + t + "'");
    std::string name = trim(t.substr(0, open));
    std::string inner = t.substr(open + 1, t.size() - open - 2);
    std::vector<double> args;
    std::stringstream ss(inner);
    std::string piece;
    while (std::getline(ss, piece, ',')) args.push_back(parse_number(trim(piece), text));
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw ConfigError("coefficient '" + name + "' expects " + std::to_string(n) +
                              " arguments, got " + std::to_string(args.size()));
    };
    if (name == "const") { need(1); return Coefficient::constant(args[0]); }
    if (name == "sin") { need(2); return Coefficient::sine(args[0], args[1]); }
    if (name == "weight") { need(2); return Coefficient::weight(args[0], args[1]); }
    if (name == "sweight") { need(2); return Coefficient::signed_weight(args[0], args[1]); }
    throw ConfigError("unknown coefficient kind '" + name + "'");
}

}  // namespace rdlab
