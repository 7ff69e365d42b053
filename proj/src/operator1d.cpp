#include "rdlab/operator1d.hpp"

#include <cmath>

#include "rdlab/errors.hpp"
#include "rdlab/numeric.hpp"

namespace rdlab {

Operator1D::Operator1D(Coefficient a, Coefficient b, std::optional<GrowthCert> cert, std::string id)
    : a_(std::move(a)), b_(std::move(b)), cert_(cert), id_(std::move(id)) {}

Operator1D Operator1D::laplacian(std::string id) {
    return Operator1D(Coefficient::constant(1.0), Coefficient::constant(0.0), GrowthCert{1.0, 0.0},
                      std::move(id));
}

std::string Operator1D::describe() const {
    return id_ + " [a=" + a_.spec() + " b=" + b_.spec() + "]";
}

bool Operator1D::nondegenerate_on(double X, int n) const {
    for (double x : linspace(-X, X, n))
        if (!(a_(x) > 0)) return false;
    return true;
}

bool Operator1D::certificate_holds_on(double X, int n) const {
    if (!cert_) return true;
    for (double x : linspace(-X, X, n)) {
        if (a_(x) > cert_->C_a * (1.0 + x * x) * (1.0 + 1e-12)) return false;
        if (std::abs(b_(x)) > cert_->C_b * (1.0 + std::abs(x)) * (1.0 + 1e-12)) return false;
    }
    return true;
}

GrowthProbe Operator1D::probe_growth() const {
    double ra[3], rb[3];
    const double windows[3] = {10.0, 100.0, 1000.0};
    for (int k = 0; k < 3; ++k) {
        ra[k] = rb[k] = 0.0;
        for (double x : linspace(-windows[k], windows[k], 2001)) {
            ra[k] = std::max(ra[k], std::abs(a_(x)) / (1.0 + x * x));
            rb[k] = std::max(rb[k], std::abs(b_(x)) / (1.0 + std::abs(x)));
        }
    }
    auto growing = [](const double* r) { return r[2] > 1.5 * r[1] && r[1] > 1.5 * r[0]; };
    GrowthProbe p;
    p.a_ratio = ra[2];
    p.b_ratio = rb[2];
    p.a_bounded = !growing(ra);
    p.b_bounded = !growing(rb);
    return p;
}

Operator1D parse_operator(const std::map<std::string, std::string>& block, const std::string& id) {
    for (const auto& [key, _] : block)
        if (key != "a" && key != "b" && key != "Ca" && key != "Cb")
            throw ConfigError("operator '" + id + "': unknown key '" + key + "'");
    auto coef = [&](const char* key, double dflt) {
        auto it = block.find(key);
        return it == block.end() ? Coefficient::constant(dflt) : parse_coefficient(it->second);
    };
    std::optional<GrowthCert> cert;
    if (block.count("Ca") || block.count("Cb")) {
        GrowthCert c;
        try {
            if (block.count("Ca")) c.C_a = std::stod(block.at("Ca"));
            if (block.count("Cb")) c.C_b = std::stod(block.at("Cb"));
        } catch (const std::exception&) {
            throw ConfigError("operator '" + id + "': Ca/Cb must be numbers");
        }
        cert = c;
    }
    return Operator1D(coef("a", 1.0), coef("b", 0.0), cert, id);
}

}  // namespace rdlab
