#pragma once

#include <map>
#include <optional>
#include <string>

#include "rdlab/coefficient.hpp"

namespace rdlab {

/// Claimed growth bounds a(x) <= C_a (1+x^2) and |b(x)| <= C_b (1+|x|).
struct GrowthCert {
    double C_a = 1.0;
    double C_b = 1.0;
};

/// Observed growth of the coefficients on expanding windows.
struct GrowthProbe {
    double a_ratio = 0.0;   // sup a(x)/(1+x^2) on the largest window
    double b_ratio = 0.0;   // sup |b(x)|/(1+|x|) on the largest window
    bool a_bounded = true;
    bool b_bounded = true;  // drift grows at most linearly
};

/// L = a(x) d^2/dx^2 + b(x) d/dx in one space dimension.
class Operator1D {
public:
    Operator1D(Coefficient a, Coefficient b, std::optional<GrowthCert> cert = std::nullopt,
               std::string id = "L");

    static Operator1D laplacian(std::string id = "laplacian");

    double a(double x) const { return a_(x); }
    double b(double x) const { return b_(x); }
    const Coefficient& a_coef() const { return a_; }
    const Coefficient& b_coef() const { return b_; }
    const std::optional<GrowthCert>& growth_cert() const { return cert_; }
    const std::string& id() const { return id_; }
    std::string describe() const;

    /// a(x) > 0 on n probes spanning [-X, X].
    bool nondegenerate_on(double X, int n = 1001) const;
    /// The growth certificate (if any) holds on n probes spanning [-X, X].
    bool certificate_holds_on(double X, int n = 1001) const;
    /// Ratios on windows 10, 100, 1000; a ratio counts as unbounded if it keeps growing.
    GrowthProbe probe_growth() const;

private:
    Coefficient a_;
    Coefficient b_;
    std::optional<GrowthCert> cert_;
    std::string id_;
};

/// Keys: a, b (coefficient specs, defaults 1 and 0), Ca, Cb (optional certificate).
Operator1D parse_operator(const std::map<std::string, std::string>& block, const std::string& id);

}  // namespace rdlab
