#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rdlab/operator1d.hpp"
#include "rdlab/reaction.hpp"

namespace rdlab {

/// Grid function on a uniform grid over [x_lo, x_hi] at time t.
struct Field1D {
    double x_lo = 0.0, x_hi = 1.0, t = 0.0;
    std::vector<double> x, u;

    static Field1D sample(const std::function<double(double)>& g, double x_lo, double x_hi,
                          std::size_t nx, double t = 0.0);
    std::size_t nx() const { return x.size(); }
    double dx() const { return (x_hi - x_lo) / static_cast<double>(x.size() - 1); }
    /// linear interpolation
    double at(double xq) const;
};

/// Dirichlet data, possibly time dependent.
struct Dirichlet {
    std::function<double(double)> left = [](double) { return 0.0; };
    std::function<double(double)> right = [](double) { return 0.0; };
    bool time_dependent = false;

    static Dirichlet constant(double l, double r);
    static Dirichlet zero() { return constant(0.0, 0.0); }
    static Dirichlet functions(std::function<double(double)> l, std::function<double(double)> r);
};

struct SolverOptions {
    double dx = 0.01;
    double dt = 1e-3;
    /// first step of a geometric ramp up to dt; 0 disables the ramp
    double dt_start = 0.0;
    double dt_growth = 1.25;
    double newton_tol = 1e-11;
    int newton_max = 60;
    /// negativity beyond -neg_tol * max(1, max|u|) is an error
    double neg_tol = 1e-9;
    int max_split_depth = 16;
};

struct StepStats {
    long steps = 0;
    long newton_iterations = 0;
    long splits = 0;
    long euler_fallbacks = 0;
};

/// Time-independent source added to the reaction (forcing of the truncated problems).
using Forcing = std::function<double(double)>;

/// One step of length dt: L-stable two-stage SDIRK with the diffusion and drift implicit
/// and the reaction solved by damped Newton inside each stage. A stage whose data would turn
/// negative is retried on two half steps; the innermost level uses backward Euler.
Field1D step(const Field1D& field, const Operator1D& op, const ReactionTerm& term, double dt,
             const Dirichlet& bc = Dirichlet::zero(), const Forcing& forcing = {},
             const SolverOptions& opts = {}, StepStats* stats = nullptr);

struct Trajectory {
    std::vector<double> x;
    std::vector<double> times;
    std::vector<std::vector<double>> frames;
    StepStats stats;
    bool incompatible_start = false;

    double value(std::size_t frame, double xq) const;
    Field1D field(std::size_t frame) const;
};

/// u_t = L u + f(x,u) + forcing on [x_lo, x_hi] with Dirichlet data; frames at the output times
/// (t = 0 is always the first frame).
Trajectory solve_dirichlet(const std::function<double(double)>& g, const Operator1D& op,
                           const ReactionTerm& term, double x_lo, double x_hi,
                           const std::vector<double>& outputs, const Dirichlet& bc = Dirichlet::zero(),
                           const SolverOptions& opts = {}, const Forcing& forcing = {});

/// Truncated forced problem on [-2m, 2m] with zero Dirichlet data.
struct ForcedProblemSpec {
    int m = 2;
    double k = 1.0;
    std::function<double(double)> W_ref = [](double) { return 0.0; };

    /// 0 on |x| <= m and |x| >= 2m+1, k on m+1 <= |x| <= 2m, smoothstep collars between
    double psi(double x) const;
    /// 0 on |x| <= m, m^2 W on m+1 <= |x| <= 2m, smoothstep collar between
    double g(double x) const;
    void validate() const;
};

double smoothstep(double z);

Trajectory solve_forced(const ForcedProblemSpec& spec, const Operator1D& op,
                        const ReactionTerm& term, const std::vector<double>& outputs,
                        const SolverOptions& opts = {});

struct MinimalSolutionReport {
    std::vector<double> ladder;
    std::vector<double> probe_values;
    std::vector<double> gaps;
    double probe_x = 0.0, T = 1.0;
    Trajectory last;
};

/// Increasing limit of zero-Dirichlet problems on [-X, X] over the ladder, probed at (probe_x, T).
MinimalSolutionReport minimal_solution(const std::function<double(double)>& g, const Operator1D& op,
                                       const ReactionTerm& term, const std::vector<double>& ladder,
                                       double T, const SolverOptions& opts = {},
                                       double probe_x = 0.0, double gap_tol = 1e-6);

enum class UniquenessVerdict { NoNontrivialFound, NontrivialWitness };
const char* to_string(UniquenessVerdict v);

struct UniquenessOptions {
    double T = 1.0;
    double probe_x = 0.0;
    double theta = 1e-3;
    double decay_factor = 1e-2;
    /// the probe counts as stable over the last two m rungs when their relative gap is below this
    double stable_rel = 0.1;
    double k_start = 1.0;
    double k_max = 1e12;
    /// k is doubled until the probe changes by less than this, relatively
    double k_rel_tol = 1e-3;
    /// grid points per unit length are fixed across the ladder
    SolverOptions solver{0.05, 1e-2, 1e-6};
};

struct UniquenessRung {
    int m = 0;
    double k_used = 0.0;
    double value = 0.0;
    bool k_converged = false;
    std::vector<std::pair<double, double>> k_history;
};

struct UniquenessReport {
    UniquenessVerdict verdict = UniquenessVerdict::NoNontrivialFound;
    std::vector<UniquenessRung> rungs;
    double theta = 0.0;
    /// Aitken limit of the last three rungs when their gaps contract, else the last value
    double extrapolated = 0.0;
    std::string reason;
};

/// Runs the forced problems over the m ladder, doubling k per rung until the probe settles.
UniquenessReport uniqueness_probe(const Operator1D& op, const ReactionTerm& term,
                                  const std::vector<int>& m_ladder,
                                  const std::function<double(double)>& W_ref,
                                  const UniquenessOptions& opts = {});

}  // namespace rdlab
