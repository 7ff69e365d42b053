#include "rdlab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "rdlab/errors.hpp"
#include "rdlab/tridiag.hpp"

namespace rdlab {

Field1D Field1D::sample(const std::function<double(double)>& g, double x_lo, double x_hi,
                        std::size_t nx, double t) {
    if (nx < 3 || !(x_hi > x_lo)) throw DomainError("field needs nx >= 3 and x_lo < x_hi");
    Field1D f;
    f.x_lo = x_lo;
    f.x_hi = x_hi;
    f.t = t;
    f.x.resize(nx);
    f.u.resize(nx);
    const double h = (x_hi - x_lo) / static_cast<double>(nx - 1);
    for (std::size_t i = 0; i < nx; ++i) {
        f.x[i] = i + 1 == nx ? x_hi : x_lo + h * static_cast<double>(i);
        f.u[i] = g(f.x[i]);
    }
    return f;
}

namespace {

double interp(const std::vector<double>& x, const std::vector<double>& u, double xq) {
    if (xq <= x.front()) return u.front();
    if (xq >= x.back()) return u.back();
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t j = static_cast<std::size_t>(it - x.begin());
    double w = (xq - x[j - 1]) / (x[j] - x[j - 1]);
    return (1 - w) * u[j - 1] + w * u[j];
}

}  // namespace

double Field1D::at(double xq) const { return interp(x, u, xq); }

Dirichlet Dirichlet::constant(double l, double r) {
    Dirichlet d;
    d.left = [l](double) { return l; };
    d.right = [r](double) { return r; };
    return d;
}

Dirichlet Dirichlet::functions(std::function<double(double)> l, std::function<double(double)> r) {
    Dirichlet d;
    d.left = std::move(l);
    d.right = std::move(r);
    d.time_dependent = true;
    return d;
}

namespace {

/// Discrete L on interior nodes: central second difference, upwinded drift.
struct Stencil {
    std::vector<double> lo, di, up;
};

Stencil build_stencil(const Operator1D& op, const std::vector<double>& x, double dx) {
    const std::size_t n = x.size();
    Stencil s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double a = op.a(x[i]), b = op.b(x[i]);
        if (!(a > 0)) throw DomainError("diffusion a(x) must be positive, a(" + std::to_string(x[i]) + ") = " + std::to_string(a));
        s.lo[i] = a / (dx * dx);
        s.up[i] = a / (dx * dx);
        s.di[i] = -2 * a / (dx * dx);
        if (b > 0) {
            s.up[i] += b / dx;
            s.di[i] -= b / dx;
        } else if (b < 0) {
            s.lo[i] -= b / dx;
            s.di[i] += b / dx;
        }
    }
    return s;
}

struct StageProblem {
    const Stencil& A;
    const std::vector<double>& x;
    const ReactionTerm& term;
    const std::vector<double>& psi;
    const SolverOptions& opts;
};

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

/// G(U) = U - c (A U + f(U) + psi) - rhs on the interior nodes
void stage_residual(const StageProblem& P, double c, const std::vector<double>& rhs,
                    const std::vector<double>& U, std::vector<double>& G) {
    const std::size_t n = U.size();
    G.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double Lu = P.A.lo[i] * U[i - 1] + P.A.di[i] * U[i] + P.A.up[i] * U[i + 1];
        double src = P.psi.empty() ? 0.0 : P.psi[i];
        G[i] = U[i] - c * (Lu + P.term(P.x[i], U[i]) + src) - rhs[i];
    }
}

/// Damped Newton for one implicit stage. U holds the guess (with boundary values set) on entry.
bool solve_stage(const StageProblem& P, double c, const std::vector<double>& rhs,
                 std::vector<double>& U, long& iterations) {
    const std::size_t n = U.size();
    const std::size_t m = n - 2;
    std::vector<double> G, Gn, Un;
    const double scale = std::max({1.0, sup_abs(rhs), sup_abs(U)});
    const double neg = -P.opts.neg_tol * scale;
    stage_residual(P, c, rhs, U, G);
    double gnorm = sup_abs(G);
    for (int it = 0; it < P.opts.newton_max; ++it) {
        ++iterations;
        Tridiag J(m);
        std::vector<double> r(m);
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t i = k + 1;
            J.lower[k] = -c * P.A.lo[i];
            J.upper[k] = -c * P.A.up[i];
            J.diag[k] = 1.0 - c * (P.A.di[i] + P.term.du(P.x[i], U[i]));
            r[k] = -G[i];
        }
        std::vector<double> d;
        try {
            d = solve_tridiag(J, r);
        } catch (const StabilityError&) {
            return false;
        }
        const double dnorm = sup_abs(d);
        if (!std::isfinite(dnorm)) return false;
        const double unorm = sup_abs(U);
        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            Un = U;
            bool nonneg = true;
            for (std::size_t k = 0; k < m; ++k) {
                Un[k + 1] += lambda * d[k];
                if (!(Un[k + 1] >= neg)) nonneg = false;
            }
            if (nonneg) {
                stage_residual(P, c, rhs, Un, Gn);
                double gn = sup_abs(Gn);
                bool small = lambda * dnorm <= 1e-6 * (1.0 + unorm);
                if (std::isfinite(gn) && (gn <= (1.0 - 1e-4 * lambda) * gnorm || small)) {
                    accepted = true;
                    gnorm = gn;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) return false;
        U.swap(Un);
        G.swap(Gn);
        if (lambda * dnorm <= P.opts.newton_tol * (1.0 + sup_abs(U))) return true;
    }
    return false;
}

struct Stepper {
    const Operator1D& op;
    const ReactionTerm& term;
    const Dirichlet& bc;
    const SolverOptions& opts;
    const Stencil& A;
    const std::vector<double>& x;
    const std::vector<double>& psi;
    StepStats& stats;

    StageProblem problem() const { return {A, x, term, psi, opts}; }

    bool finite_nonneg(const std::vector<double>& U, double scale) const {
        for (double v : U)
            if (!std::isfinite(v) || v < -opts.neg_tol * scale) return false;
        return true;
    }

    void set_bc(std::vector<double>& U, double t) const {
        U.front() = bc.left(t);
        U.back() = bc.right(t);
    }

    bool sdirk(const std::vector<double>& u, double t, double dt, std::vector<double>& out) {
        static const double g = 1.0 - 1.0 / std::sqrt(2.0);
        const double scale = std::max(1.0, sup_abs(u));
        StageProblem P = problem();
        std::vector<double> U1 = u;
        set_bc(U1, t + g * dt);
        if (!solve_stage(P, g * dt, u, U1, stats.newton_iterations)) return false;
        std::vector<double> rhs2(u.size());
        const double w = (1.0 - g) / g;
        for (std::size_t i = 0; i < u.size(); ++i) rhs2[i] = u[i] + w * (U1[i] - u[i]);
        std::vector<double> U2 = U1;
        set_bc(U2, t + dt);
        if (!solve_stage(P, g * dt, rhs2, U2, stats.newton_iterations)) return false;
        if (!finite_nonneg(U2, scale)) return false;
        out.swap(U2);
        return true;
    }

    void backward_euler(const std::vector<double>& u, double t, double dt, std::vector<double>& out) {
        ++stats.euler_fallbacks;
        StageProblem P = problem();
        std::vector<double> U = u;
        set_bc(U, t + dt);
        if (!solve_stage(P, dt, u, U, stats.newton_iterations))
            throw NewtonDivergenceError("reaction substep failed at t = " + std::to_string(t) +
                                        " with dt = " + std::to_string(dt));
        if (!finite_nonneg(U, std::max(1.0, sup_abs(u))))
            throw StabilityError("non-finite or negative values at t = " + std::to_string(t + dt));
        out.swap(U);
    }

    void advance(const std::vector<double>& u, double t, double dt, int depth, std::vector<double>& out) {
        if (sdirk(u, t, dt, out)) return;
        if (depth >= opts.max_split_depth) {
            backward_euler(u, t, dt, out);
            return;
        }
        ++stats.splits;
        std::vector<double> mid;
        advance(u, t, 0.5 * dt, depth + 1, mid);
        advance(mid, t + 0.5 * dt, 0.5 * dt, depth + 1, out);
    }
};

std::vector<double> sample_forcing(const Forcing& forcing, const std::vector<double>& x) {
    std::vector<double> psi;
    if (!forcing) return psi;
    psi.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) psi[i] = forcing(x[i]);
    return psi;
}

void check_evolvable(const ReactionTerm& term) {
    if (!term.lipschitz())
        throw DomainError("term '" + term.id() + "' is not locally Lipschitz and is not evolved in time");
}

}  // namespace

Field1D step(const Field1D& field, const Operator1D& op, const ReactionTerm& term, double dt,
             const Dirichlet& bc, const Forcing& forcing, const SolverOptions& opts, StepStats* stats) {
    if (!(dt > 0)) throw DomainError("time step must be positive");
    check_evolvable(term);
    StepStats local;
    StepStats& st = stats ? *stats : local;
    Stencil A = build_stencil(op, field.x, field.dx());
    std::vector<double> psi = sample_forcing(forcing, field.x);
    Stepper s{op, term, bc, opts, A, field.x, psi, st};
    Field1D out = field;
    s.advance(field.u, field.t, dt, 0, out.u);
    out.t = field.t + dt;
    ++st.steps;
    return out;
}

double Trajectory::value(std::size_t frame, double xq) const { return interp(x, frames.at(frame), xq); }

Field1D Trajectory::field(std::size_t frame) const {
    Field1D f;
    f.x = x;
    f.u = frames.at(frame);
    f.x_lo = x.front();
    f.x_hi = x.back();
    f.t = times.at(frame);
    return f;
}

Trajectory solve_dirichlet(const std::function<double(double)>& g, const Operator1D& op,
                           const ReactionTerm& term, double x_lo, double x_hi,
                           const std::vector<double>& outputs, const Dirichlet& bc,
                           const SolverOptions& opts, const Forcing& forcing) {
    check_evolvable(term);
    if (!(opts.dx > 0) || !(opts.dt > 0)) throw DomainError("solver needs dx > 0 and dt > 0");
    const auto nx = static_cast<std::size_t>(std::lround((x_hi - x_lo) / opts.dx)) + 1;
    Field1D field = Field1D::sample(g, x_lo, x_hi, std::max<std::size_t>(nx, 3));
    for (double v : field.u)
        if (!(v >= 0) || !std::isfinite(v)) throw DomainError("initial data must be finite and nonnegative");

    Trajectory tr;
    tr.x = field.x;
    tr.times.push_back(0.0);
    tr.frames.push_back(field.u);
    const double scale = std::max(1.0, sup_abs(field.u));
    tr.incompatible_start = std::abs(field.u.front() - bc.left(0.0)) > 1e-12 * scale ||
                            std::abs(field.u.back() - bc.right(0.0)) > 1e-12 * scale;

    Stencil A = build_stencil(op, field.x, field.dx());
    std::vector<double> psi = sample_forcing(forcing, field.x);
    Stepper s{op, term, bc, opts, A, field.x, psi, tr.stats};

    std::vector<double> outs = outputs;
    std::sort(outs.begin(), outs.end());
    double t = 0.0;
    double h = opts.dt_start > 0 ? std::min(opts.dt_start, opts.dt) : opts.dt;
    std::vector<double> u = field.u, next;
    for (double T : outs) {
        if (!(T > 0)) continue;
        while (T - t > 1e-12 * T) {
            double step_len = std::min(h, T - t);
            if (T - t - step_len < 0.05 * step_len) step_len = T - t;
            s.advance(u, t, step_len, 0, next);
            u.swap(next);
            t += step_len;
            ++tr.stats.steps;
            h = std::min(opts.dt, h * opts.dt_growth);
        }
        t = T;
        tr.times.push_back(T);
        tr.frames.push_back(u);
    }
    return tr;
}

double smoothstep(double z) {
    if (z <= 0) return 0.0;
    if (z >= 1) return 1.0;
    return z * z * (3 - 2 * z);
}

double ForcedProblemSpec::psi(double x) const {
    const double r = std::abs(x), M = m;
    if (r <= M || r >= 2 * M + 1) return 0.0;
    if (r < M + 1) return k * smoothstep(r - M);
    if (r <= 2 * M) return k;
    return k * (1.0 - smoothstep(r - 2 * M));
}

double ForcedProblemSpec::g(double x) const {
    const double r = std::abs(x), M = m;
    if (r <= M) return 0.0;
    double w = static_cast<double>(m) * m * W_ref(x);
    return r < M + 1 ? w * smoothstep(r - M) : w;
}

void ForcedProblemSpec::validate() const {
    if (m < 1) throw DomainError("forced problem needs m >= 1");
    if (!(k >= 0)) throw DomainError("forced problem needs k >= 0");
    for (double x : {0.0, m + 0.5, m + 1.0, 1.5 * m, 2.0 * m})
        if (!(W_ref(x) >= 0)) throw DomainError("reference solution must be nonnegative");
}

Trajectory solve_forced(const ForcedProblemSpec& spec, const Operator1D& op,
                        const ReactionTerm& term, const std::vector<double>& outputs,
                        const SolverOptions& opts) {
    spec.validate();
    const double X = 2.0 * spec.m;
    return solve_dirichlet([&](double x) { return spec.g(x); }, op, term, -X, X, outputs,
                           Dirichlet::zero(), opts, [&](double x) { return spec.psi(x); });
}

MinimalSolutionReport minimal_solution(const std::function<double(double)>& g, const Operator1D& op,
                                       const ReactionTerm& term, const std::vector<double>& ladder,
                                       double T, const SolverOptions& opts, double probe_x,
                                       double gap_tol) {
    if (ladder.size() < 2) throw DomainError("minimal solution needs at least two ladder rungs");
    for (std::size_t j = 1; j < ladder.size(); ++j)
        if (!(ladder[j] > ladder[j - 1])) throw DomainError("domain ladder must increase");
    MinimalSolutionReport rep;
    rep.ladder = ladder;
    rep.T = T;
    rep.probe_x = probe_x;
    for (double X : ladder) {
        Trajectory tr = solve_dirichlet(g, op, term, -X, X, {T}, Dirichlet::zero(), opts);
        rep.probe_values.push_back(tr.value(tr.frames.size() - 1, probe_x));
        rep.last = std::move(tr);
    }
    for (std::size_t j = 1; j < rep.probe_values.size(); ++j)
        rep.gaps.push_back(std::abs(rep.probe_values[j] - rep.probe_values[j - 1]));
    const double v = rep.probe_values.back();
    const double last = rep.gaps.back();
    bool decays = last <= gap_tol * std::max(1.0, std::abs(v));
    if (!decays && rep.gaps.size() >= 2) decays = last < rep.gaps[rep.gaps.size() - 2] && last <= 1e-2 * std::max(1.0, std::abs(v));
    if (!decays) {
        std::ostringstream os;
        os << "ladder gaps do not decay; last gap " << last << " at value " << v;
        throw NotConvergedError(os.str());
    }
    return rep;
}

const char* to_string(UniquenessVerdict v) {
    return v == UniquenessVerdict::NontrivialWitness ? "NontrivialWitness" : "NoNontrivialFound";
}

namespace {

UniquenessRung run_rung(const Operator1D& op, const ReactionTerm& term, int m,
                        const std::function<double(double)>& W_ref, const UniquenessOptions& o) {
    UniquenessRung r;
    r.m = m;
    auto probe = [&](double k) {
        ForcedProblemSpec spec{m, k, W_ref};
        Trajectory tr = solve_forced(spec, op, term, {o.T}, o.solver);
        return tr.value(tr.frames.size() - 1, o.probe_x);
    };
    const double floor = o.theta * o.decay_factor * 1e-3;
    double k = o.k_start;
    double prev = probe(k);
    r.k_history.emplace_back(k, prev);
    while (k * 2 <= o.k_max) {
        k *= 2;
        double cur = probe(k);
        r.k_history.emplace_back(k, cur);
        bool settled = std::abs(cur - prev) <= o.k_rel_tol * std::abs(cur) + floor;
        prev = cur;
        if (settled) {
            r.k_converged = true;
            break;
        }
    }
    r.k_used = k;
    r.value = prev;
    return r;
}

}  // namespace

UniquenessReport uniqueness_probe(const Operator1D& op, const ReactionTerm& term,
                                  const std::vector<int>& m_ladder,
                                  const std::function<double(double)>& W_ref,
                                  const UniquenessOptions& opts) {
    if (m_ladder.size() < 2) throw DomainError("uniqueness probe needs at least two m rungs");
    for (std::size_t j = 1; j < m_ladder.size(); ++j)
        if (m_ladder[j] <= m_ladder[j - 1]) throw DomainError("m ladder must increase");
    UniquenessReport rep;
    rep.theta = opts.theta;
    rep.rungs.resize(m_ladder.size());
    std::vector<std::exception_ptr> errors(m_ladder.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < m_ladder.size(); ++j) {
        try {
            rep.rungs[j] = run_rung(op, term, m_ladder[j], W_ref, opts);
        } catch (...) {
            errors[j] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::ostringstream data;
    for (auto& r : rep.rungs) data << " m=" << r.m << ":" << r.value << "(k=" << r.k_used << ")";
    const std::size_t n = rep.rungs.size();
    const double last = rep.rungs[n - 1].value, prev = rep.rungs[n - 2].value;
    rep.extrapolated = last;
    bool contracting = false;
    if (n >= 3) {
        const double d1 = prev - rep.rungs[n - 3].value, d2 = last - prev;
        const double rho = d1 != 0.0 ? d2 / d1 : 0.0;
        if (rho >= 0.0 && rho < 1.0) {
            contracting = true;
            rep.extrapolated = last + d2 * rho / (1.0 - rho);
        }
    }
    data << " extrapolated=" << rep.extrapolated;
    const bool settled = std::abs(last - prev) <= opts.stable_rel * last ||
                         (contracting && rep.extrapolated > opts.theta);
    if (last > opts.theta && prev > opts.theta && settled) {
        rep.verdict = UniquenessVerdict::NontrivialWitness;
        rep.reason = "probe settles above theta over the last two rungs;" + data.str();
        return rep;
    }
    bool geometric = true;
    for (std::size_t j = 1; j < n; ++j)
        geometric = geometric && rep.rungs[j].value <= 0.5 * rep.rungs[j - 1].value;
    if (last < opts.theta * opts.decay_factor && geometric) {
        rep.verdict = UniquenessVerdict::NoNontrivialFound;
        rep.reason = "probe decays geometrically below theta*decay;" + data.str();
        return rep;
    }
    throw InconclusiveError("uniqueness probe undecided:" + data.str());
}

}  // namespace rdlab
