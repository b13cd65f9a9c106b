#include "groupoidgen/flows.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "groupoidgen/linalg.hpp"

namespace groupoidgen {

namespace {

using Vec = std::vector<double>;
using Field = std::function<Vec(const Vec&)>;

void check_box(const Vec& state, double box) {
    for (double c : state) {
        if (!std::isfinite(c) || std::abs(c) > box) throw std::runtime_error("flow: state left the configured chart box");
    }
}

/// Classical fixed-step RK4 on [0, 1].
Trajectory rk4(const Field& f, const Vec& y0, int steps, double box) {
    Trajectory traj;
    traj.step_count = steps;
    traj.times.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    double h = 1.0 / static_cast<double>(steps);
    Vec y = y0;
    traj.times.push_back(0.0);
    traj.states.push_back(y);
    const std::size_t dim = y0.size();
    for (int k = 0; k < steps; ++k) {
        Vec k1 = f(y);
        Vec tmp(dim);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        Vec k2 = f(tmp);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        Vec k3 = f(tmp);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        Vec k4 = f(tmp);
        for (std::size_t i = 0; i < dim; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        check_box(y, box);
        traj.times.push_back(h * static_cast<double>(k + 1));
        traj.states.push_back(y);
    }
    return traj;
}

int even_steps(int steps) {
    if (steps < 16) throw std::invalid_argument("flow: need at least 16 steps");
    return steps % 2 == 0 ? steps : steps + 1;
}

Field poisson_field(const PoissonStructure& ps, double eps, const Vec& p) {
    return [&ps, eps, p](const Vec& x) {
        auto a = eval_bivector(ps, x);
        const int d = ps.dimension();
        Vec dx(static_cast<std::size_t>(d), 0.0);
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(j)];
            dx[static_cast<std::size_t>(i)] = 2.0 * eps * acc;
        }
        return dx;
    };
}

}  // namespace

Trajectory poisson_flow(const PoissonStructure& ps, double eps, const Vec& p, const Vec& x0, int steps,
                        const FlowOptions& opts) {
    if (static_cast<int>(p.size()) != ps.dimension() || static_cast<int>(x0.size()) != ps.dimension())
        throw std::invalid_argument("poisson_flow: dimension mismatch");
    steps = even_steps(steps);
    return rk4(poisson_field(ps, eps, p), x0, steps, opts.bounding_box);
}

std::vector<double> karasev_Q(const PoissonStructure& ps, double eps, const Vec& p, const Vec& x0, int steps,
                              const FlowOptions& opts) {
    Trajectory traj = poisson_flow(ps, eps, p, x0, steps, opts);
    const int n = traj.step_count;
    const int d = ps.dimension();
    double h = 1.0 / static_cast<double>(n);
    Vec acc(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k <= n; ++k) {
        double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        for (int i = 0; i < d; ++i) acc[static_cast<std::size_t>(i)] += w * traj.states[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < d; ++i) acc[static_cast<std::size_t>(i)] *= h / 3.0;
    return acc;
}

std::vector<double> symmetric_source(const PoissonStructure& ps, double eps, const Vec& p, const Vec& q, int steps,
                                     double newton_tol, const FlowOptions& opts) {
    const int d = ps.dimension();
    if (static_cast<int>(q.size()) != d) throw std::invalid_argument("symmetric_source: dimension mismatch");
    Vec x = q;  // the implicit function theorem guarantees a root nearby
    Vec fx(static_cast<std::size_t>(d));
    auto F = [&](const Vec& xc) {
        auto Qc = karasev_Q(ps, eps, p, xc, steps, opts);
        for (int i = 0; i < d; ++i) Qc[static_cast<std::size_t>(i)] -= q[static_cast<std::size_t>(i)];
        return Qc;
    };
    double last_norm = -1.0;
    for (int it = 0; it < 50; ++it) {
        fx = F(x);
        double rn = vec_norm(fx);
        if (rn <= newton_tol) return x;
        // central finite-difference Jacobian
        std::vector<double> jac(static_cast<std::size_t>(d * d));
        for (int j = 0; j < d; ++j) {
            double step = 1e-6 * (1.0 + std::abs(x[static_cast<std::size_t>(j)]));
            Vec xp = x, xm = x;
            xp[static_cast<std::size_t>(j)] += step;
            xm[static_cast<std::size_t>(j)] -= step;
            auto fp = F(xp);
            auto fm = F(xm);
            for (int i = 0; i < d; ++i)
                jac[static_cast<std::size_t>(i * d + j)] = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2.0 * step);
        }
        Vec delta;
        if (!matrix_solve(jac, fx, d, delta)) throw std::runtime_error("symmetric_source: singular Jacobian");
        double damp = (last_norm >= 0.0 && rn > last_norm) ? 0.5 : 1.0;
        for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] -= damp * delta[static_cast<std::size_t>(i)];
        last_norm = rn;
    }
    throw std::runtime_error("symmetric_source: Newton did not converge in 50 iterations");
}

EndpointReport endpoint_check(const GroupoidMaps& maps, const PoissonStructure& ps, double eps, const PhasePoint& pt,
                              int steps, const FlowOptions& opts) {
    EndpointReport rep;
    Vec s = maps.source(eps, pt);
    Vec t = maps.target(eps, pt);
    Trajectory traj = poisson_flow(ps, eps, pt.p, s, steps, opts);
    rep.x0 = traj.states.front();
    rep.x1 = traj.states.back();
    rep.endpoint_mismatch = vec_dist(rep.x1, t);
    rep.q_from_Q = vec_dist(maps.inverse_Q(eps, pt.p, rep.x0), pt.x);
    rep.q_from_Qt = vec_dist(maps.inverse_Qt(eps, pt.p, rep.x1), pt.x);
    return rep;
}

ExpMapResult exp_map(const GroupoidMaps& maps, double eps, const Vec& x0, const Vec& pbar, int steps) {
    const int d = maps.dimension();
    if (static_cast<int>(x0.size()) != d || static_cast<int>(pbar.size()) != d)
        throw std::invalid_argument("exp_map: dimension mismatch");
    steps = even_steps(steps);
    auto field = [&](const Vec& p) {
        Vec q = maps.inverse_Q(eps, p, x0);
        PhasePoint pq{p, q};
        auto jac = maps.jac_target_x(eps, pq);
        Vec dp(static_cast<std::size_t>(d), 0.0);
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int i = 0; i < d; ++i) acc += jac[static_cast<std::size_t>(i * d + j)] * pbar[static_cast<std::size_t>(i)];
            dp[static_cast<std::size_t>(j)] = acc;
        }
        return dp;
    };
    Vec p0(static_cast<std::size_t>(d), 0.0);
    Trajectory traj = rk4(field, p0, steps, 1e6);
    ExpMapResult res;
    res.input = pbar;
    res.output = traj.states.back();
    res.base = x0;
    res.identity_defect = vec_dist(res.output, pbar);
    return res;
}

ComparisonReport comparison_check(const GroupoidMaps& maps, const PoissonStructure& ps, double eps,
                                  const std::vector<PhasePoint>& sample, int steps, const FlowOptions& opts) {
    ComparisonReport rep;
    for (const auto& pt : sample) {
        Vec qk = karasev_Q(ps, eps, pt.p, pt.x, steps, opts);
        Vec qg = maps.inverse_Q(eps, pt.p, pt.x);
        double delta = vec_dist(qk, qg);
        rep.deltas.push_back(delta);
        rep.max_delta = std::max(rep.max_delta, delta);
    }
    return rep;
}

LiftReport hamiltonian_lift(const GroupoidMaps& maps, const PoissonStructure& ps, double eps, const MultiPoly& f,
                            const PhasePoint& start, int steps, const FlowOptions& opts) {
    const int d = maps.dimension();
    if (f.nvars() != d) throw std::invalid_argument("hamiltonian_lift: Hamiltonian variable count mismatch");
    steps = even_steps(steps);
    std::vector<MultiPoly> grad_f;
    for (int i = 0; i < d; ++i) grad_f.push_back(f.derivative(i));

    // Hamilton equations for H = -f o t:
    //   qdot = dH/dp = -(dt/dp)^T grad f(t),  pdot = -dH/dq = (dt/dq)^T grad f(t)
    auto field = [&](const Vec& state) {
        Vec p(state.begin(), state.begin() + d);
        Vec q(state.begin() + d, state.end());
        PhasePoint pq{p, q};
        Vec t = maps.target(eps, pq);
        Vec gf(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) gf[static_cast<std::size_t>(i)] = grad_f[static_cast<std::size_t>(i)].eval(t);
        auto jq = maps.jac_target_x(eps, pq);
        auto jp = maps.jac_target_p(eps, pq);
        Vec out(static_cast<std::size_t>(2 * d), 0.0);
        for (int j = 0; j < d; ++j) {
            double pdot = 0.0, qdot = 0.0;
            for (int i = 0; i < d; ++i) {
                pdot += jq[static_cast<std::size_t>(i * d + j)] * gf[static_cast<std::size_t>(i)];
                qdot -= jp[static_cast<std::size_t>(i * d + j)] * gf[static_cast<std::size_t>(i)];
            }
            out[static_cast<std::size_t>(j)] = pdot;
            out[static_cast<std::size_t>(d + j)] = qdot;
        }
        return out;
    };

    Vec y0;
    y0.insert(y0.end(), start.p.begin(), start.p.end());
    y0.insert(y0.end(), start.x.begin(), start.x.end());
    LiftReport rep;
    rep.phase_trajectory = rk4(field, y0, steps, opts.bounding_box);

    // source components are the constants of motion
    auto split = [&](const Vec& state) {
        return PhasePoint{Vec(state.begin(), state.begin() + d), Vec(state.begin() + d, state.end())};
    };
    Vec s0 = maps.source(eps, split(y0));
    Vec t0 = maps.target(eps, split(y0));
    for (const auto& state : rep.phase_trajectory.states) {
        Vec s = maps.source(eps, split(state));
        for (int i = 0; i < d; ++i)
            rep.max_source_drift = std::max(rep.max_source_drift, std::abs(s[static_cast<std::size_t>(i)] - s0[static_cast<std::size_t>(i)]));
    }

    // target projection follows the base Poisson flow xdot = B(x) grad f(x)
    auto base_field = [&](const Vec& x) {
        auto a = eval_bivector(ps, x);
        Vec gf(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) gf[static_cast<std::size_t>(i)] = grad_f[static_cast<std::size_t>(i)].eval(x);
        Vec dx(static_cast<std::size_t>(d), 0.0);
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * gf[static_cast<std::size_t>(j)];
            dx[static_cast<std::size_t>(i)] = 2.0 * eps * acc;
        }
        return dx;
    };
    Trajectory base = rk4(base_field, t0, steps, opts.bounding_box);
    for (std::size_t k = 0; k < base.states.size(); ++k) {
        Vec t = maps.target(eps, split(rep.phase_trajectory.states[k]));
        rep.max_projection_residual = std::max(rep.max_projection_residual, vec_dist(t, base.states[k]));
    }
    return rep;
}

}  // namespace groupoidgen
