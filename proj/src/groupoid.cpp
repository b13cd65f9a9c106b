#include "groupoidgen/groupoid.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "groupoidgen/linalg.hpp"

namespace groupoidgen {

namespace {

void check_dim(int d, const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != d) throw std::invalid_argument(std::string("groupoid: dimension mismatch in ") + what);
    for (double c : v)
        if (!std::isfinite(c)) throw std::invalid_argument(std::string("groupoid: non-finite ") + what);
}

}  // namespace

PhasePoint::PhasePoint(std::vector<double> p_, std::vector<double> x_) : p(std::move(p_)), x(std::move(x_)) {
    if (p.size() != x.size()) throw std::invalid_argument("PhasePoint: p and x dimensions differ");
    for (double c : p)
        if (!std::isfinite(c)) throw std::invalid_argument("PhasePoint: non-finite momentum");
    for (double c : x)
        if (!std::isfinite(c)) throw std::invalid_argument("PhasePoint: non-finite base point");
}

GroupoidMaps::GroupoidMaps(const GenFunc& S) : S_(S), d_(S.dimension), order_(S.order) {
    const int d = d_;
    // phase variables: p -> 0..d-1, x -> d..2d-1
    std::vector<int> p1_to_p(static_cast<std::size_t>(3 * d), -1);
    std::vector<int> p2_to_p(static_cast<std::size_t>(3 * d), -1);
    for (int i = 0; i < d; ++i) {
        p1_to_p[static_cast<std::size_t>(var_p1(d, i))] = i;       // p1 -> p (for source)
        p1_to_p[static_cast<std::size_t>(var_x(d, i))] = d + i;    // x -> x
        p2_to_p[static_cast<std::size_t>(var_p2(d, i))] = i;       // p2 -> p (for target)
        p2_to_p[static_cast<std::size_t>(var_x(d, i))] = d + i;
    }
    std::vector<int> both_to_p(static_cast<std::size_t>(3 * d), -1), sign_q(static_cast<std::size_t>(3 * d), 1);
    std::vector<int> sign_qt(static_cast<std::size_t>(3 * d), 1);
    for (int i = 0; i < d; ++i) {
        both_to_p[static_cast<std::size_t>(var_p1(d, i))] = i;
        both_to_p[static_cast<std::size_t>(var_p2(d, i))] = i;
        both_to_p[static_cast<std::size_t>(var_x(d, i))] = d + i;
        sign_q[static_cast<std::size_t>(var_p1(d, i))] = -1;   // Q: (p1, p2) = (-p, p)
        sign_qt[static_cast<std::size_t>(var_p2(d, i))] = -1;  // Q~: (p1, p2) = (p, -p)
    }

    auto zero_axes = [&](bool second_block) {
        std::vector<int> axes;
        for (int i = 0; i < d; ++i) axes.push_back(second_block ? var_p2(d, i) : var_p1(d, i));
        return axes;
    };

    s_ord_.assign(static_cast<std::size_t>(d), {});
    t_ord_.assign(static_cast<std::size_t>(d), {});
    q_ord_.assign(static_cast<std::size_t>(d), {});
    qt_ord_.assign(static_cast<std::size_t>(d), {});
    for (int i = 0; i < d; ++i) {
        // order-zero part: gradient of the base term (p1 + p2) . x
        MultiPoly x_i = MultiPoly::monomial(2 * d, d + i, 1, 1.0);
        s_ord_[static_cast<std::size_t>(i)].push_back(x_i);
        t_ord_[static_cast<std::size_t>(i)].push_back(x_i);
        q_ord_[static_cast<std::size_t>(i)].push_back(x_i);
        qt_ord_[static_cast<std::size_t>(i)].push_back(x_i);
        for (int n = 1; n <= order_; ++n) {
            const MultiPoly& Sn = S_.term(n);
            // s^i: d S / d p2_i at p2 = 0, p1 renamed to p
            MultiPoly ds2 = Sn.derivative(var_p2(d, i)).restrict_zero(zero_axes(true));
            s_ord_[static_cast<std::size_t>(i)].push_back(ds2.remap(2 * d, p1_to_p));
            // t^i: d S / d p1_i at p1 = 0, p2 renamed to p
            MultiPoly ds1 = Sn.derivative(var_p1(d, i)).restrict_zero(zero_axes(false));
            t_ord_[static_cast<std::size_t>(i)].push_back(ds1.remap(2 * d, p2_to_p));
            // Q^i: d S / d p2_i at (p1, p2) = (-p, p)
            q_ord_[static_cast<std::size_t>(i)].push_back(Sn.derivative(var_p2(d, i)).remap_signed(2 * d, both_to_p, sign_q));
            // Q~^i: d S / d p1_i at (p1, p2) = (p, -p)
            qt_ord_[static_cast<std::size_t>(i)].push_back(Sn.derivative(var_p1(d, i)).remap_signed(2 * d, both_to_p, sign_qt));
        }
    }
}

std::vector<double> GroupoidMaps::eval_components(const std::vector<std::vector<MultiPoly>>& comp, double eps,
                                                  const std::vector<double>& phase_pt) const {
    std::vector<double> out(static_cast<std::size_t>(d_), 0.0);
    for (int i = 0; i < d_; ++i) {
        double ep = 1.0;
        double acc = 0.0;
        for (int n = 0; n <= order_; ++n) {
            if (n > 0) ep *= eps;
            acc += ep * comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)].eval(phase_pt);
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

namespace {

std::vector<double> phase_vector(int d, const std::vector<double>& p, const std::vector<double>& x) {
    std::vector<double> pt;
    pt.reserve(static_cast<std::size_t>(2 * d));
    pt.insert(pt.end(), p.begin(), p.end());
    pt.insert(pt.end(), x.begin(), x.end());
    return pt;
}

}  // namespace

std::vector<double> GroupoidMaps::source(double eps, const PhasePoint& pt) const {
    check_dim(d_, pt.p, "p");
    check_dim(d_, pt.x, "x");
    return eval_components(s_ord_, eps, phase_vector(d_, pt.p, pt.x));
}

std::vector<double> GroupoidMaps::target(double eps, const PhasePoint& pt) const {
    check_dim(d_, pt.p, "p");
    check_dim(d_, pt.x, "x");
    return eval_components(t_ord_, eps, phase_vector(d_, pt.p, pt.x));
}

std::vector<double> GroupoidMaps::inverse_Q(double eps, const std::vector<double>& p, const std::vector<double>& x) const {
    check_dim(d_, p, "p");
    check_dim(d_, x, "x");
    return eval_components(q_ord_, eps, phase_vector(d_, p, x));
}

std::vector<double> GroupoidMaps::inverse_Qt(double eps, const std::vector<double>& p, const std::vector<double>& x) const {
    check_dim(d_, p, "p");
    check_dim(d_, x, "x");
    return eval_components(qt_ord_, eps, phase_vector(d_, p, x));
}

namespace {

std::vector<double> jac_of(const std::vector<std::vector<MultiPoly>>& comp, int d, int order, double eps,
                           const std::vector<double>& phase_pt, int var_offset) {
    std::vector<double> jac(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double ep = 1.0;
            double acc = 0.0;
            for (int n = 0; n <= order; ++n) {
                if (n > 0) ep *= eps;
                acc += ep * comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)].derivative(var_offset + j).eval(phase_pt);
            }
            jac[static_cast<std::size_t>(i * d + j)] = acc;
        }
    }
    return jac;
}

}  // namespace

std::vector<double> GroupoidMaps::jac_source_x(double eps, const PhasePoint& pt) const {
    return jac_of(s_ord_, d_, order_, eps, phase_vector(d_, pt.p, pt.x), d_);
}

std::vector<double> GroupoidMaps::jac_target_x(double eps, const PhasePoint& pt) const {
    return jac_of(t_ord_, d_, order_, eps, phase_vector(d_, pt.p, pt.x), d_);
}

std::vector<double> GroupoidMaps::jac_target_p(double eps, const PhasePoint& pt) const {
    return jac_of(t_ord_, d_, order_, eps, phase_vector(d_, pt.p, pt.x), 0);
}

std::vector<double> GroupoidMaps::grad_S(double eps, GradBlock which, const std::vector<double>& p1,
                                         const std::vector<double>& p2, const std::vector<double>& x) const {
    return grad_genfunc(S_, eps, p1, p2, x, which);
}

double GroupoidMaps::eval_S(double eps, const std::vector<double>& p1, const std::vector<double>& p2,
                            const std::vector<double>& x) const {
    return eval_genfunc(S_, eps, p1, p2, x);
}

std::vector<double> GroupoidMaps::hess_S(double eps, GradBlock which, const std::vector<double>& p1,
                                         const std::vector<double>& p2, const std::vector<double>& x) const {
    const int d = d_;
    std::vector<double> pt;
    pt.reserve(static_cast<std::size_t>(3 * d));
    pt.insert(pt.end(), p1.begin(), p1.end());
    pt.insert(pt.end(), p2.begin(), p2.end());
    pt.insert(pt.end(), x.begin(), x.end());
    auto axis_of = [&](int i) {
        return which == GradBlock::P1 ? var_p1(d, i) : which == GradBlock::P2 ? var_p2(d, i) : var_x(d, i);
    };
    std::vector<double> h(static_cast<std::size_t>(d * d), 0.0);
    double ep = 1.0;
    for (int n = 1; n <= order_; ++n) {
        ep *= eps;
        for (int i = 0; i < d; ++i) {
            MultiPoly di = S_.term(n).derivative(axis_of(i));
            for (int j = i; j < d; ++j) {
                double v = ep * di.derivative(axis_of(j)).eval(pt);
                h[static_cast<std::size_t>(i * d + j)] += v;
                if (j != i) h[static_cast<std::size_t>(j * d + i)] += v;
            }
        }
    }
    return h;
}

std::vector<double> source(const GenFunc& S, double eps, const PhasePoint& pt) { return GroupoidMaps(S).source(eps, pt); }
std::vector<double> target(const GenFunc& S, double eps, const PhasePoint& pt) { return GroupoidMaps(S).target(eps, pt); }
std::vector<double> local_inverse_Q(const GenFunc& S, double eps, const std::vector<double>& p,
                                    const std::vector<double>& x) {
    return GroupoidMaps(S).inverse_Q(eps, p, x);
}
std::vector<double> local_inverse_Qt(const GenFunc& S, double eps, const std::vector<double>& p,
                                     const std::vector<double>& x) {
    return GroupoidMaps(S).inverse_Qt(eps, p, x);
}

double sga_residual(const GenFunc& S, double eps, const std::vector<double>& p1, const std::vector<double>& p2,
                    const std::vector<double>& p3, const std::vector<double>& x, const SgaOptions& opts) {
    GroupoidMaps maps(S);
    const int d = S.dimension;
    check_dim(d, p1, "p1");
    check_dim(d, p2, "p2");
    check_dim(d, p3, "p3");
    check_dim(d, x, "x");

    using Vec = std::vector<double>;
    using MapFn = std::function<Vec(const Vec&)>;

    // Solves xm = F1(pm), pm = F2(xm) by damped fixed point then Newton.
    // H1 = dF1/dpm, H2 = dF2/dxm (row-major d x d).
    auto solve_pair = [&](const MapFn& F1, const MapFn& F2, const MapFn& H1, const MapFn& H2, const Vec& seed_x,
                          const Vec& seed_p, Vec& xm, Vec& pm) {
        xm = seed_x;
        pm = seed_p;
        int iterations = 0;
        for (int k = 0; k < opts.fixed_point_steps; ++k, ++iterations) {
            auto f1 = F1(pm);
            auto f2 = F2(xm);
            for (int i = 0; i < d; ++i) {
                xm[static_cast<std::size_t>(i)] += opts.damping * (f1[static_cast<std::size_t>(i)] - xm[static_cast<std::size_t>(i)]);
                pm[static_cast<std::size_t>(i)] += opts.damping * (f2[static_cast<std::size_t>(i)] - pm[static_cast<std::size_t>(i)]);
            }
        }
        // Newton polish on G = (xm - F1(pm), pm - F2(xm))
        for (; iterations < opts.max_iterations; ++iterations) {
            auto f1 = F1(pm);
            auto f2 = F2(xm);
            std::vector<double> g(static_cast<std::size_t>(2 * d), 0.0);
            double gn = 0.0;
            for (int i = 0; i < d; ++i) {
                g[static_cast<std::size_t>(i)] = xm[static_cast<std::size_t>(i)] - f1[static_cast<std::size_t>(i)];
                g[static_cast<std::size_t>(d + i)] = pm[static_cast<std::size_t>(i)] - f2[static_cast<std::size_t>(i)];
                gn = std::max({gn, std::abs(g[static_cast<std::size_t>(i)]), std::abs(g[static_cast<std::size_t>(d + i)])});
            }
            if (gn < opts.tolerance) return;
            auto h1 = H1(pm);
            auto h2 = H2(xm);
            const int dim = 2 * d;
            std::vector<double> J(static_cast<std::size_t>(dim * dim), 0.0);
            for (int i = 0; i < d; ++i) {
                J[static_cast<std::size_t>(i * dim + i)] = 1.0;
                J[static_cast<std::size_t>((d + i) * dim + d + i)] = 1.0;
                for (int j = 0; j < d; ++j) {
                    J[static_cast<std::size_t>(i * dim + d + j)] = -h1[static_cast<std::size_t>(i * d + j)];
                    J[static_cast<std::size_t>((d + i) * dim + j)] = -h2[static_cast<std::size_t>(i * d + j)];
                }
            }
            std::vector<double> step;
            if (!matrix_solve(J, g, dim, step)) throw std::runtime_error("sga_residual: singular Newton system");
            for (int i = 0; i < d; ++i) {
                xm[static_cast<std::size_t>(i)] -= step[static_cast<std::size_t>(i)];
                pm[static_cast<std::size_t>(i)] -= step[static_cast<std::size_t>(d + i)];
            }
        }
        throw std::runtime_error("sga_residual: implicit solve did not converge");
    };

    Vec seed_p_bar(static_cast<std::size_t>(d)), seed_p_til(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        seed_p_bar[static_cast<std::size_t>(i)] = p1[static_cast<std::size_t>(i)] + p2[static_cast<std::size_t>(i)];
        seed_p_til[static_cast<std::size_t>(i)] = p2[static_cast<std::size_t>(i)] + p3[static_cast<std::size_t>(i)];
    }

    // bar pair: xbar = grad_{p1} S(pbar, p3, x); pbar = grad_x S(p1, p2, xbar)
    std::vector<double> xbar, pbar, xtil, ptil;
    solve_pair([&](const Vec& pm) { return maps.grad_S(eps, GradBlock::P1, pm, p3, x); },
               [&](const Vec& xm) { return maps.grad_S(eps, GradBlock::X, p1, p2, xm); },
               [&](const Vec& pm) { return maps.hess_S(eps, GradBlock::P1, pm, p3, x); },
               [&](const Vec& xm) { return maps.hess_S(eps, GradBlock::X, p1, p2, xm); }, x, seed_p_bar, xbar, pbar);
    // tilde pair: xtil = grad_{p2} S(p1, ptil, x); ptil = grad_x S(p2, p3, xtil)
    solve_pair([&](const Vec& pm) { return maps.grad_S(eps, GradBlock::P2, p1, pm, x); },
               [&](const Vec& xm) { return maps.grad_S(eps, GradBlock::X, p2, p3, xm); },
               [&](const Vec& pm) { return maps.hess_S(eps, GradBlock::P2, p1, pm, x); },
               [&](const Vec& xm) { return maps.hess_S(eps, GradBlock::X, p2, p3, xm); }, x, seed_p_til, xtil, ptil);

    double lhs = maps.eval_S(eps, p1, p2, xbar) + maps.eval_S(eps, pbar, p3, x) - vec_dot(xbar, pbar);
    double rhs = maps.eval_S(eps, p2, p3, xtil) + maps.eval_S(eps, p1, ptil, x) - vec_dot(xtil, ptil);
    return std::abs(lhs - rhs);
}

LieResiduals lie_residuals(const GenFunc& S, const PoissonStructure& ps, double eps,
                           const std::vector<PhasePoint>& sample) {
    if (ps.dimension() != S.dimension) throw std::invalid_argument("lie_residuals: structure dimension mismatch");
    GroupoidMaps maps(S);
    const int d = S.dimension;

    // eps-folded phase polynomials and their gradients
    std::vector<MultiPoly> s_poly, t_poly;
    for (int i = 0; i < d; ++i) {
        MultiPoly si(2 * d), ti(2 * d);
        double ep = 1.0;
        for (int n = 0; n <= S.order; ++n) {
            if (n > 0) ep *= eps;
            si += maps.s_orders()[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] * ep;
            ti += maps.t_orders()[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] * ep;
        }
        s_poly.push_back(std::move(si));
        t_poly.push_back(std::move(ti));
    }
    std::vector<std::vector<MultiPoly>> ds_dp(static_cast<std::size_t>(d)), ds_dx(static_cast<std::size_t>(d));
    std::vector<std::vector<MultiPoly>> dt_dp(static_cast<std::size_t>(d)), dt_dx(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        for (int u = 0; u < d; ++u) {
            ds_dp[static_cast<std::size_t>(i)].push_back(s_poly[static_cast<std::size_t>(i)].derivative(u));
            ds_dx[static_cast<std::size_t>(i)].push_back(s_poly[static_cast<std::size_t>(i)].derivative(d + u));
            dt_dp[static_cast<std::size_t>(i)].push_back(t_poly[static_cast<std::size_t>(i)].derivative(u));
            dt_dx[static_cast<std::size_t>(i)].push_back(t_poly[static_cast<std::size_t>(i)].derivative(d + u));
        }
    }

    LieResiduals out;
    std::vector<double> pt(static_cast<std::size_t>(2 * d));
    for (const auto& sp : sample) {
        check_dim(d, sp.p, "sample p");
        check_dim(d, sp.x, "sample x");
        for (int i = 0; i < d; ++i) {
            pt[static_cast<std::size_t>(i)] = sp.p[static_cast<std::size_t>(i)];
            pt[static_cast<std::size_t>(d + i)] = sp.x[static_cast<std::size_t>(i)];
        }
        std::vector<double> sv(static_cast<std::size_t>(d)), tv(static_cast<std::size_t>(d));
        std::vector<double> dsp(static_cast<std::size_t>(d * d)), dsx(static_cast<std::size_t>(d * d));
        std::vector<double> dtp(static_cast<std::size_t>(d * d)), dtx(static_cast<std::size_t>(d * d));
        for (int i = 0; i < d; ++i) {
            sv[static_cast<std::size_t>(i)] = s_poly[static_cast<std::size_t>(i)].eval(pt);
            tv[static_cast<std::size_t>(i)] = t_poly[static_cast<std::size_t>(i)].eval(pt);
            for (int u = 0; u < d; ++u) {
                dsp[static_cast<std::size_t>(i * d + u)] = ds_dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)].eval(pt);
                dsx[static_cast<std::size_t>(i * d + u)] = ds_dx[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)].eval(pt);
                dtp[static_cast<std::size_t>(i * d + u)] = dt_dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)].eval(pt);
                dtx[static_cast<std::size_t>(i * d + u)] = dt_dx[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)].eval(pt);
            }
        }
        auto bs = eval_bivector(ps, sv);
        auto bt = eval_bivector(ps, tv);
        auto bracket = [&](const std::vector<double>& fa_x, const std::vector<double>& fa_p, int i,
                           const std::vector<double>& fb_x, const std::vector<double>& fb_p, int j) {
            double acc = 0.0;
            for (int u = 0; u < d; ++u)
                acc += fa_x[static_cast<std::size_t>(i * d + u)] * fb_p[static_cast<std::size_t>(j * d + u)] -
                       fa_p[static_cast<std::size_t>(i * d + u)] * fb_x[static_cast<std::size_t>(j * d + u)];
            return acc;
        };
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                double ss = bracket(dsx, dsp, i, dsx, dsp, j);
                double tt = bracket(dtx, dtp, i, dtx, dtp, j);
                double st = bracket(dsx, dsp, i, dtx, dtp, j);
                double beta_s = 2.0 * eps * bs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                double beta_t = 2.0 * eps * bt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                out.source_residual = std::max(out.source_residual, std::abs(ss - beta_s));
                out.target_residual = std::max(out.target_residual, std::abs(tt + beta_t));
                out.commutation_residual = std::max(out.commutation_residual, std::abs(st));
            }
        }
    }
    return out;
}

double nondegeneracy_check(const GenFunc& S, double eps, const PhasePoint& pt) {
    GroupoidMaps maps(S);
    auto jac = maps.jac_source_x(eps, pt);
    return matrix_det(jac, S.dimension);
}

}  // namespace groupoidgen
