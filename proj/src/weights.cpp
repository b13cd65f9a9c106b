#include "groupoidgen/weights.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include "groupoidgen/quartic.hpp"

namespace groupoidgen {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kCollisionCutoff = 1e-9;
constexpr int kMaxAerial = 8;

double wrap_02pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

/// Signed wrap into (-pi, pi].
double wrap_pmpi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a > kPi) a -= kTwoPi;
    if (a <= -kPi) a += kTwoPi;
    return a;
}

double angle_to_ground(double x, double y, double a) { return wrap_02pi(2.0 * std::atan2(y, x - a)); }

double angle_to_aerial(double x, double y, double u, double v) {
    return wrap_02pi(std::atan2(v - y, u - x) - std::atan2(v + y, u - x));
}

void grad_z_ground(double x, double y, double a, double& gx, double& gy) {
    double dx = x - a;
    double inv = 1.0 / (dx * dx + y * y);
    gx = -2.0 * y * inv;
    gy = 2.0 * dx * inv;
}

void grad_z_aerial(double x, double y, double u, double v, double& gx, double& gy) {
    double dx = u - x;
    double a2 = dx * dx + (v - y) * (v - y);
    double b2 = dx * dx + (v + y) * (v + y);
    gx = (v - y) / a2 - (v + y) / b2;
    gy = -dx / a2 - dx / b2;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------
// Per-graph sampling plan
// ---------------------------------------------------------------------------

enum class VertexKind { Folded, GroundGround, Mixed, AerialAerial };

struct VertexPlan {
    int vertex = 0;  // 1-based
    VertexKind kind = VertexKind::GroundGround;
    // GroundGround / Folded
    double a1 = 0.0, a2 = 0.0;
    int gg_sign = 1;
    // Mixed
    bool ground_first = true;  // gamma1 is the ground edge
    double ground_pos = 0.0;
    int aerial_target = 0;
    // AerialAerial
    int target1 = 0, target2 = 0;
};

struct GraphPlan {
    int n = 0;
    double folded_factor = 1.0;  // product of exact +-1/2 contributions
    std::vector<VertexPlan> order;  // topological: targets before sources
    int sampled_angles = 0;         // angle pairs drawn per sample
};

double ground_position(int target) { return target == kGround1 ? 0.0 : 1.0; }

GraphPlan make_plan(const KGraph& g, bool fold_untargeted_gg) {
    GraphPlan plan;
    plan.n = g.n;
    if (g.n > kMaxAerial) throw std::invalid_argument("weight sampler: vertex count above supported ceiling");

    std::vector<int> incoming(static_cast<std::size_t>(g.n + 1), 0);
    for (int v = 1; v <= g.n; ++v)
        for (int t : {g.first_target(v), g.second_target(v)})
            if (!is_ground(t)) incoming[static_cast<std::size_t>(t)]++;

    std::vector<bool> placed(static_cast<std::size_t>(g.n + 1), false);
    for (int step = 0; step < g.n; ++step) {
        int pick = 0;
        for (int v = 1; v <= g.n; ++v) {
            if (placed[static_cast<std::size_t>(v)]) continue;
            bool ready = true;
            for (int t : {g.first_target(v), g.second_target(v)})
                if (!is_ground(t) && !placed[static_cast<std::size_t>(t)]) ready = false;
            if (ready) {
                pick = v;
                break;
            }
        }
        if (pick == 0) throw std::logic_error("weight sampler: no topological order (cyclic edge directions)");
        placed[static_cast<std::size_t>(pick)] = true;

        int t1 = g.first_target(pick);
        int t2 = g.second_target(pick);
        VertexPlan vp;
        vp.vertex = pick;
        if (is_ground(t1) && is_ground(t2)) {
            vp.a1 = ground_position(t1);
            vp.a2 = ground_position(t2);
            vp.gg_sign = vp.a2 > vp.a1 ? 1 : -1;
            if (fold_untargeted_gg && incoming[static_cast<std::size_t>(pick)] == 0) {
                vp.kind = VertexKind::Folded;
                plan.folded_factor *= 0.5 * static_cast<double>(vp.gg_sign);
            } else {
                vp.kind = VertexKind::GroundGround;
            }
        } else if (is_ground(t1) || is_ground(t2)) {
            vp.kind = VertexKind::Mixed;
            vp.ground_first = is_ground(t1);
            vp.ground_pos = ground_position(vp.ground_first ? t1 : t2);
            vp.aerial_target = vp.ground_first ? t2 : t1;
        } else {
            vp.kind = VertexKind::AerialAerial;
            vp.target1 = t1;
            vp.target2 = t2;
        }
        if (vp.kind != VertexKind::Folded) plan.sampled_angles += 1;
        plan.order.push_back(vp);
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Branch solvers: all upper-half-plane preimages of one vertex's angle pair
// given its targets. Each branch carries the sign of the 2x2 angle Jacobian.
// ---------------------------------------------------------------------------

struct Branch {
    double x = 0.0, y = 0.0;
    int sign = 1;
};

double vertex_det(double x, double y, bool t1_ground, double u1, double v1, bool t2_ground, double u2, double v2) {
    double g1x, g1y, g2x, g2y;
    if (t1_ground)
        grad_z_ground(x, y, u1, g1x, g1y);
    else
        grad_z_aerial(x, y, u1, v1, g1x, g1y);
    if (t2_ground)
        grad_z_ground(x, y, u2, g2x, g2y);
    else
        grad_z_aerial(x, y, u2, v2, g2x, g2y);
    return g1x * g2y - g1y * g2x;
}

/// Light 2D Newton polish of the two wrapped angle equations; returns false
/// when the candidate fails to satisfy them (wrong half-branch or spurious
/// algebraic root).
bool polish_and_verify(double& x, double& y, bool t1_ground, double u1, double v1, double phi1, bool t2_ground, double u2,
                       double v2, double phi2) {
    for (int it = 0; it < 6; ++it) {
        if (y < 1e-13) return false;
        double f1 = wrap_pmpi((t1_ground ? angle_to_ground(x, y, u1) : angle_to_aerial(x, y, u1, v1)) - phi1);
        double f2 = wrap_pmpi((t2_ground ? angle_to_ground(x, y, u2) : angle_to_aerial(x, y, u2, v2)) - phi2);
        double res = std::max(std::abs(f1), std::abs(f2));
        if (res < 1e-11) return true;
        if (res > 0.3) return false;  // other half of the hyperbola branch sits pi away
        double g1x, g1y, g2x, g2y;
        if (t1_ground)
            grad_z_ground(x, y, u1, g1x, g1y);
        else
            grad_z_aerial(x, y, u1, v1, g1x, g1y);
        if (t2_ground)
            grad_z_ground(x, y, u2, g2x, g2y);
        else
            grad_z_aerial(x, y, u2, v2, g2x, g2y);
        double det = g1x * g2y - g1y * g2x;
        if (det == 0.0 || !std::isfinite(det)) return false;
        double dx = (f1 * g2y - f2 * g1y) / det;
        double dy = (f2 * g1x - f1 * g2x) / det;
        double nx = x - dx;
        double ny = y - dy;
        if (!(std::isfinite(nx) && std::isfinite(ny))) return false;
        x = nx;
        y = ny;
    }
    double f1 = wrap_pmpi((t1_ground ? angle_to_ground(x, y, u1) : angle_to_aerial(x, y, u1, v1)) - phi1);
    double f2 = wrap_pmpi((t2_ground ? angle_to_ground(x, y, u2) : angle_to_aerial(x, y, u2, v2)) - phi2);
    return y > 1e-13 && std::max(std::abs(f1), std::abs(f2)) < 1e-9;
}

int solve_gg(double phi1, double phi2, double a1, double a2, Branch* out) {
    double th1 = 0.5 * phi1;
    double th2 = 0.5 * phi2;
    double aL = a1, aR = a2, thL = th1, thR = th2;
    if (aL > aR) {
        std::swap(aL, aR);
        std::swap(thL, thR);
    }
    if (!(thL > 1e-12 && thR < kPi - 1e-12 && thL < thR - 1e-12)) return 0;
    double d = aR - aL;
    double r = d * std::sin(thR) / std::sin(thR - thL);
    double x = aL + r * std::cos(thL);
    double y = r * std::sin(thL);
    if (!(y > 1e-13) || !std::isfinite(x) || !std::isfinite(y)) return 0;
    out[0].x = x;
    out[0].y = y;
    out[0].sign = a2 > a1 ? 1 : -1;
    return 1;
}

int solve_mixed(double phi_g, double a, double phi_a, double u, double v, bool ground_first, Branch* out) {
    double theta = 0.5 * phi_g;
    if (theta < 1e-12 || theta > kPi - 1e-12) return 0;
    double s = std::sin(phi_a);
    double ct = std::cos(theta), st = std::sin(theta);
    double big_u = u - a;
    double qa = std::sin(phi_a - 2.0 * theta);
    double qb = -2.0 * big_u * std::sin(phi_a - theta);
    double qc = s * (big_u * big_u + v * v);

    double roots[2];
    int nroots = 0;
    double scale = std::abs(qa) + std::abs(qb) + std::abs(qc);
    if (scale == 0.0) return 0;
    if (std::abs(qa) < 1e-14 * scale) {
        if (std::abs(qb) > 1e-14 * scale) roots[nroots++] = -qc / qb;
    } else {
        double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            double sq = std::sqrt(disc);
            double q = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
            if (q != 0.0) {
                roots[nroots++] = q / qa;
                if (std::abs(q) > 0.0) roots[nroots++] = qc / q;
            } else {
                roots[nroots++] = 0.0;
                roots[nroots++] = -qb / qa;
            }
        }
    }

    int count = 0;
    for (int k = 0; k < nroots; ++k) {
        double r = roots[k];
        if (!(r > 1e-13) || !std::isfinite(r)) continue;
        double x = a + r * ct;
        double y = r * st;
        bool ok = ground_first ? polish_and_verify(x, y, true, a, 0.0, phi_g, false, u, v, phi_a)
                               : polish_and_verify(x, y, false, u, v, phi_a, true, a, 0.0, phi_g);
        if (!ok) continue;
        bool dup = false;
        for (int j = 0; j < count; ++j)
            if (std::abs(out[j].x - x) + std::abs(out[j].y - y) < 1e-8 * (1.0 + std::abs(x) + y)) dup = true;
        if (dup) continue;
        double det = ground_first ? vertex_det(x, y, true, a, 0.0, false, u, v) : vertex_det(x, y, false, u, v, true, a, 0.0);
        if (det == 0.0 || !std::isfinite(det)) continue;
        out[count].x = x;
        out[count].y = y;
        out[count].sign = det > 0.0 ? 1 : -1;
        ++count;
    }
    return count;
}

void poly_mul(const double* p, int np, const double* q, int nq, double* out) {
    for (int k = 0; k < np + nq - 1; ++k) out[k] = 0.0;
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < nq; ++j) out[i + j] += p[i] * q[j];
}

int solve_aa(double phi1, double u1, double v1, double phi2, double u2, double v2, Branch* out) {
    double s1 = std::sin(phi1), c1 = std::cos(phi1);
    double s2 = std::sin(phi2), c2 = std::cos(phi2);

    int count = 0;
    auto try_candidate = [&](double x, double y) {
        if (!(y > 1e-13) || !std::isfinite(x) || !std::isfinite(y)) return;
        if (!polish_and_verify(x, y, false, u1, v1, phi1, false, u2, v2, phi2)) return;
        for (int j = 0; j < count; ++j)
            if (std::abs(out[j].x - x) + std::abs(out[j].y - y) < 1e-8 * (1.0 + std::abs(x) + y)) return;
        double det = vertex_det(x, y, false, u1, v1, false, u2, v2);
        if (det == 0.0 || !std::isfinite(det)) return;
        if (count >= 4) return;
        out[count].x = x;
        out[count].y = y;
        out[count].sign = det > 0.0 ? 1 : -1;
        ++count;
    };

    bool deg1 = std::abs(s1) < 1e-12;
    bool deg2 = std::abs(s2) < 1e-12;
    if (deg1 && deg2) {
        return 0;  // two vertical lines: generically empty, tangent case has measure zero
    }
    if (deg1 || deg2) {
        // One conic degenerates to the vertical line x = u through its target.
        double x = deg1 ? u1 : u2;
        double su = deg1 ? s2 : s1;
        double cu = deg1 ? c2 : c1;
        double uu = deg1 ? u2 : u1;
        double vv = deg1 ? v2 : v1;
        double dx = uu - x;
        // conic as quadratic in y: -su y^2 + 2 cu dx y + su (dx^2 + vv^2) = 0
        for (double y : solve_real_quadratic(-su, 2.0 * cu * dx, su * (dx * dx + vv * vv))) try_candidate(x, y);
        return count;
    }

    // Quadratics in y:  a_k y^2 + b_k(x) y + g_k(x),  k = 1,2
    // a_k = -s_k, b_k = 2 c_k (u_k - x), g_k = s_k ((u_k - x)^2 + v_k^2)
    double b1[2] = {2.0 * c1 * u1, -2.0 * c1};
    double b2[2] = {2.0 * c2 * u2, -2.0 * c2};
    double g1[3] = {s1 * (u1 * u1 + v1 * v1), -2.0 * s1 * u1, s1};
    double g2[3] = {s2 * (u2 * u2 + v2 * v2), -2.0 * s2 * u2, s2};
    double a1 = -s1, a2 = -s2;

    // resultant = (a1 g2 - a2 g1)^2 - (a1 b2 - a2 b1)(b1 g2 - b2 g1)
    double p1[3];
    for (int k = 0; k < 3; ++k) p1[k] = a1 * g2[k] - a2 * g1[k];
    double p2[2];
    for (int k = 0; k < 2; ++k) p2[k] = a1 * b2[k] - a2 * b1[k];
    double t1[4], t2[4], p3[4];
    poly_mul(b1, 2, g2, 3, t1);
    poly_mul(b2, 2, g1, 3, t2);
    for (int k = 0; k < 4; ++k) p3[k] = t1[k] - t2[k];
    double sq[5], cross[5], res[5];
    poly_mul(p1, 3, p1, 3, sq);
    poly_mul(p2, 2, p3, 4, cross);
    for (int k = 0; k < 5; ++k) res[k] = sq[k] - cross[k];

    for (double x : solve_real_quartic(res[4], res[3], res[2], res[1], res[0])) {
        double num = p1[0] + x * (p1[1] + x * p1[2]);
        double den = -(p2[0] + x * p2[1]);
        if (std::abs(den) > 1e-12 * (1.0 + std::abs(num))) {
            try_candidate(x, num / den);
        } else {
            // shared leading behaviour: fall back to conic 1's explicit roots
            double dx = u1 - x;
            for (double y : solve_real_quadratic(a1, 2.0 * c1 * dx, s1 * (dx * dx + v1 * v1))) try_candidate(x, y);
        }
    }
    return count;
}

// ---------------------------------------------------------------------------
// Sampling engine
// ---------------------------------------------------------------------------

struct SampleScratch {
    double posx[kMaxAerial + 1];
    double posy[kMaxAerial + 1];
    double phi1[kMaxAerial + 1];
    double phi2[kMaxAerial + 1];
    bool discard = false;
};

bool collides(const SampleScratch& s, const GraphPlan& plan, std::size_t upto, double x, double y) {
    if (std::abs(x) < kCollisionCutoff && y < kCollisionCutoff) return true;
    if (std::abs(x - 1.0) < kCollisionCutoff && y < kCollisionCutoff) return true;
    for (std::size_t i = 0; i < upto; ++i) {
        const auto& vp = plan.order[i];
        if (vp.kind == VertexKind::Folded) continue;
        double dx = s.posx[vp.vertex] - x;
        double dy = s.posy[vp.vertex] - y;
        if (std::abs(dx) < kCollisionCutoff && std::abs(dy) < kCollisionCutoff) return true;
    }
    return false;
}

double branch_sum(const GraphPlan& plan, SampleScratch& s, std::size_t idx) {
    if (idx == plan.order.size()) return 1.0;
    const VertexPlan& vp = plan.order[idx];
    if (vp.kind == VertexKind::Folded) return branch_sum(plan, s, idx + 1);

    Branch branches[4];
    int nb = 0;
    double ph1 = s.phi1[vp.vertex];
    double ph2 = s.phi2[vp.vertex];
    switch (vp.kind) {
        case VertexKind::GroundGround:
            nb = solve_gg(ph1, ph2, vp.a1, vp.a2, branches);
            break;
        case VertexKind::Mixed: {
            double phi_g = vp.ground_first ? ph1 : ph2;
            double phi_a = vp.ground_first ? ph2 : ph1;
            nb = solve_mixed(phi_g, vp.ground_pos, phi_a, s.posx[vp.aerial_target], s.posy[vp.aerial_target], vp.ground_first,
                             branches);
            break;
        }
        case VertexKind::AerialAerial:
            nb = solve_aa(ph1, s.posx[vp.target1], s.posy[vp.target1], ph2, s.posx[vp.target2], s.posy[vp.target2], branches);
            break;
        case VertexKind::Folded:
            break;
    }
    if (nb == 0) return 0.0;

    double acc = 0.0;
    for (int b = 0; b < nb; ++b) {
        if (collides(s, plan, idx, branches[b].x, branches[b].y)) {
            s.discard = true;
            return 0.0;
        }
        s.posx[vp.vertex] = branches[b].x;
        s.posy[vp.vertex] = branches[b].y;
        acc += static_cast<double>(branches[b].sign) * branch_sum(plan, s, idx + 1);
        if (s.discard) return 0.0;
    }
    return acc;
}

double one_sample(const GraphPlan& plan, SampleScratch& s, std::mt19937_64& rng) {
    s.discard = false;
    for (const auto& vp : plan.order) {
        if (vp.kind == VertexKind::Folded) continue;
        s.phi1[vp.vertex] = kTwoPi * uniform01(rng);
        s.phi2[vp.vertex] = kTwoPi * uniform01(rng);
    }
    double val = branch_sum(plan, s, 0);
    return plan.folded_factor * val;
}

struct ChunkResult {
    double sum = 0.0;
    double sumsq = 0.0;
    std::uint64_t discarded = 0;
};

}  // namespace

HPoint::HPoint(double re_, double im_) : re(re_), im(im_) {
    if (!(im > 0.0)) throw std::invalid_argument("HPoint: imaginary part must be positive");
}

double harmonic_angle(const HPoint& z, const HPoint& w) {
    double dx = w.re - z.re, dy = w.im - z.im;
    if (std::abs(dx) < 1e-14 && std::abs(dy) < 1e-14) throw std::domain_error("harmonic_angle: coincident points");
    return angle_to_aerial(z.re, z.im, w.re, w.im);
}

double harmonic_angle(const HPoint& z, GroundPoint w) { return angle_to_ground(z.re, z.im, w.pos); }

std::array<double, 2> harmonic_angle_grad_z(const HPoint& z, const HPoint& w) {
    std::array<double, 2> g;
    grad_z_aerial(z.re, z.im, w.re, w.im, g[0], g[1]);
    return g;
}

std::array<double, 2> harmonic_angle_grad_z(const HPoint& z, GroundPoint w) {
    std::array<double, 2> g;
    grad_z_ground(z.re, z.im, w.pos, g[0], g[1]);
    return g;
}

std::array<double, 2> harmonic_angle_grad_w(const HPoint& z, const HPoint& w) {
    double dx = w.re - z.re;
    double a2 = dx * dx + (w.im - z.im) * (w.im - z.im);
    double b2 = dx * dx + (w.im + z.im) * (w.im + z.im);
    return {-(w.im - z.im) / a2 + (w.im + z.im) / b2, dx / a2 - dx / b2};
}

WeightEstimate weight_mc(const TreeGraph& g, std::uint64_t samples, std::uint64_t seed, int threads) {
    if (samples < 10000) throw std::invalid_argument("weight_mc: need at least 1e4 samples");
    GraphPlan plan = make_plan(g.graph, /*fold_untargeted_gg=*/true);

    constexpr std::uint64_t kChunk = 1 << 16;
    const std::uint64_t nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<ChunkResult> results(nchunks);

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(std::min<std::uint64_t>(nchunks, 64))));

    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        SampleScratch scratch;
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= nchunks) break;
            std::uint64_t lo = c * kChunk;
            std::uint64_t hi = std::min(samples, lo + kChunk);
            std::mt19937_64 rng(splitmix64(seed ^ splitmix64(c + 0x51ed2701ULL)));
            ChunkResult res;
            for (std::uint64_t i = lo; i < hi; ++i) {
                SampleScratch& s = scratch;
                double x = one_sample(plan, s, rng);
                if (s.discard) {
                    res.discarded++;
                    continue;
                }
                res.sum += x;
                res.sumsq += x * x;
            }
            results[c] = res;
        }
    };

    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    double sum = 0.0, sumsq = 0.0;
    std::uint64_t discarded = 0;
    for (const auto& r : results) {
        sum += r.sum;
        sumsq += r.sumsq;
        discarded += r.discarded;
    }
    if (discarded * 100 > samples) throw std::runtime_error("weight_mc: more than 1% of samples discarded near collisions");

    const double ns = static_cast<double>(samples);
    double mean = sum / ns;
    double var = std::max(0.0, (sumsq - ns * mean * mean) / std::max(1.0, ns - 1.0));

    WeightEstimate est;
    est.value = mean;
    est.std_error = std::sqrt(var / ns);
    est.samples = samples;
    est.discarded = discarded;
    est.graph = g.graph;
    return est;
}

std::vector<FiberConfiguration> enumerate_fiber_configurations(const TreeGraph& g, const std::vector<double>& angles) {
    if (static_cast<int>(angles.size()) != 2 * g.n()) throw std::invalid_argument("enumerate_fiber_configurations: need 2n angles");
    GraphPlan plan = make_plan(g.graph, /*fold_untargeted_gg=*/false);
    SampleScratch s;
    s.discard = false;
    for (int v = 1; v <= g.n(); ++v) {
        s.phi1[v] = wrap_02pi(angles[static_cast<std::size_t>(2 * (v - 1))]);
        s.phi2[v] = wrap_02pi(angles[static_cast<std::size_t>(2 * (v - 1) + 1)]);
    }

    std::vector<FiberConfiguration> configs;
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int orient) {
        if (idx == plan.order.size()) {
            FiberConfiguration fc;
            fc.orientation = orient;
            for (int v = 1; v <= g.n(); ++v) fc.positions.emplace_back(s.posx[v], s.posy[v]);
            configs.push_back(std::move(fc));
            return;
        }
        const VertexPlan& vp = plan.order[idx];
        Branch branches[4];
        int nb = 0;
        double ph1 = s.phi1[vp.vertex];
        double ph2 = s.phi2[vp.vertex];
        switch (vp.kind) {
            case VertexKind::Folded:
            case VertexKind::GroundGround:
                nb = solve_gg(ph1, ph2, vp.a1, vp.a2, branches);
                break;
            case VertexKind::Mixed: {
                double phi_g = vp.ground_first ? ph1 : ph2;
                double phi_a = vp.ground_first ? ph2 : ph1;
                nb = solve_mixed(phi_g, vp.ground_pos, phi_a, s.posx[vp.aerial_target], s.posy[vp.aerial_target],
                                 vp.ground_first, branches);
                break;
            }
            case VertexKind::AerialAerial:
                nb = solve_aa(ph1, s.posx[vp.target1], s.posy[vp.target1], ph2, s.posx[vp.target2], s.posy[vp.target2],
                              branches);
                break;
        }
        for (int b = 0; b < nb; ++b) {
            s.posx[vp.vertex] = branches[b].x;
            s.posy[vp.vertex] = branches[b].y;
            rec(idx + 1, orient * branches[b].sign);
        }
    };
    rec(0, 1);
    return configs;
}

FiberBoundReport fiber_bound_check(const TreeGraph& g, std::uint64_t trials, std::uint64_t seed) {
    const int n = g.n();
    if (n > 2) throw std::invalid_argument("fiber_bound_check: root-finding over the fiber is tractable only for n <= 2");
    const int dim = 2 * n;
    const int bound = 1 << (2 * n);  // 4^n

    FiberBoundReport report;
    report.n = n;
    report.bound = bound;
    report.trials = trials;

    // Angle-map residual and Jacobian at a configuration.
    const KGraph& kg = g.graph;
    auto residual = [&](const std::vector<double>& z, const std::vector<double>& target, std::vector<double>& f) {
        for (int v = 1; v <= n; ++v) {
            double x = z[static_cast<std::size_t>(2 * (v - 1))];
            double y = z[static_cast<std::size_t>(2 * (v - 1) + 1)];
            int slot = 0;
            for (int t : {kg.first_target(v), kg.second_target(v)}) {
                double phi = is_ground(t) ? angle_to_ground(x, y, ground_position(t))
                                          : angle_to_aerial(x, y, z[static_cast<std::size_t>(2 * (t - 1))],
                                                            z[static_cast<std::size_t>(2 * (t - 1) + 1)]);
                f[static_cast<std::size_t>(2 * (v - 1) + slot)] =
                    wrap_pmpi(phi - target[static_cast<std::size_t>(2 * (v - 1) + slot)]);
                ++slot;
            }
        }
    };
    auto jacobian = [&](const std::vector<double>& z, std::vector<double>& jac) {
        std::fill(jac.begin(), jac.end(), 0.0);
        for (int v = 1; v <= n; ++v) {
            double x = z[static_cast<std::size_t>(2 * (v - 1))];
            double y = z[static_cast<std::size_t>(2 * (v - 1) + 1)];
            int slot = 0;
            for (int t : {kg.first_target(v), kg.second_target(v)}) {
                int row = 2 * (v - 1) + slot;
                double gx, gy;
                if (is_ground(t)) {
                    grad_z_ground(x, y, ground_position(t), gx, gy);
                } else {
                    double u = z[static_cast<std::size_t>(2 * (t - 1))];
                    double w = z[static_cast<std::size_t>(2 * (t - 1) + 1)];
                    grad_z_aerial(x, y, u, w, gx, gy);
                    auto gw = harmonic_angle_grad_w(HPoint(x, y), HPoint(u, w));
                    jac[static_cast<std::size_t>(row * dim + 2 * (t - 1))] = gw[0];
                    jac[static_cast<std::size_t>(row * dim + 2 * (t - 1) + 1)] = gw[1];
                }
                jac[static_cast<std::size_t>(row * dim + 2 * (v - 1))] = gx;
                jac[static_cast<std::size_t>(row * dim + 2 * (v - 1) + 1)] = gy;
                ++slot;
            }
        }
    };

    std::mt19937_64 rng(splitmix64(seed ^ 0xf1be7a11ULL));
    const int starts = n == 1 ? 160 : 640;
    std::vector<double> target(static_cast<std::size_t>(dim));
    std::vector<double> z(static_cast<std::size_t>(dim)), f(static_cast<std::size_t>(dim));
    std::vector<double> jac(static_cast<std::size_t>(dim * dim)), step(static_cast<std::size_t>(dim));

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        for (auto& t : target) t = kTwoPi * uniform01(rng);
        std::vector<std::vector<double>> found;
        for (int s0 = 0; s0 < starts; ++s0) {
            for (int v = 0; v < n; ++v) {
                z[static_cast<std::size_t>(2 * v)] = -2.5 + 6.0 * uniform01(rng);
                z[static_cast<std::size_t>(2 * v + 1)] = 0.02 * std::pow(250.0, uniform01(rng));
            }
            bool converged = false;
            for (int it = 0; it < 60; ++it) {
                residual(z, target, f);
                double rn = 0.0;
                for (double c : f) rn = std::max(rn, std::abs(c));
                if (rn < 1e-11) {
                    converged = true;
                    break;
                }
                jacobian(z, jac);
                // Gaussian elimination with partial pivoting.
                std::vector<double> a = jac, b = f;
                bool singular = false;
                for (int col = 0; col < dim && !singular; ++col) {
                    int piv = col;
                    for (int r = col + 1; r < dim; ++r)
                        if (std::abs(a[static_cast<std::size_t>(r * dim + col)]) >
                            std::abs(a[static_cast<std::size_t>(piv * dim + col)]))
                            piv = r;
                    if (std::abs(a[static_cast<std::size_t>(piv * dim + col)]) < 1e-14) {
                        singular = true;
                        break;
                    }
                    if (piv != col) {
                        for (int cc = 0; cc < dim; ++cc)
                            std::swap(a[static_cast<std::size_t>(col * dim + cc)], a[static_cast<std::size_t>(piv * dim + cc)]);
                        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
                    }
                    for (int r = col + 1; r < dim; ++r) {
                        double m = a[static_cast<std::size_t>(r * dim + col)] / a[static_cast<std::size_t>(col * dim + col)];
                        if (m == 0.0) continue;
                        for (int cc = col; cc < dim; ++cc)
                            a[static_cast<std::size_t>(r * dim + cc)] -= m * a[static_cast<std::size_t>(col * dim + cc)];
                        b[static_cast<std::size_t>(r)] -= m * b[static_cast<std::size_t>(col)];
                    }
                }
                if (singular) break;
                for (int r = dim - 1; r >= 0; --r) {
                    double acc = b[static_cast<std::size_t>(r)];
                    for (int cc = r + 1; cc < dim; ++cc)
                        acc -= a[static_cast<std::size_t>(r * dim + cc)] * step[static_cast<std::size_t>(cc)];
                    step[static_cast<std::size_t>(r)] = acc / a[static_cast<std::size_t>(r * dim + r)];
                }
                double damp = 1.0;
                for (int v = 0; v < n; ++v) {
                    double ny = z[static_cast<std::size_t>(2 * v + 1)] - damp * step[static_cast<std::size_t>(2 * v + 1)];
                    while (ny <= 1e-9 && damp > 1e-4) {
                        damp *= 0.5;
                        ny = z[static_cast<std::size_t>(2 * v + 1)] - damp * step[static_cast<std::size_t>(2 * v + 1)];
                    }
                }
                for (int c = 0; c < dim; ++c) z[static_cast<std::size_t>(c)] -= damp * step[static_cast<std::size_t>(c)];
                if (z[1] <= 0.0) break;
            }
            if (!converged) {
                report.nonconverged_starts++;
                continue;
            }
            bool dup = false;
            for (const auto& sol : found) {
                double dist = 0.0;
                for (int c = 0; c < dim; ++c) dist = std::max(dist, std::abs(sol[static_cast<std::size_t>(c)] - z[static_cast<std::size_t>(c)]));
                if (dist < 1e-6) dup = true;
            }
            bool in_domain = true;
            for (int v = 0; v < n; ++v)
                if (!(z[static_cast<std::size_t>(2 * v + 1)] > 1e-9)) in_domain = false;
            if (!dup && in_domain) found.push_back(z);
        }
        int count = static_cast<int>(found.size());
        report.per_trial.push_back(count);
        report.max_fiber_found = std::max(report.max_fiber_found, count);
    }
    report.bound_respected = report.max_fiber_found <= bound;
    return report;
}

}  // namespace groupoidgen
