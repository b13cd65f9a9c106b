#include "groupoidgen/genfunc.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace groupoidgen {

namespace {

struct EdgeRef {
    int source;  // 1-based aerial vertex
    int slot;    // 0 = gamma1, 1 = gamma2
    int target;  // aerial 1..n or ground constant
};

/// Recursive assembly over edge-index assignments with zero-factor pruning.
/// Vertices are processed sources-before-targets so every incoming derivative
/// index of a vertex is fixed before its bivector factor is formed.
struct SymbolBuilder {
    const KGraph& g;
    const PoissonStructure& ps;
    int d;
    std::vector<int> order;                   // reverse-topological vertex order
    std::vector<std::vector<int>> incoming;   // indices of derivative axes per vertex (filled during recursion)
    std::vector<int> idx1, idx2;              // chosen index per vertex slot
    MultiPoly result;

    explicit SymbolBuilder(const KGraph& graph, const PoissonStructure& structure)
        : g(graph), ps(structure), d(structure.dimension()), result(3 * structure.dimension()) {
        incoming.assign(static_cast<std::size_t>(g.n + 1), {});
        idx1.assign(static_cast<std::size_t>(g.n + 1), 0);
        idx2.assign(static_cast<std::size_t>(g.n + 1), 0);

        // sources before targets: repeatedly take a vertex all of whose
        // incoming edges originate from already-ordered vertices.
        std::vector<int> pending_in(static_cast<std::size_t>(g.n + 1), 0);
        for (int v = 1; v <= g.n; ++v)
            for (int t : {g.first_target(v), g.second_target(v)})
                if (!is_ground(t)) pending_in[static_cast<std::size_t>(t)]++;
        std::vector<bool> placed(static_cast<std::size_t>(g.n + 1), false);
        for (int step = 0; step < g.n; ++step) {
            int pick = 0;
            for (int v = 1; v <= g.n; ++v)
                if (!placed[static_cast<std::size_t>(v)] && pending_in[static_cast<std::size_t>(v)] == 0) {
                    pick = v;
                    break;
                }
            if (pick == 0) throw std::logic_error("tree_symbol: no source-first order");
            placed[static_cast<std::size_t>(pick)] = true;
            order.push_back(pick);
            for (int t : {g.first_target(pick), g.second_target(pick)})
                if (!is_ground(t)) pending_in[static_cast<std::size_t>(t)]--;
        }
    }

    /// Bivector factor of one vertex with its derivative axes applied.
    MultiPoly vertex_factor(int v) const {
        MultiPoly f = ps.component(idx1[static_cast<std::size_t>(v)], idx2[static_cast<std::size_t>(v)]);
        for (int axis : incoming[static_cast<std::size_t>(v)]) {
            if (f.is_zero()) break;
            f = f.derivative(axis);
        }
        return f;
    }

    void recurse(std::size_t pos, const MultiPoly& x_product, MultiPoly::Exponents& p_expo) {
        if (pos == order.size()) {
            // embed the x-variable product into the 3d space and attach momenta
            std::vector<int> map(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) map[static_cast<std::size_t>(i)] = var_x(d, i);
            MultiPoly embedded = x_product.remap(3 * d, map);
            for (const auto& [e, c] : embedded.terms()) {
                MultiPoly::Exponents full = p_expo;
                for (int k = 0; k < 3 * d; ++k) full[static_cast<std::size_t>(k)] += e[static_cast<std::size_t>(k)];
                result.add_term(full, c);
            }
            return;
        }
        int v = order[pos];
        int t1 = g.first_target(v);
        int t2 = g.second_target(v);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                idx1[static_cast<std::size_t>(v)] = i;
                idx2[static_cast<std::size_t>(v)] = j;
                MultiPoly f = vertex_factor(v);
                if (f.is_zero()) continue;
                MultiPoly prod = x_product * f;
                if (prod.is_zero()) continue;

                auto push = [&](int target, int index, int delta) {
                    if (target == kGround1)
                        p_expo[static_cast<std::size_t>(var_p1(d, index))] += delta;
                    else if (target == kGround2)
                        p_expo[static_cast<std::size_t>(var_p2(d, index))] += delta;
                    else if (delta > 0)
                        incoming[static_cast<std::size_t>(target)].push_back(index);
                    else
                        incoming[static_cast<std::size_t>(target)].pop_back();
                };
                push(t1, i, +1);
                push(t2, j, +1);
                recurse(pos + 1, prod, p_expo);
                push(t2, j, -1);
                push(t1, i, -1);
            }
        }
    }
};

}  // namespace

MultiPoly tree_symbol(const TreeGraph& g, const PoissonStructure& ps) {
    if (!touches_both_grounds(g.graph))
        throw std::logic_error("tree_symbol: tree misses a ground vertex (enumeration bug)");
    SymbolBuilder builder(g.graph, ps);
    MultiPoly::Exponents p_expo(static_cast<std::size_t>(3 * ps.dimension()), 0);
    builder.recurse(0, MultiPoly::constant(ps.dimension(), 1.0), p_expo);
    return builder.result;
}

double GenFunc::base_term(const std::vector<double>& p1, const std::vector<double>& p2, const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += (p1[i] + p2[i]) * x[i];
    return acc;
}

GenFuncBuild build_genfunc(const PoissonStructure& ps, int order, const WeightTable& weights,
                           const std::vector<double>& base_point) {
    if (order < 1) throw std::invalid_argument("build_genfunc: order must be >= 1");
    if (static_cast<int>(base_point.size()) != ps.dimension())
        throw std::invalid_argument("build_genfunc: base point dimension mismatch");

    const int d = ps.dimension();
    GenFuncBuild out;
    out.genfunc.dimension = d;
    out.genfunc.order = order;
    out.genfunc.base_point = base_point;

    double factorial = 1.0;
    for (int n = 1; n <= order; ++n) {
        factorial *= static_cast<double>(n);
        MultiPoly term(3 * d);
        std::map<MultiPoly::Exponents, double> var_acc;  // per-monomial weight-error variance
        for (const auto& tree : enumerate_trees(n)) {
            auto it = weights.find(tree.graph.key());
            if (it == weights.end())
                throw std::runtime_error("build_genfunc: missing weight for tree " + tree.graph.key());
            const WeightEstimate& w = it->second;
            MultiPoly symbol = tree_symbol(tree, ps);
            if (symbol.degree_in_vars([&] {
                    std::vector<int> pvars;
                    for (int i = 0; i < 2 * d; ++i) pvars.push_back(i);
                    return pvars;
                }()) > n + 1)
                throw std::logic_error("build_genfunc: symbol exceeds momentum homogeneity");
            term += symbol * w.value;
            for (const auto& [e, c] : symbol.terms()) {
                double contrib = c * w.std_error;
                var_acc[e] += contrib * contrib;
            }
        }
        term *= 1.0 / factorial;
        MultiPoly sigma(3 * d);
        for (const auto& [e, v] : var_acc) sigma.add_term(e, std::sqrt(v) / factorial);
        out.genfunc.terms.push_back(std::move(term));
        out.coeff_sigma.push_back(std::move(sigma));
    }

    int degree = std::max(0, ps.max_degree());
    out.genfunc.analyticity_M = analyticity_bound(ps, base_point, degree);
    out.genfunc.radius = 1.0 / (64.0 * std::exp(1.0) * out.genfunc.analyticity_M * out.genfunc.analyticity_M);
    return out;
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
    for (double c : v)
        if (!std::isfinite(c)) throw std::invalid_argument(std::string("genfunc: non-finite ") + what);
}

std::vector<double> pack_point(const GenFunc& S, const std::vector<double>& p1, const std::vector<double>& p2,
                               const std::vector<double>& x) {
    const int d = S.dimension;
    if (static_cast<int>(p1.size()) != d || static_cast<int>(p2.size()) != d || static_cast<int>(x.size()) != d)
        throw std::invalid_argument("genfunc: argument dimension mismatch");
    check_finite(p1, "p1");
    check_finite(p2, "p2");
    check_finite(x, "x");
    std::vector<double> pt;
    pt.reserve(static_cast<std::size_t>(3 * d));
    pt.insert(pt.end(), p1.begin(), p1.end());
    pt.insert(pt.end(), p2.begin(), p2.end());
    pt.insert(pt.end(), x.begin(), x.end());
    return pt;
}

}  // namespace

double eval_genfunc(const GenFunc& S, double eps, const std::vector<double>& p1, const std::vector<double>& p2,
                    const std::vector<double>& x) {
    if (!std::isfinite(eps)) throw std::invalid_argument("genfunc: non-finite eps");
    auto pt = pack_point(S, p1, p2, x);
    double acc = GenFunc::base_term(p1, p2, x);
    double ep = 1.0;
    for (int n = 1; n <= S.order; ++n) {
        ep *= eps;
        acc += ep * S.term(n).eval(pt);
    }
    return acc;
}

std::vector<double> grad_genfunc(const GenFunc& S, double eps, const std::vector<double>& p1,
                                 const std::vector<double>& p2, const std::vector<double>& x, GradBlock which) {
    if (!std::isfinite(eps)) throw std::invalid_argument("genfunc: non-finite eps");
    auto pt = pack_point(S, p1, p2, x);
    const int d = S.dimension;
    std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
    // gradient of the base term (p1 + p2) . x
    for (int i = 0; i < d; ++i) {
        if (which == GradBlock::X)
            grad[static_cast<std::size_t>(i)] = p1[static_cast<std::size_t>(i)] + p2[static_cast<std::size_t>(i)];
        else
            grad[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    }
    double ep = 1.0;
    for (int n = 1; n <= S.order; ++n) {
        ep *= eps;
        for (int i = 0; i < d; ++i) {
            int axis = which == GradBlock::P1 ? var_p1(d, i) : which == GradBlock::P2 ? var_p2(d, i) : var_x(d, i);
            grad[static_cast<std::size_t>(i)] += ep * S.term(n).derivative(axis).eval(pt);
        }
    }
    return grad;
}

double convergence_radius(const GenFunc& S) { return S.radius; }

bool in_convergence_ball(const GenFunc& S, const std::vector<double>& p1, const std::vector<double>& p2) {
    double n1 = 0.0, n2 = 0.0;
    for (double c : p1) n1 += c * c;
    for (double c : p2) n2 += c * c;
    return std::sqrt(n1) <= S.radius && std::sqrt(n2) <= S.radius;
}

}  // namespace groupoidgen
