#include "groupoidgen/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace groupoidgen {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    /// false when the edge closes a cycle.
    bool join(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent[static_cast<std::size_t>(ra)] = rb;
        return true;
    }
};

void check_target(int n, int vertex, int target) {
    if (target == kGround1 || target == kGround2) return;
    if (target < 1 || target > n) throw std::invalid_argument("KGraph: edge target out of range");
    if (target == vertex) throw std::invalid_argument("KGraph: self-edge");
}

/// Labeled trees on n >= 2 vertices from Pruefer sequences.
std::vector<std::vector<std::pair<int, int>>> labeled_trees(int n) {
    std::vector<std::vector<std::pair<int, int>>> trees;
    if (n == 2) {
        trees.push_back({{1, 2}});
        return trees;
    }
    std::vector<int> seq(static_cast<std::size_t>(n - 2), 1);
    while (true) {
        // decode
        std::vector<int> degree(static_cast<std::size_t>(n + 1), 1);
        for (int a : seq) degree[static_cast<std::size_t>(a)]++;
        std::vector<std::pair<int, int>> edges;
        std::vector<int> deg = degree;
        std::set<int> leaves;
        for (int v = 1; v <= n; ++v)
            if (deg[static_cast<std::size_t>(v)] == 1) leaves.insert(v);
        for (int a : seq) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.emplace_back(leaf, a);
            if (--deg[static_cast<std::size_t>(a)] == 1) leaves.insert(a);
        }
        int u = *leaves.begin();
        int v = *std::next(leaves.begin());
        edges.emplace_back(u, v);
        trees.push_back(std::move(edges));
        // next sequence
        int pos = n - 3;
        while (pos >= 0 && seq[static_cast<std::size_t>(pos)] == n) {
            seq[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0) break;
        seq[static_cast<std::size_t>(pos)]++;
    }
    return trees;
}

}  // namespace

std::vector<int> KGraph::lex_key() const {
    std::vector<int> key = gamma1;
    key.insert(key.end(), gamma2.begin(), gamma2.end());
    return key;
}

std::string KGraph::key() const {
    std::ostringstream os;
    os << n << ":";
    for (int v = 1; v <= n; ++v) os << "(" << first_target(v) << "," << second_target(v) << ")";
    return os.str();
}

void KGraph::validate() const {
    if (n <= 0) throw std::invalid_argument("KGraph: vertex count must be positive");
    if (static_cast<int>(gamma1.size()) != n || static_cast<int>(gamma2.size()) != n)
        throw std::invalid_argument("KGraph: edge map size mismatch");
    for (int v = 1; v <= n; ++v) {
        check_target(n, v, first_target(v));
        check_target(n, v, second_target(v));
        if (first_target(v) == second_target(v)) throw std::invalid_argument("KGraph: coincident edge targets");
    }
}

int aerial_edge_count(const KGraph& g) {
    int count = 0;
    for (int v = 1; v <= g.n; ++v) {
        if (!is_ground(g.first_target(v))) ++count;
        if (!is_ground(g.second_target(v))) ++count;
    }
    return count;
}

bool skeleton_is_forest(const KGraph& g, bool require_connected) {
    UnionFind uf(g.n + 1);
    int joins = 0;
    for (int v = 1; v <= g.n; ++v) {
        for (int t : {g.first_target(v), g.second_target(v)}) {
            if (is_ground(t)) continue;
            if (!uf.join(v, t)) return false;  // cycle (double edges included)
            ++joins;
        }
    }
    if (require_connected && joins != g.n - 1) return false;
    return true;
}

TreeGraph::TreeGraph(KGraph g) : graph(std::move(g)) {
    graph.validate();
    if (!skeleton_is_forest(graph, /*require_connected=*/true))
        throw std::invalid_argument("TreeGraph: aerial skeleton is not a spanning tree");
}

std::vector<TreeGraph> enumerate_trees(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_trees: n must be >= 1");
    std::vector<KGraph> found;

    if (n == 1) {
        found.push_back(KGraph{1, {kGround1}, {kGround2}});
        found.push_back(KGraph{1, {kGround2}, {kGround1}});
    } else {
        // Skeleton trees via Pruefer sequences, then edge orientations with
        // out-degree <= 2, then slot and ground assignments per vertex.
        for (const auto& edges : labeled_trees(n)) {
            const int ne = n - 1;
            for (int mask = 0; mask < (1 << ne); ++mask) {
                std::vector<std::vector<int>> out(static_cast<std::size_t>(n + 1));
                bool ok = true;
                for (int e = 0; e < ne && ok; ++e) {
                    auto [a, b] = edges[static_cast<std::size_t>(e)];
                    int src = (mask >> e) & 1 ? a : b;
                    int dst = (mask >> e) & 1 ? b : a;
                    out[static_cast<std::size_t>(src)].push_back(dst);
                    if (out[static_cast<std::size_t>(src)].size() > 2) ok = false;
                }
                if (!ok) continue;
                // Per-vertex slot options.
                std::vector<std::vector<std::pair<int, int>>> options(static_cast<std::size_t>(n + 1));
                for (int v = 1; v <= n; ++v) {
                    auto& opts = options[static_cast<std::size_t>(v)];
                    const auto& targets = out[static_cast<std::size_t>(v)];
                    if (targets.empty()) {
                        opts = {{kGround1, kGround2}, {kGround2, kGround1}};
                    } else if (targets.size() == 1) {
                        int t = targets[0];
                        opts = {{t, kGround1}, {t, kGround2}, {kGround1, t}, {kGround2, t}};
                    } else {
                        opts = {{targets[0], targets[1]}, {targets[1], targets[0]}};
                    }
                }
                KGraph g;
                g.n = n;
                g.gamma1.assign(static_cast<std::size_t>(n), 0);
                g.gamma2.assign(static_cast<std::size_t>(n), 0);
                std::function<void(int)> assign = [&](int vertex) {
                    if (vertex > n) {
                        found.push_back(g);
                        return;
                    }
                    for (const auto& [t1, t2] : options[static_cast<std::size_t>(vertex)]) {
                        g.gamma1[static_cast<std::size_t>(vertex - 1)] = t1;
                        g.gamma2[static_cast<std::size_t>(vertex - 1)] = t2;
                        assign(vertex + 1);
                    }
                };
                assign(1);
            }
        }
    }

    std::sort(found.begin(), found.end(), [](const KGraph& a, const KGraph& b) { return a.lex_key() < b.lex_key(); });
    std::vector<TreeGraph> out;
    out.reserve(found.size());
    for (auto& g : found) out.emplace_back(std::move(g));
    return out;
}

std::vector<KGraph> enumerate_forest_graphs(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_forest_graphs: n must be >= 1");
    std::vector<KGraph> found;
    std::vector<int> targets;
    targets.reserve(static_cast<std::size_t>(n) + 1);
    for (int t : {kGround1, kGround2}) targets.push_back(t);
    for (int v = 1; v <= n; ++v) targets.push_back(v);
    KGraph g;
    g.n = n;
    g.gamma1.assign(static_cast<std::size_t>(n), 0);
    g.gamma2.assign(static_cast<std::size_t>(n), 0);
    std::function<void(int)> rec = [&](int vertex) {
        if (vertex > n) {
            if (skeleton_is_forest(g, false)) found.push_back(g);
            return;
        }
        for (int t1 : targets) {
            if (t1 == vertex) continue;
            for (int t2 : targets) {
                if (t2 == vertex || t2 == t1) continue;
                g.gamma1[static_cast<std::size_t>(vertex - 1)] = t1;
                g.gamma2[static_cast<std::size_t>(vertex - 1)] = t2;
                rec(vertex + 1);
            }
        }
    };
    rec(1);
    std::sort(found.begin(), found.end(), [](const KGraph& a, const KGraph& b) { return a.lex_key() < b.lex_key(); });
    return found;
}

std::vector<TerminalClass> terminal_vertices(const TreeGraph& tg) {
    const KGraph& g = tg.graph;
    std::vector<int> incoming(static_cast<std::size_t>(g.n + 1), 0);
    for (int v = 1; v <= g.n; ++v) {
        for (int t : {g.first_target(v), g.second_target(v)})
            if (!is_ground(t)) incoming[static_cast<std::size_t>(t)]++;
    }
    std::vector<TerminalClass> out;
    for (int v = 1; v <= g.n; ++v) {
        if (incoming[static_cast<std::size_t>(v)] != 0) continue;
        int grounds = static_cast<int>(is_ground(g.first_target(v))) + static_cast<int>(is_ground(g.second_target(v)));
        TerminalKind kind = grounds == 0 ? TerminalKind::Type2 : (grounds == 1 ? TerminalKind::Type1 : TerminalKind::Grounded);
        out.push_back({v, kind});
    }
    return out;
}

namespace {

/// Induced subgraph on `keep` (sorted original labels), relabeled 1..k.
TreeGraph induced_subtree(const KGraph& g, const std::vector<int>& keep) {
    std::vector<int> new_label(static_cast<std::size_t>(g.n + 1), 0);
    for (std::size_t i = 0; i < keep.size(); ++i) new_label[static_cast<std::size_t>(keep[i])] = static_cast<int>(i) + 1;
    KGraph sub;
    sub.n = static_cast<int>(keep.size());
    for (int v : keep) {
        auto relabel = [&](int t) {
            if (is_ground(t)) return t;
            int nl = new_label[static_cast<std::size_t>(t)];
            if (nl == 0) throw std::logic_error("induced_subtree: edge leaves the component");
            return nl;
        };
        sub.gamma1.push_back(relabel(g.first_target(v)));
        sub.gamma2.push_back(relabel(g.second_target(v)));
    }
    return TreeGraph(std::move(sub));
}

}  // namespace

Decomposition decompose(const TreeGraph& tg) {
    const KGraph& g = tg.graph;
    if (g.n < 2) throw std::invalid_argument("decompose: nothing to decompose for n = 1");
    auto terminals = terminal_vertices(tg);
    if (terminals.empty()) throw std::logic_error("decompose: tree without terminal vertex");

    const TerminalClass* pick = nullptr;
    for (const auto& t : terminals)
        if (t.kind == TerminalKind::Type1) {
            pick = &t;
            break;
        }
    if (pick == nullptr)
        for (const auto& t : terminals)
            if (t.kind == TerminalKind::Type2) {
                pick = &t;
                break;
            }
    if (pick == nullptr) throw std::logic_error("decompose: only grounded terminals on n >= 2 tree");

    Decomposition out;
    out.removed_vertex = pick->vertex;
    out.kind = pick->kind;
    out.removed_gamma1 = g.first_target(pick->vertex);
    out.removed_gamma2 = g.second_target(pick->vertex);

    std::vector<int> rest;
    for (int v = 1; v <= g.n; ++v)
        if (v != pick->vertex) rest.push_back(v);

    if (pick->kind == TerminalKind::Type1) {
        out.parts.push_back(induced_subtree(g, rest));
        out.part_labels.push_back(rest);
        return out;
    }

    // Type2: split the remaining vertices by skeleton component.
    UnionFind uf(g.n + 1);
    for (int v : rest) {
        for (int t : {g.first_target(v), g.second_target(v)})
            if (!is_ground(t)) uf.join(v, t);
    }
    std::vector<int> comp_a, comp_b;
    int root_a = uf.find(rest.front());
    for (int v : rest) (uf.find(v) == root_a ? comp_a : comp_b).push_back(v);
    if (comp_b.empty()) throw std::logic_error("decompose: type-2 removal did not split the skeleton");
    out.parts.push_back(induced_subtree(g, comp_a));
    out.part_labels.push_back(comp_a);
    out.parts.push_back(induced_subtree(g, comp_b));
    out.part_labels.push_back(comp_b);
    return out;
}

double count_bound(int n) {
    if (n < 1) throw std::invalid_argument("count_bound: n must be >= 1");
    double b = std::pow(16.0 * std::exp(1.0), static_cast<double>(n)) * std::tgamma(static_cast<double>(n) + 1.0);
    if (!std::isfinite(b)) throw std::overflow_error("count_bound: value exceeds double range");
    return b;
}

bool touches_both_grounds(const KGraph& g) {
    bool g1 = false, g2 = false;
    for (int v = 1; v <= g.n; ++v) {
        for (int t : {g.first_target(v), g.second_target(v)}) {
            g1 = g1 || t == kGround1;
            g2 = g2 || t == kGround2;
        }
    }
    return g1 && g2;
}

}  // namespace groupoidgen
