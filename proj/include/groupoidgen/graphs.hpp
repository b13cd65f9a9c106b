#pragma once

#include <optional>
#include <string>
#include <vector>

#include "groupoidgen/poly.hpp"

namespace groupoidgen {

/// Ground vertex encodings in edge-target slots. Aerial vertices are 1..n.
inline constexpr int kGround1 = -1;
inline constexpr int kGround2 = -2;

inline bool is_ground(int target) { return target < 0; }

/// Kontsevich graph of type (n,2): n aerial vertices, each with an ordered
/// pair of outgoing edges into (aerial union {ground 1, ground 2}).
struct KGraph {
    int n = 0;
    std::vector<int> gamma1;  // first edge target per aerial vertex, index 0 -> vertex 1
    std::vector<int> gamma2;  // second edge target

    int first_target(int vertex) const { return gamma1[static_cast<std::size_t>(vertex - 1)]; }
    int second_target(int vertex) const { return gamma2[static_cast<std::size_t>(vertex - 1)]; }

    bool operator==(const KGraph& rhs) const = default;

    /// Sort key: the concatenated (gamma1, gamma2) tuple.
    std::vector<int> lex_key() const;
    /// Compact text form, also the weight-cache key: "n:(a,b)(c,d)...".
    std::string key() const;

    void validate() const;  // no self-edges, distinct targets, range checks
};

/// Number of aerial-to-aerial edges.
int aerial_edge_count(const KGraph& g);

/// True when the undirected aerial skeleton is acyclic (no repeated pair
/// either); with `require_connected` additionally spanning.
bool skeleton_is_forest(const KGraph& g, bool require_connected);

/// A KGraph whose aerial skeleton is a spanning tree.
struct TreeGraph {
    KGraph graph;

    explicit TreeGraph(KGraph g);
    int n() const { return graph.n; }
};

enum class TerminalKind { Type1, Type2, Grounded };

struct TerminalClass {
    int vertex;
    TerminalKind kind;
};

/// How a tree decomposes after removing one terminal vertex.
struct Decomposition {
    int removed_vertex;
    TerminalKind kind;
    int removed_gamma1;
    int removed_gamma2;
    // Type1 / Grounded removal leaves a single smaller tree, Type2 leaves two.
    std::vector<TreeGraph> parts;
    // parts[k] vertex i corresponds to original vertex part_labels[k][i-1].
    std::vector<std::vector<int>> part_labels;
};

/// All labeled Kontsevich trees with n aerial vertices, in lexicographic
/// order of the (gamma1, gamma2) tuples.
std::vector<TreeGraph> enumerate_trees(int n);

/// Sensitivity-analysis variant: graphs whose skeleton is merely acyclic
/// (possibly disconnected). Exhaustive filter, practical for n <= 5.
std::vector<KGraph> enumerate_forest_graphs(int n);

/// Aerial vertices with no incoming edge, classified. Non-empty for trees.
std::vector<TerminalClass> terminal_vertices(const TreeGraph& g);

/// Removes one terminal vertex (Type1 preferred) and relabels the remainder.
Decomposition decompose(const TreeGraph& g);

/// (16e)^n * n!; throws on floating-point overflow.
double count_bound(int n);

/// True when at least one edge lands on each of the two ground vertices.
bool touches_both_grounds(const KGraph& g);

}  // namespace groupoidgen
