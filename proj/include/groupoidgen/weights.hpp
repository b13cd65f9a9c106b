#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "groupoidgen/graphs.hpp"

namespace groupoidgen {

/// Point of the hyperbolic upper half-plane.
struct HPoint {
    double re = 0.0;
    double im = 1.0;

    HPoint() = default;
    HPoint(double re_, double im_);
};

/// Boundary point on the real axis (a ground vertex's position).
struct GroundPoint {
    double pos = 0.0;
};

inline constexpr GroundPoint kGroundPoint1{0.0};
inline constexpr GroundPoint kGroundPoint2{1.0};

/// Harmonic angle arg((w - z)/(w - conj z)), reduced to [0, 2*pi).
double harmonic_angle(const HPoint& z, const HPoint& w);
double harmonic_angle(const HPoint& z, GroundPoint w);

/// Gradient of the harmonic angle with respect to z = (x, y).
std::array<double, 2> harmonic_angle_grad_z(const HPoint& z, const HPoint& w);
std::array<double, 2> harmonic_angle_grad_z(const HPoint& z, GroundPoint w);
/// Gradient with respect to the aerial target w = (u, v).
std::array<double, 2> harmonic_angle_grad_w(const HPoint& z, const HPoint& w);

/// Monte-Carlo estimate of a tree weight.
struct WeightEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t discarded = 0;
    KGraph graph;
};

/// Kontsevich weight of a tree by angle-space Monte Carlo.
///
/// Configurations are reconstructed vertex by vertex from uniformly drawn
/// angle pairs along a topological order of the aerial edges; each vertex
/// contributes the orientation signs of its (at most four) preimage branches,
/// so the integrand is bounded by 4^n. Terminal vertices with both edges
/// grounded integrate to exactly +-1/2 and are folded in analytically.
/// Deterministic for fixed (graph, samples, seed) independent of thread
/// count.
WeightEstimate weight_mc(const TreeGraph& g, std::uint64_t samples, std::uint64_t seed, int threads = 0);

/// One configuration of aerial vertices compatible with an angle vector.
struct FiberConfiguration {
    std::vector<HPoint> positions;  // aerial vertex v at index v-1
    int orientation = 1;            // product of per-vertex Jacobian signs
};

/// All preimage configurations of the per-edge angle vector
/// (phi_1^1, phi_1^2, ..., phi_n^1, phi_n^2) under the tree's angle map.
std::vector<FiberConfiguration> enumerate_fiber_configurations(const TreeGraph& g, const std::vector<double>& angles);

/// Multi-start root-finding report for the fiber-cardinality bound.
struct FiberBoundReport {
    int n = 0;
    int bound = 0;           // 4^n
    int max_fiber_found = 0;
    std::uint64_t trials = 0;
    std::uint64_t nonconverged_starts = 0;
    bool bound_respected = true;
    std::vector<int> per_trial;
};

/// Samples random angle vectors and enumerates preimages with damped
/// multi-start Newton iterations on the full angle map (n <= 2 only).
FiberBoundReport fiber_bound_check(const TreeGraph& g, std::uint64_t trials, std::uint64_t seed);

/// Weight table keyed by KGraph::key().
using WeightTable = std::map<std::string, WeightEstimate>;

}  // namespace groupoidgen
