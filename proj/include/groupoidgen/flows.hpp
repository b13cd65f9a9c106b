#pragma once

#include <vector>

#include "groupoidgen/groupoid.hpp"

namespace groupoidgen {

/// Uniform-grid trajectory on [0, 1].
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    int step_count = 0;
};

struct FlowOptions {
    double bounding_box = 100.0;  // abort when any |state component| leaves this box
};

/// RK4 on xdot = B(x) p with B = 2 eps alpha; global error O(steps^-4).
Trajectory poisson_flow(const PoissonStructure& ps, double eps, const std::vector<double>& p,
                        const std::vector<double>& x0, int steps, const FlowOptions& opts = {});

/// Q'(p, x) = integral_0^1 x(t) dt by composite Simpson over the RK4 grid.
std::vector<double> karasev_Q(const PoissonStructure& ps, double eps, const std::vector<double>& p,
                              const std::vector<double>& x0, int steps, const FlowOptions& opts = {});

/// Newton inversion of x -> Q'(p, x): returns x with Q'(p, x) ~= q.
std::vector<double> symmetric_source(const PoissonStructure& ps, double eps, const std::vector<double>& p,
                                     const std::vector<double>& q, int steps, double newton_tol,
                                     const FlowOptions& opts = {});

struct EndpointReport {
    double endpoint_mismatch = 0.0;   // ||x(1) - t(p, q)||
    double q_from_Q = 0.0;            // ||Q(p, x(0)) - q||
    double q_from_Qt = 0.0;           // ||Q~(p, x(1)) - q||
    std::vector<double> x0, x1;
};

/// Integrates the Poisson flow from source(pt) and compares the endpoint
/// with target(pt); also checks the endpoint identities for q.
EndpointReport endpoint_check(const GroupoidMaps& maps, const PoissonStructure& ps, double eps, const PhasePoint& pt,
                              int steps, const FlowOptions& opts = {});

struct ExpMapResult {
    std::vector<double> input;   // pbar
    std::vector<double> output;  // p(1)
    std::vector<double> base;    // x0
    double identity_defect = 0.0;  // ||p(1) - pbar||
};

/// RK4 on pdot = (dt/dq)^T pbar along the constrained path q = Q(p, x0).
ExpMapResult exp_map(const GroupoidMaps& maps, double eps, const std::vector<double>& x0,
                     const std::vector<double>& pbar, int steps);

struct ComparisonReport {
    double max_delta = 0.0;  // max ||Q'(p,x) - Q(p,x)|| over the sample
    std::vector<double> deltas;
};

/// Karasev symmetric inverse against the generating-function inverse.
ComparisonReport comparison_check(const GroupoidMaps& maps, const PoissonStructure& ps, double eps,
                                  const std::vector<PhasePoint>& sample, int steps, const FlowOptions& opts = {});

struct LiftReport {
    Trajectory phase_trajectory;          // states are (p, q) pairs, length 2d
    double max_source_drift = 0.0;        // max_i max_t |s^i(p(t),q(t)) - s^i(p(0),q(0))|
    double max_projection_residual = 0.0; // ||t(p(t),q(t)) - y(t)|| vs independent Poisson flow y
};

/// Lifted Hamiltonian flow with H_f = -f o t; source components are the
/// conserved quantities and the target projection follows the base Poisson
/// flow xdot = B(x) grad f(x).
LiftReport hamiltonian_lift(const GroupoidMaps& maps, const PoissonStructure& ps, double eps, const MultiPoly& f,
                            const PhasePoint& start, int steps, const FlowOptions& opts = {});

}  // namespace groupoidgen
