#pragma once

#include <vector>

#include "groupoidgen/graphs.hpp"
#include "groupoidgen/poisson.hpp"
#include "groupoidgen/poly.hpp"
#include "groupoidgen/weights.hpp"

namespace groupoidgen {

/// Variable layout of generating-function polynomials in dimension d:
/// indices [0, d) are the components of p1, [d, 2d) of p2, [2d, 3d) of x.
inline int var_p1(int d, int i) { (void)d; return i; }
inline int var_p2(int d, int i) { return d + i; }
inline int var_x(int d, int i) { return 2 * d + i; }

/// Symbol of a Kontsevich tree: bivector factors at aerial vertices,
/// derivatives along aerial edges, momentum factors along ground edges,
/// summed over all edge-index assignments. Homogeneous of degree n+1 in
/// the momentum variables.
MultiPoly tree_symbol(const TreeGraph& g, const PoissonStructure& ps);

/// Truncated universal generating function.
struct GenFunc {
    int dimension = 0;
    int order = 0;                 // truncation order N
    std::vector<MultiPoly> terms;  // terms[k] = S^(k+1), polynomials in 3d variables
    double analyticity_M = 1.0;    // M at the designated base point
    double radius = 0.0;           // 1/(64 e M^2)
    std::vector<double> base_point;

    const MultiPoly& term(int n) const { return terms.at(static_cast<std::size_t>(n - 1)); }
    /// The order-zero part (p1 + p2) . x evaluated at arguments.
    static double base_term(const std::vector<double>& p1, const std::vector<double>& p2, const std::vector<double>& x);
};

struct GenFuncBuild {
    GenFunc genfunc;
    /// Per-order standard errors, same monomial layout as genfunc.terms:
    /// coefficient of a monomial in coeff_sigma[k] is the 1-sigma error of
    /// the matching coefficient of S^(k+1) propagated from the weights.
    std::vector<MultiPoly> coeff_sigma;
};

/// Assembles S^(n) = (1/n!) sum_Gamma W_Gamma * B_Gamma for n = 1..N.
/// Every enumerated tree must have a weight in the table (keyed by
/// KGraph::key()); a missing entry is fatal.
GenFuncBuild build_genfunc(const PoissonStructure& ps, int order, const WeightTable& weights,
                           const std::vector<double>& base_point);

/// base + sum_n eps^n S^(n)(p1, p2, x); rejects non-finite inputs.
double eval_genfunc(const GenFunc& S, double eps, const std::vector<double>& p1, const std::vector<double>& p2,
                    const std::vector<double>& x);

enum class GradBlock { P1, P2, X };

/// Exact symbolic gradient of the truncated polynomial, evaluated.
std::vector<double> grad_genfunc(const GenFunc& S, double eps, const std::vector<double>& p1,
                                 const std::vector<double>& p2, const std::vector<double>& x, GradBlock which);

double convergence_radius(const GenFunc& S);

/// True when both momenta are within the guaranteed convergence ball.
bool in_convergence_ball(const GenFunc& S, const std::vector<double>& p1, const std::vector<double>& p2);

}  // namespace groupoidgen
