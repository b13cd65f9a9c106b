#pragma once

#include <vector>

#include "groupoidgen/poly.hpp"

namespace groupoidgen {

/// Polynomial Poisson bivector on an open chart of R^d.
///
/// Stores the full antisymmetric d x d matrix of polynomials in the base
/// coordinates. Construction validates antisymmetry; the Jacobi identity is
/// checked separately (jacobi_residual) so that invalid candidates can be
/// inspected in tests.
class PoissonStructure {
  public:
    PoissonStructure(int dimension, std::vector<std::vector<MultiPoly>> bivector);

    /// Builds from the strict upper triangle; the lower triangle is
    /// synthesized by antisymmetry and the diagonal is zero.
    static PoissonStructure from_upper_triangle(int dimension,
                                                const std::vector<std::tuple<int, int, MultiPoly>>& entries);

    static PoissonStructure zero(int dimension);
    /// Constant bivector from an antisymmetric matrix.
    static PoissonStructure constant(const std::vector<std::vector<double>>& matrix);
    /// The so(3)* linear structure: alpha^{ij}(x) = sum_k eps_{ijk} x^k.
    static PoissonStructure so3();

    int dimension() const { return d_; }
    const MultiPoly& component(int i, int j) const;

    /// Largest polynomial degree over all components (-1 for zero structure).
    int max_degree() const;

  private:
    int d_;
    std::vector<std::vector<MultiPoly>> alpha_;
};

/// alpha(x) as a numeric matrix.
std::vector<std::vector<double>> eval_bivector(const PoissonStructure& ps, const std::vector<double>& x);

/// Max absolute coefficient of the Jacobiator polynomials
/// sum_l (a^{lk} d_l a^{ij} + a^{li} d_l a^{jk} + a^{lj} d_l a^{ki})
/// over all (i,j,k); zero iff the structure satisfies the Jacobi identity.
double jacobi_residual(const PoissonStructure& ps);

/// Smallest M >= 1 with |d^beta alpha^{ij}(x)| <= M^(|beta|+1) for all i,j and
/// all multi-indices with |beta| <= max_order.
double analyticity_bound(const PoissonStructure& ps, const std::vector<double>& x, int max_order);

/// All multi-indices beta in N^d with |beta| <= max_order, graded order.
std::vector<std::vector<int>> multi_indices_up_to(int dimension, int max_order);

}  // namespace groupoidgen
