#pragma once

#include <vector>

#include "groupoidgen/genfunc.hpp"
#include "groupoidgen/poisson.hpp"

namespace groupoidgen {

/// Point (p, x) of the cotangent chart T*U.
struct PhasePoint {
    std::vector<double> p;
    std::vector<double> x;

    PhasePoint() = default;
    PhasePoint(std::vector<double> p_, std::vector<double> x_);
};

struct LieResiduals {
    double source_residual = 0.0;       // max |{s^i,s^j} - B^{ij}(s)|
    double target_residual = 0.0;       // max |{t^i,t^j} + B^{ij}(t)|
    double commutation_residual = 0.0;  // max |{s^i,t^j}|
};

/// Structure maps and derivative data of the truncated generating function.
///
/// Phase-space polynomials use variables p_0..p_{d-1}, x_0..x_{d-1}. Orders
/// are kept separate so evaluation folds in eps at call time.
class GroupoidMaps {
  public:
    explicit GroupoidMaps(const GenFunc& S);

    int dimension() const { return d_; }
    int order() const { return order_; }
    const GenFunc& genfunc() const { return S_; }

    std::vector<double> source(double eps, const PhasePoint& pt) const;
    std::vector<double> target(double eps, const PhasePoint& pt) const;
    /// Q(p, x) = grad_{p2} S(-p, p, x).
    std::vector<double> inverse_Q(double eps, const std::vector<double>& p, const std::vector<double>& x) const;
    /// Q~(p, x) = grad_{p1} S(p, -p, x).
    std::vector<double> inverse_Qt(double eps, const std::vector<double>& p, const std::vector<double>& x) const;

    /// Row-major d x d Jacobians.
    std::vector<double> jac_source_x(double eps, const PhasePoint& pt) const;
    std::vector<double> jac_target_x(double eps, const PhasePoint& pt) const;
    std::vector<double> jac_target_p(double eps, const PhasePoint& pt) const;

    /// Gradient of S over one argument block at a full (p1, p2, x) triple.
    std::vector<double> grad_S(double eps, GradBlock which, const std::vector<double>& p1, const std::vector<double>& p2,
                               const std::vector<double>& x) const;
    double eval_S(double eps, const std::vector<double>& p1, const std::vector<double>& p2,
                  const std::vector<double>& x) const;
    /// Hessian block (d x d row-major) of S in (which, which) variables.
    std::vector<double> hess_S(double eps, GradBlock which, const std::vector<double>& p1, const std::vector<double>& p2,
                               const std::vector<double>& x) const;

    /// Per-order phase polynomials of the source/target components,
    /// s_orders()[i][n] = order-n part of s^i (momenta then base variables).
    const std::vector<std::vector<MultiPoly>>& s_orders() const { return s_ord_; }
    const std::vector<std::vector<MultiPoly>>& t_orders() const { return t_ord_; }

  private:
    GenFunc S_;
    int d_;
    int order_;
    std::vector<std::vector<MultiPoly>> s_ord_, t_ord_, q_ord_, qt_ord_;

    std::vector<double> eval_components(const std::vector<std::vector<MultiPoly>>& comp, double eps,
                                        const std::vector<double>& phase_pt) const;
};

std::vector<double> source(const GenFunc& S, double eps, const PhasePoint& pt);
std::vector<double> target(const GenFunc& S, double eps, const PhasePoint& pt);
std::vector<double> local_inverse_Q(const GenFunc& S, double eps, const std::vector<double>& p,
                                    const std::vector<double>& x);
std::vector<double> local_inverse_Qt(const GenFunc& S, double eps, const std::vector<double>& p,
                                     const std::vector<double>& x);

struct SgaOptions {
    int max_iterations = 100;
    double tolerance = 1e-13;
    double damping = 0.5;
    int fixed_point_steps = 12;
};

/// Absolute defect of the two-sided generating identity. Solves the four
/// implicit equations by damped fixed-point iteration refined by Newton.
double sga_residual(const GenFunc& S, double eps, const std::vector<double>& p1, const std::vector<double>& p2,
                    const std::vector<double>& p3, const std::vector<double>& x, const SgaOptions& opts = {});

/// Canonical-bracket residuals of the source/target pair against
/// B = 2 eps alpha over a sample of phase points.
LieResiduals lie_residuals(const GenFunc& S, const PoissonStructure& ps, double eps,
                           const std::vector<PhasePoint>& sample);

/// det of the x-Jacobian of the source map at pt.
double nondegeneracy_check(const GenFunc& S, double eps, const PhasePoint& pt);

}  // namespace groupoidgen
