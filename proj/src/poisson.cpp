#include "groupoidgen/poisson.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace groupoidgen {

PoissonStructure::PoissonStructure(int dimension, std::vector<std::vector<MultiPoly>> bivector)
    : d_(dimension), alpha_(std::move(bivector)) {
    if (d_ <= 0) throw std::invalid_argument("PoissonStructure: dimension must be positive");
    if (static_cast<int>(alpha_.size()) != d_) throw std::invalid_argument("PoissonStructure: bivector row count mismatch");
    for (const auto& row : alpha_) {
        if (static_cast<int>(row.size()) != d_) throw std::invalid_argument("PoissonStructure: bivector column count mismatch");
        for (const auto& p : row)
            if (p.nvars() != d_) throw std::invalid_argument("PoissonStructure: component variable count mismatch");
    }
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j <= i; ++j) {
            MultiPoly sum = alpha_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                            alpha_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            if (!sum.is_zero()) throw std::invalid_argument("PoissonStructure: bivector is not antisymmetric");
        }
    }
}

PoissonStructure PoissonStructure::from_upper_triangle(int dimension,
                                                       const std::vector<std::tuple<int, int, MultiPoly>>& entries) {
    if (dimension <= 0) throw std::invalid_argument("PoissonStructure: dimension must be positive");
    std::vector<std::vector<MultiPoly>> m(static_cast<std::size_t>(dimension),
                                          std::vector<MultiPoly>(static_cast<std::size_t>(dimension), MultiPoly(dimension)));
    for (const auto& [i, j, p] : entries) {
        if (i < 0 || j < 0 || i >= dimension || j >= dimension) throw std::invalid_argument("PoissonStructure: index out of range");
        if (i >= j) throw std::invalid_argument("PoissonStructure: only strict upper-triangle entries accepted");
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += p;
        m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -= p;
    }
    return PoissonStructure(dimension, std::move(m));
}

PoissonStructure PoissonStructure::zero(int dimension) {
    return from_upper_triangle(dimension, {});
}

PoissonStructure PoissonStructure::constant(const std::vector<std::vector<double>>& matrix) {
    int d = static_cast<int>(matrix.size());
    std::vector<std::tuple<int, int, MultiPoly>> entries;
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(matrix[static_cast<std::size_t>(i)].size()) != d)
            throw std::invalid_argument("PoissonStructure::constant: matrix not square");
        for (int j = i + 1; j < d; ++j) {
            double a = matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            double b = matrix[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            if (a != -b) throw std::invalid_argument("PoissonStructure::constant: matrix not antisymmetric");
            if (a != 0.0) entries.emplace_back(i, j, MultiPoly::constant(d, a));
        }
        if (matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] != 0.0)
            throw std::invalid_argument("PoissonStructure::constant: nonzero diagonal");
    }
    return from_upper_triangle(d, entries);
}

PoissonStructure PoissonStructure::so3() {
    // alpha^{12} = x3, alpha^{13} = -x2, alpha^{23} = x1
    std::vector<std::tuple<int, int, MultiPoly>> entries;
    entries.emplace_back(0, 1, MultiPoly::monomial(3, 2, 1, 1.0));
    entries.emplace_back(0, 2, MultiPoly::monomial(3, 1, 1, -1.0));
    entries.emplace_back(1, 2, MultiPoly::monomial(3, 0, 1, 1.0));
    return from_upper_triangle(3, entries);
}

const MultiPoly& PoissonStructure::component(int i, int j) const {
    if (i < 0 || j < 0 || i >= d_ || j >= d_) throw std::invalid_argument("PoissonStructure::component: index out of range");
    return alpha_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

int PoissonStructure::max_degree() const {
    int deg = -1;
    for (const auto& row : alpha_)
        for (const auto& p : row) deg = std::max(deg, p.total_degree());
    return deg;
}

std::vector<std::vector<double>> eval_bivector(const PoissonStructure& ps, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != ps.dimension()) throw std::invalid_argument("eval_bivector: point dimension mismatch");
    int d = ps.dimension();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ps.component(i, j).eval(x);
    return out;
}

double jacobi_residual(const PoissonStructure& ps) {
    int d = ps.dimension();
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                MultiPoly jac(d);
                for (int l = 0; l < d; ++l) {
                    jac += ps.component(l, k) * ps.component(i, j).derivative(l);
                    jac += ps.component(l, i) * ps.component(j, k).derivative(l);
                    jac += ps.component(l, j) * ps.component(k, i).derivative(l);
                }
                worst = std::max(worst, jac.max_abs_coeff());
            }
        }
    }
    return worst;
}

std::vector<std::vector<int>> multi_indices_up_to(int dimension, int max_order) {
    std::vector<std::vector<int>> out;
    std::vector<int> beta(static_cast<std::size_t>(dimension), 0);
    for (int order = 0; order <= max_order; ++order) {
        std::function<void(int, int)> rec = [&](int axis, int remaining) {
            if (axis == dimension - 1) {
                beta[static_cast<std::size_t>(axis)] = remaining;
                out.push_back(beta);
                return;
            }
            for (int k = 0; k <= remaining; ++k) {
                beta[static_cast<std::size_t>(axis)] = k;
                rec(axis + 1, remaining - k);
            }
        };
        rec(0, order);
    }
    return out;
}

double analyticity_bound(const PoissonStructure& ps, const std::vector<double>& x, int max_order) {
    if (static_cast<int>(x.size()) != ps.dimension()) throw std::invalid_argument("analyticity_bound: point dimension mismatch");
    if (max_order < 0) throw std::invalid_argument("analyticity_bound: negative order");
    int d = ps.dimension();
    double m = 1.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            // Walk all partials |beta| <= max_order of this component.
            for (const auto& beta : multi_indices_up_to(d, max_order)) {
                MultiPoly p = ps.component(i, j);
                int order = 0;
                for (int axis = 0; axis < d; ++axis) {
                    for (int rep = 0; rep < beta[static_cast<std::size_t>(axis)]; ++rep) p = p.derivative(axis);
                    order += beta[static_cast<std::size_t>(axis)];
                }
                double v = std::abs(p.eval(x));
                if (v == 0.0) continue;
                // constraint M^(order+1) >= v
                m = std::max(m, std::pow(v, 1.0 / static_cast<double>(order + 1)));
            }
        }
    }
    return m;
}

}  // namespace groupoidgen
