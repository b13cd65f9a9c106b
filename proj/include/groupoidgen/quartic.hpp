#pragma once

#include <vector>

namespace groupoidgen {

/// Real roots of c0 + c1 x + c2 x^2, ascending.
std::vector<double> solve_real_quadratic(double c2, double c1, double c0);

/// Real roots of c0 + c1 x + c2 x^2 + c3 x^3, ascending.
std::vector<double> solve_real_cubic(double c3, double c2, double c1, double c0);

/// Real roots of c0 + ... + c4 x^4, ascending, Newton-polished, deduplicated.
/// Gracefully degrades when leading coefficients vanish.
std::vector<double> solve_real_quartic(double c4, double c3, double c2, double c1, double c0);

}  // namespace groupoidgen
