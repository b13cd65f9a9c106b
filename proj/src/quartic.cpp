#include "groupoidgen/quartic.hpp"

#include <algorithm>
#include <cmath>

namespace groupoidgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

double eval_poly(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

/// Newton polish on the polynomial with ascending coefficients c.
double polish(const std::vector<double>& c, double x) {
    std::vector<double> der(c.size() > 1 ? c.size() - 1 : 0);
    for (std::size_t k = 1; k < c.size(); ++k) der[k - 1] = c[k] * static_cast<double>(k);
    for (int it = 0; it < 8; ++it) {
        double f = eval_poly(c, x);
        double df = eval_poly(der, x);
        if (df == 0.0) break;
        double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return x;
}

void dedupe_sorted(std::vector<double>& roots, double scale) {
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() || std::abs(r - out.back()) > 1e-9 * (scale + std::abs(r))) out.push_back(r);
    }
    roots = std::move(out);
}

}  // namespace

std::vector<double> solve_real_quadratic(double c2, double c1, double c0) {
    std::vector<double> roots;
    if (c2 == 0.0) {
        if (c1 != 0.0) roots.push_back(-c0 / c1);
        return roots;
    }
    double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return roots;
    double sq = std::sqrt(disc);
    double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
    if (q != 0.0) {
        roots.push_back(q / c2);
        roots.push_back(c0 / q);
    } else {
        roots.push_back(0.0);
        roots.push_back(-c1 / c2);
    }
    std::sort(roots.begin(), roots.end());
    if (disc == 0.0) roots.resize(1);
    return roots;
}

std::vector<double> solve_real_cubic(double c3, double c2, double c1, double c0) {
    double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0) return {};
    if (std::abs(c3) < 1e-14 * scale) return solve_real_quadratic(c2, c1, c0);

    double a = c2 / c3, b = c1 / c3, c = c0 / c3;
    // depressed: t = x + a/3,  t^3 + p t + q
    double p = b - a * a / 3.0;
    double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    std::vector<double> roots;
    double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        double sq = std::sqrt(disc);
        double u = std::cbrt(-0.5 * q + sq);
        double v = std::cbrt(-0.5 * q - sq);
        roots.push_back(u + v - a / 3.0);
    } else if (p == 0.0 && q == 0.0) {
        roots.push_back(-a / 3.0);
    } else {
        double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2.0 * kPi * static_cast<double>(k) / 3.0) - a / 3.0);
    }
    std::vector<double> coeffs = {c0, c1, c2, c3};
    for (double& r : roots) r = polish(coeffs, r);
    dedupe_sorted(roots, 1.0 + std::abs(a));
    return roots;
}

std::vector<double> solve_real_quartic(double c4, double c3, double c2, double c1, double c0) {
    double scale = std::max({std::abs(c4), std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0) return {};
    if (std::abs(c4) < 1e-12 * scale) return solve_real_cubic(c3, c2, c1, c0);

    double a = c3 / c4, b = c2 / c4, c = c1 / c4, d = c0 / c4;
    // depressed: x = y - a/4,  y^4 + p y^2 + q y + r
    double a2 = a * a;
    double p = b - 3.0 * a2 / 8.0;
    double q = c - a * b / 2.0 + a2 * a / 8.0;
    double r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

    std::vector<double> yroots;
    double yscale = 1.0 + std::abs(p) + std::abs(q) + std::abs(r);
    if (std::abs(q) < 1e-13 * yscale) {
        // biquadratic
        for (double z : solve_real_quadratic(1.0, p, r)) {
            if (z < 0.0) continue;
            double sz = std::sqrt(std::max(0.0, z));
            yroots.push_back(sz);
            if (sz > 0.0) yroots.push_back(-sz);
        }
    } else {
        // factor as (y^2 + alpha y + beta)(y^2 - alpha y + gamma);
        // u = alpha^2 solves u^3 + 2p u^2 + (p^2 - 4r) u - q^2 = 0
        double u = -1.0;
        for (double cand : solve_real_cubic(1.0, 2.0 * p, p * p - 4.0 * r, -q * q)) u = std::max(u, cand);
        if (u > 0.0) {
            double alpha = std::sqrt(u);
            double beta = 0.5 * (p + u - q / alpha);
            double gamma = 0.5 * (p + u + q / alpha);
            for (double y : solve_real_quadratic(1.0, alpha, beta)) yroots.push_back(y);
            for (double y : solve_real_quadratic(1.0, -alpha, gamma)) yroots.push_back(y);
        }
    }

    std::vector<double> coeffs = {c0, c1, c2, c3, c4};
    std::vector<double> roots;
    roots.reserve(yroots.size());
    for (double y : yroots) roots.push_back(polish(coeffs, y - a / 4.0));
    // Polished candidates may agree or wander; keep genuine roots only.
    std::vector<double> good;
    for (double x : roots) {
        double fx = std::abs(eval_poly(coeffs, x));
        double mag = std::max(1.0, std::abs(x));
        double tol = 1e-7 * scale * mag * mag * mag * mag;
        if (fx <= tol) good.push_back(x);
    }
    dedupe_sorted(good, 1.0 + std::abs(a));
    return good;
}

}  // namespace groupoidgen
