#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace groupoidgen {

/// Determinant of a row-major n x n matrix (copy taken, partial pivoting).
inline double matrix_det(std::vector<double> a, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r * n + col)]) > std::abs(a[static_cast<std::size_t>(piv * n + col)])) piv = r;
        double pval = a[static_cast<std::size_t>(piv * n + col)];
        if (pval == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[static_cast<std::size_t>(col * n + c)], a[static_cast<std::size_t>(piv * n + c)]);
            det = -det;
        }
        det *= a[static_cast<std::size_t>(col * n + col)];
        for (int r = col + 1; r < n; ++r) {
            double m = a[static_cast<std::size_t>(r * n + col)] / a[static_cast<std::size_t>(col * n + col)];
            if (m == 0.0) continue;
            for (int c = col; c < n; ++c) a[static_cast<std::size_t>(r * n + c)] -= m * a[static_cast<std::size_t>(col * n + c)];
        }
    }
    return det;
}

/// Solves a x = b in place (row-major, partial pivoting); false when singular.
inline bool matrix_solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r * n + col)]) > std::abs(a[static_cast<std::size_t>(piv * n + col)])) piv = r;
        if (std::abs(a[static_cast<std::size_t>(piv * n + col)]) < 1e-300) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[static_cast<std::size_t>(col * n + c)], a[static_cast<std::size_t>(piv * n + c)]);
            std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
        }
        for (int r = col + 1; r < n; ++r) {
            double m = a[static_cast<std::size_t>(r * n + col)] / a[static_cast<std::size_t>(col * n + col)];
            if (m == 0.0) continue;
            for (int c = col; c < n; ++c) a[static_cast<std::size_t>(r * n + c)] -= m * a[static_cast<std::size_t>(col * n + c)];
            b[static_cast<std::size_t>(r)] -= m * b[static_cast<std::size_t>(col)];
        }
    }
    x.assign(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c) acc -= a[static_cast<std::size_t>(r * n + c)] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = acc / a[static_cast<std::size_t>(r * n + r)];
    }
    return true;
}

inline double vec_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double c : v) acc += c * c;
    return std::sqrt(acc);
}

inline double vec_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

inline double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace groupoidgen
