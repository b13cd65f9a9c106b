#include "groupoidgen/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace groupoidgen {

MultiPoly::MultiPoly(int nvars) : nvars_(nvars) {
    if (nvars < 0) throw std::invalid_argument("MultiPoly: negative variable count");
}

MultiPoly MultiPoly::constant(int nvars, double c) {
    MultiPoly p(nvars);
    p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
    return p;
}

MultiPoly MultiPoly::monomial(int nvars, int axis, int power, double c) {
    if (axis < 0 || axis >= nvars) throw std::invalid_argument("MultiPoly::monomial: axis out of range");
    if (power < 0) throw std::invalid_argument("MultiPoly::monomial: negative power");
    MultiPoly p(nvars);
    Exponents e(static_cast<std::size_t>(nvars), 0);
    e[static_cast<std::size_t>(axis)] = power;
    p.add_term(e, c);
    return p;
}

void MultiPoly::check_same_space(const MultiPoly& rhs) const {
    if (nvars_ != rhs.nvars_) throw std::invalid_argument("MultiPoly: variable-count mismatch");
}

int MultiPoly::total_degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (int k : e) d += k;
        deg = std::max(deg, d);
    }
    return deg;
}

int MultiPoly::degree_in(int axis) const {
    if (axis < 0 || axis >= nvars_) throw std::invalid_argument("MultiPoly::degree_in: axis out of range");
    int deg = -1;
    for (const auto& [e, c] : terms_) deg = std::max(deg, e[static_cast<std::size_t>(axis)]);
    return deg;
}

int MultiPoly::degree_in_vars(const std::vector<int>& axes) const {
    int deg = -1;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (int a : axes) d += e[static_cast<std::size_t>(a)];
        deg = std::max(deg, d);
    }
    return deg;
}

void MultiPoly::add_term(const Exponents& e, double c) {
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("MultiPoly::add_term: exponent length mismatch");
    for (int k : e)
        if (k < 0) throw std::invalid_argument("MultiPoly::add_term: negative exponent");
    if (c == 0.0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& rhs) {
    check_same_space(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& rhs) {
    check_same_space(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

MultiPoly& MultiPoly::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

MultiPoly MultiPoly::operator+(const MultiPoly& rhs) const {
    MultiPoly out(*this);
    out += rhs;
    return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& rhs) const {
    MultiPoly out(*this);
    out -= rhs;
    return out;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly out(*this);
    out *= -1.0;
    return out;
}

MultiPoly MultiPoly::operator*(double s) const {
    MultiPoly out(*this);
    out *= s;
    return out;
}

MultiPoly MultiPoly::operator*(const MultiPoly& rhs) const {
    check_same_space(rhs);
    MultiPoly out(nvars_);
    Exponents e(static_cast<std::size_t>(nvars_), 0);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            for (int k = 0; k < nvars_; ++k) e[static_cast<std::size_t>(k)] = ea[static_cast<std::size_t>(k)] + eb[static_cast<std::size_t>(k)];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

MultiPoly MultiPoly::derivative(int axis) const {
    if (axis < 0 || axis >= nvars_) throw std::invalid_argument("MultiPoly::derivative: axis out of range");
    MultiPoly out(nvars_);
    const auto ax = static_cast<std::size_t>(axis);
    for (const auto& [e, c] : terms_) {
        int k = e[ax];
        if (k == 0) continue;
        Exponents de = e;
        de[ax] = k - 1;
        out.add_term(de, c * static_cast<double>(k));
    }
    return out;
}

double MultiPoly::eval(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("MultiPoly::eval: point dimension mismatch");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (int k = 0; k < nvars_; ++k) {
            int p = e[static_cast<std::size_t>(k)];
            double x = point[static_cast<std::size_t>(k)];
            for (int j = 0; j < p; ++j) m *= x;
        }
        acc += m;
    }
    return acc;
}

MultiPoly MultiPoly::restrict_zero(const std::vector<int>& axes) const {
    MultiPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
        bool keep = true;
        for (int a : axes) {
            if (e[static_cast<std::size_t>(a)] > 0) {
                keep = false;
                break;
            }
        }
        if (keep) out.add_term(e, c);
    }
    return out;
}

MultiPoly MultiPoly::remap(int new_nvars, const std::vector<int>& var_map) const {
    if (static_cast<int>(var_map.size()) != nvars_) throw std::invalid_argument("MultiPoly::remap: map length mismatch");
    MultiPoly out(new_nvars);
    Exponents ne(static_cast<std::size_t>(new_nvars), 0);
    for (const auto& [e, c] : terms_) {
        std::fill(ne.begin(), ne.end(), 0);
        for (int k = 0; k < nvars_; ++k) {
            int p = e[static_cast<std::size_t>(k)];
            if (p == 0) continue;
            int target = var_map[static_cast<std::size_t>(k)];
            if (target < 0 || target >= new_nvars) throw std::invalid_argument("MultiPoly::remap: variable in use has no image");
            ne[static_cast<std::size_t>(target)] += p;
        }
        out.add_term(ne, c);
    }
    return out;
}

MultiPoly MultiPoly::remap_signed(int new_nvars, const std::vector<int>& var_map, const std::vector<int>& sign) const {
    if (static_cast<int>(var_map.size()) != nvars_ || static_cast<int>(sign.size()) != nvars_)
        throw std::invalid_argument("MultiPoly::remap_signed: map length mismatch");
    MultiPoly out(new_nvars);
    Exponents ne(static_cast<std::size_t>(new_nvars), 0);
    for (const auto& [e, c] : terms_) {
        std::fill(ne.begin(), ne.end(), 0);
        double coeff = c;
        for (int k = 0; k < nvars_; ++k) {
            int p = e[static_cast<std::size_t>(k)];
            if (p == 0) continue;
            int target = var_map[static_cast<std::size_t>(k)];
            if (target < 0 || target >= new_nvars) throw std::invalid_argument("MultiPoly::remap_signed: variable in use has no image");
            ne[static_cast<std::size_t>(target)] += p;
            if (sign[static_cast<std::size_t>(k)] < 0 && (p % 2) == 1) coeff = -coeff;
        }
        out.add_term(ne, coeff);
    }
    return out;
}

double MultiPoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

double MultiPoly::coeff_distance(const MultiPoly& rhs) const {
    check_same_space(rhs);
    double m = 0.0;
    for (const auto& [e, c] : terms_) {
        auto it = rhs.terms_.find(e);
        double rc = it == rhs.terms_.end() ? 0.0 : it->second;
        m = std::max(m, std::abs(c - rc));
    }
    for (const auto& [e, c] : rhs.terms_) {
        if (terms_.find(e) == terms_.end()) m = std::max(m, std::abs(c));
    }
    return m;
}

std::string MultiPoly::to_string(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (int k = 0; k < nvars_; ++k) {
            int p = e[static_cast<std::size_t>(k)];
            if (p == 0) continue;
            os << "*";
            if (static_cast<std::size_t>(k) < var_names.size())
                os << var_names[static_cast<std::size_t>(k)];
            else
                os << "v" << k;
            if (p > 1) os << "^" << p;
        }
    }
    return os.str();
}

std::vector<MultiPoly> poly_gradient(const MultiPoly& p, const std::vector<int>& axes) {
    std::vector<MultiPoly> out;
    out.reserve(axes.size());
    for (int a : axes) out.push_back(p.derivative(a));
    return out;
}

}  // namespace groupoidgen
