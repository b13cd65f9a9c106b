#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace groupoidgen {

/// Sparse multivariate polynomial with real coefficients.
///
/// Terms map an exponent multi-index (one entry per variable) to a nonzero
/// coefficient. Exactly-zero coefficients are pruned on every mutation, so
/// an empty term map is the zero polynomial.
class MultiPoly {
  public:
    using Exponents = std::vector<int>;

    MultiPoly() : nvars_(0) {}
    explicit MultiPoly(int nvars);

    static MultiPoly zero(int nvars) { return MultiPoly(nvars); }
    static MultiPoly constant(int nvars, double c);
    /// The monomial c * x_axis^power.
    static MultiPoly monomial(int nvars, int axis, int power, double c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Exponents, double>& terms() const { return terms_; }

    /// Total degree; -1 for the zero polynomial.
    int total_degree() const;
    /// Degree in one variable; -1 for the zero polynomial.
    int degree_in(int axis) const;
    /// Combined degree over a set of variables; -1 for zero.
    int degree_in_vars(const std::vector<int>& axes) const;

    void add_term(const Exponents& e, double c);

    MultiPoly& operator+=(const MultiPoly& rhs);
    MultiPoly& operator-=(const MultiPoly& rhs);
    MultiPoly& operator*=(double s);
    MultiPoly operator+(const MultiPoly& rhs) const;
    MultiPoly operator-(const MultiPoly& rhs) const;
    MultiPoly operator-() const;
    MultiPoly operator*(const MultiPoly& rhs) const;
    MultiPoly operator*(double s) const;

    bool operator==(const MultiPoly& rhs) const { return nvars_ == rhs.nvars_ && terms_ == rhs.terms_; }

    /// Exact symbolic partial derivative along one variable.
    MultiPoly derivative(int axis) const;

    double eval(const std::vector<double>& point) const;

    /// Restrict by setting every variable in `axes` to zero (drops all terms
    /// that contain one of them).
    MultiPoly restrict_zero(const std::vector<int>& axes) const;

    /// Re-express the polynomial on a new variable set. old variable i maps
    /// to new variable var_map[i]; the polynomial must not use any variable
    /// mapped to -1.
    MultiPoly remap(int new_nvars, const std::vector<int>& var_map) const;

    /// remap with a sign per variable: old variable i becomes
    /// sign[i] * (new variable var_map[i]).
    MultiPoly remap_signed(int new_nvars, const std::vector<int>& var_map, const std::vector<int>& sign) const;

    /// Largest absolute coefficient (0 for the zero polynomial).
    double max_abs_coeff() const;

    /// max |coeff difference| against rhs.
    double coeff_distance(const MultiPoly& rhs) const;

    std::string to_string(const std::vector<std::string>& var_names = {}) const;

  private:
    int nvars_;
    std::map<Exponents, double> terms_;

    void check_same_space(const MultiPoly& rhs) const;
};

/// Gradient as a vector of symbolic partials along the given axes.
std::vector<MultiPoly> poly_gradient(const MultiPoly& p, const std::vector<int>& axes);

}  // namespace groupoidgen
