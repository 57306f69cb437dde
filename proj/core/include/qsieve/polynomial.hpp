#pragma once

#include "qsieve/numeric.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qsieve {

// Exponent vector; length always equals the ambient variable count.
using Monomial = std::vector<std::int32_t>;

// Sparse multivariate polynomial with exact integer coefficients.
//
// Text form: variables are x0..x31, operators + - * ^, whitespace ignored,
// e.g. "x0*x1 - x2^2 + 5*x3^2".  No parentheses: inputs are written as
// expanded sums of monomials.  to_string() emits a canonical ordering
// (total degree descending, then lexicographic), so serialization is
// deterministic and parse(to_string(f)) == f.
class IntegerPolynomial {
public:
    IntegerPolynomial() = default;
    explicit IntegerPolynomial(int n_vars) : n_(n_vars) {}

    static IntegerPolynomial constant(int n_vars, const Int& c);
    static IntegerPolynomial variable(int n_vars, int index);
    static IntegerPolynomial monomial(int n_vars, const Monomial& m, const Int& c);

    // Parses the grammar above. n_vars is max(seen variable index + 1,
    // n_vars_min). Throws std::invalid_argument on malformed input.
    static IntegerPolynomial parse(const std::string& text, int n_vars_min = 0);

    int n_vars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Int>& terms() const { return terms_; }

    Int coeff(const Monomial& m) const;
    void add_term(const Monomial& m, const Int& c);

    // Same polynomial viewed in a larger ambient variable set.
    IntegerPolynomial extended(int n_vars) const;

    IntegerPolynomial operator-() const;
    IntegerPolynomial operator+(const IntegerPolynomial& o) const;
    IntegerPolynomial operator-(const IntegerPolynomial& o) const;
    IntegerPolynomial operator*(const IntegerPolynomial& o) const;
    IntegerPolynomial& operator+=(const IntegerPolynomial& o);
    bool operator==(const IntegerPolynomial& o) const;

    IntegerPolynomial pow(unsigned e) const;

    Int eval(const std::vector<Int>& x) const;
    Int eval_i64pt(const std::vector<i64>& x) const;
    i64 eval_mod(const std::vector<i64>& x, i64 m) const;

    // Substitute an exact value for one variable (result keeps the ambient
    // variable count; the substituted variable no longer occurs).
    IntegerPolynomial substituted(int var, const Int& value) const;

    // Coefficients of powers of `var`: result[e] is the coefficient of
    // var^e, with var absent from each coefficient polynomial.
    std::vector<IntegerPolynomial> coeffs_in(int var) const;

    int total_degree() const; // -1 for the zero polynomial
    int degree_in(int var) const;
    bool is_homogeneous() const;
    bool uses_var(int var) const;
    std::vector<int> occurring_vars() const; // sorted indices of variables that occur

    // gcd of coefficient magnitudes (0 for the zero polynomial).
    Int content() const;
    // max |coefficient| (0 for the zero polynomial); the named height
    // operation with its error contract lives in polyops.
    Int max_abs_coeff() const;

    // Upper bound for |f(x)| over |x_i| <= B_i (sum of |c| * prod B^e).
    Int sup_bound(const std::vector<i64>& box) const;
    Int sup_bound_uniform(i64 B) const;

    IntegerPolynomial divided_by_int(const Int& d) const; // exact, throws if not
    IntegerPolynomial divided_by_monomial(const Monomial& m) const; // exact

    std::string to_string() const;

private:
    int n_ = 0;
    std::map<Monomial, Int> terms_; // monomial -> nonzero coefficient
};

} // namespace qsieve
