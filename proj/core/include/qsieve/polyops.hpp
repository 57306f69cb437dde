#pragma once

#include "qsieve/numeric.hpp"
#include "qsieve/polynomial.hpp"
#include "qsieve/quadform.hpp"

#include <vector>

namespace qsieve {

// Height of a nonzero polynomial: max |coefficient|.
// Throws DomainError "ZeroPolynomial" on the zero polynomial.
Int height(const IntegerPolynomial& f);

// Resultant of f and g with respect to variable var_index, as the
// determinant of the (d1+d2) x (d1+d2) Sylvester matrix with the block of
// f-coefficient rows above the block of g-coefficient rows, each row holding
// coefficients by descending power and shifted one column per row.  The
// result lives in the same ambient variable set (the eliminated variable no
// longer occurs).  It vanishes identically iff f and g share a factor of
// positive degree in that variable over Q.
// Throws DomainError "VariableAbsent" when either input has degree <= 0 in
// the eliminated variable.
IntegerPolynomial sylvester_resultant(const IntegerPolynomial& f, const IntegerPolynomial& g,
                                      int var_index);

struct ZeroCount {
    i64 exact;
    Int bound;
};

// exact = #{x in [-B,B]^n : f(x) = 0} (ambient n, unused variables range
// freely), bound = (#occurring vars) * deg(f) * (2B+1)^(n-1).
// Requires f nonzero and (2B+1)^n <= cap; throws DomainError "CapExceeded".
ZeroCount count_zeros_box(const IntegerPolynomial& f, i64 B, i64 cap = 100000000);

// exact = #{x in (0,p]^n : p | f(x)}, bound = n * deg(f) * p^(n-1) with n
// the ambient variable count.  Requires p^n <= cap and f nonzero mod p;
// throws DomainError "IdenticallyZeroModP" or "CapExceeded".
ZeroCount count_zeros_mod_p(const IntegerPolynomial& f, i64 p, i64 cap = 100000000);

// Eliminates X0 on the quadric X0 X1 = Q0(X2..Xn): for each homogeneous F_i
// of degree <= D in the ambient X0..Xn, returns K_i free of X0 with
// x1^D F_i(x) = K_i(x) at every zero of the quadric.  Q0 is given in its own
// n-1 variables and is embedded at offset 2.  D < 0 selects the maximum
// total degree of the family.  Throws DomainError "NotHomogeneous".
std::vector<IntegerPolynomial> eliminate_x0(const QuadraticForm& q0,
                                            const std::vector<IntegerPolynomial>& family,
                                            int degree_bound = -1);

// Divides each member by the allowed_primes part of its integer content,
// then removes the largest monomial dividing every member, provided no
// member would be reduced to a constant by that removal.  Throws DomainError
// "AllZero" when every member is the zero polynomial.
std::vector<IntegerPolynomial> strip_common_content(const std::vector<IntegerPolynomial>& family,
                                                    const std::vector<i64>& allowed_primes);

// Re-express a polynomial with every variable index shifted by offset into
// an ambient of n_vars_new variables (used to embed Q0 at X2..Xn).
IntegerPolynomial shift_variables(const IntegerPolynomial& f, int offset, int n_vars_new);

} // namespace qsieve
