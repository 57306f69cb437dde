#pragma once

#include "qsieve/matrix.hpp"
#include "qsieve/numeric.hpp"
#include "qsieve/polynomial.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qsieve {

// Integral quadratic form Q(x) = sum_{i<=j} c_ij x_i x_j, stored sparsely
// by index pair.  The associated symmetric integer matrix A (A_ii = 2 c_ii,
// A_ij = c_ij for i != j) is the object most operations reduce to: rank and
// signature are computed from A over the rationals, good primes from A mod p.
class QuadraticForm {
public:
    QuadraticForm() = default;
    explicit QuadraticForm(int n_vars) : n_(n_vars) {}

    static QuadraticForm parse(const std::string& text, int n_vars_min = 0);
    static QuadraticForm from_polynomial(const IntegerPolynomial& p, int n_vars_min = 0);

    int n_vars() const { return n_; }
    const std::map<std::pair<int, int>, Int>& coeffs() const { return coeffs_; }

    Int coeff(int i, int j) const;
    void set_coeff(int i, int j, const Int& c);

    Int eval(const std::vector<Int>& x) const;
    Int eval_i64pt(const std::vector<i64>& x) const;

    IntegerPolynomial to_polynomial() const;
    IMat doubled_matrix() const;

    // Pullback Q(U x) along an integer matrix U with U.rows == n_vars.
    QuadraticForm transformed(const IMat& U) const;

    // Same form with unused leading variables dropped (x1^2 + x2^2 in a
    // 3-variable ambient becomes a 2-variable form).  Used by CLI entry
    // points that take a standalone form.
    QuadraticForm rebased_to_used() const;

    std::string to_string() const { return to_polynomial().to_string(); }
    bool operator==(const QuadraticForm& o) const;

private:
    int n_ = 0;
    std::map<std::pair<int, int>, Int> coeffs_; // key (i, j) with i <= j, value nonzero
};

// Rank of the associated symmetric matrix over the rationals.
int rank(const QuadraticForm& q);

// (positive, negative) inertia counts from an exact congruence
// diagonalization; no floating point anywhere.
std::pair<int, int> signature(const QuadraticForm& q);

bool is_indefinite(const QuadraticForm& q);

// p is good for q if p is odd and rank(A mod p) equals rank(A over Q).
bool is_good_prime(const QuadraticForm& q, i64 p);

enum class PrimeClass { Ramified, Split, Inert };
const char* to_string(PrimeClass c);

// Splitting behaviour of the odd part of the binary form X^2 - d Y^2 at p:
// ramified if p | 2d, split if d is a nonzero square mod p, inert otherwise.
// d must not be a perfect square.
PrimeClass classify_prime(const Int& d, i64 p);

// Result of moving an indefinite form to the hyperbolic model
// Q*(X) = X0 X1 - Q0(X2..Xn):  Q*(T x) = N^2 Q(x) for all x.
struct HyperbolicNormalization {
    IMat T;            // integral, det != 0
    Int N;             // positive integer scale
    QuadraticForm Q0;  // n_vars - 2 variables
};

// Searches sup-norm shells up to search_bound for a smooth integral zero of
// Q and completes it to a hyperbolic pair.  Throws DomainError
// "NotIndefinite" for definite forms and "SearchExhausted" when no usable
// zero lies within the search region.  For a form already in hyperbolic
// shape this returns T = I, N = 1 and the embedded Q0 unchanged.
HyperbolicNormalization normalize_to_hyperbolic(const QuadraticForm& q, i64 search_bound = 10000);

// True iff q is literally X0 X1 - Q0(X2..Xn); extracts Q0 when asked.
bool is_hyperbolic_shape(const QuadraticForm& q, QuadraticForm* q0_out = nullptr);

// Builds X0 X1 - Q0(X2..) from Q0 (ambient grows by two variables).
QuadraticForm hyperbolic_from_q0(const QuadraticForm& q0);

} // namespace qsieve
