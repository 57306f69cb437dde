#pragma once

#include "qsieve/numeric.hpp"

#include <vector>

namespace qsieve {

// Small dense integer matrix with exact (big-integer) entries, row-major.
// Everything here is desk-scale (dimensions <= a few dozen), so clarity
// beats asymptotics throughout.
struct IMat {
    int rows = 0;
    int cols = 0;
    std::vector<Int> a;

    IMat() = default;
    IMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    Int& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Int& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static IMat identity(int n);
};

IMat imat_mul(const IMat& x, const IMat& y);
IMat imat_transpose(const IMat& x);

// Exact determinant (Bareiss fraction-free elimination).
Int det_bareiss(IMat m);

// Rank over the rationals.
int rank_rational(const IMat& m);

// Rank of the reduction mod p.
int rank_mod_p(const IMat& m, i64 p);

// Column-style Hermite reduction: returns H = A * U with U unimodular,
// pivot columns first (staircase, positive pivots, entries right of the
// staircase zero).  If `transform` is non-null it receives U.
// The number of pivot columns equals rank(A).
IMat hnf_columns(IMat A, IMat* transform = nullptr, int* rank_out = nullptr);

// Basis (as columns) of { x : A x = 0 } over the integers.  The returned
// basis spans the full integer kernel (a saturated sublattice).
IMat integer_kernel(const IMat& A);

// Inverse of a nonsingular square matrix as N / den with integer N.
void inverse_rational(const IMat& B, IMat& num, Int& den);

// For M (n x k) whose columns are a basis of a saturated sublattice of Z^n,
// returns P (k x n) with P * M = I_k.  Throws std::invalid_argument if the
// column lattice is not saturated.
IMat left_inverse_primitive(const IMat& M);

} // namespace qsieve
