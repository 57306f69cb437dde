#pragma once

#include "qsieve/matrix.hpp"
#include "qsieve/numeric.hpp"
#include "qsieve/quadform.hpp"

#include <optional>
#include <vector>

namespace qsieve {

// Full-rank sublattice of Z^m; basis vectors are the matrix columns.
struct IntegerLattice {
    int m = 0;
    IMat basis;
    Int det_abs;
};

// Basis with rational entries (columns are vectors); used for dual lattices.
struct RationalBasis {
    int m = 0;
    std::vector<std::vector<Rat>> columns;
};

// Cover of the solutions of R = 0 mod q by the lattices
// Lambda(y) = { x : x = rho * y mod q for some integer rho }.
struct CoverLL {
    i64 q = 1;
    int omega_q = 0;                         // number of prime factors of q
    std::vector<std::vector<i64>> generators; // the set Y(q), entries in [0, q)
};

// Cover for the plane form x1^2 - d x2^2: lattices
// Lambda(rho; q1, q2) = { x : x1 = rho x2 mod q1, x1 = x2 = 0 mod q2 }.
struct CoverLLPlus {
    i64 d = 0;
    i64 q1 = 1;
    i64 q2 = 1;
    std::vector<i64> roots; // the set Z(q1): rho with rho^2 = d mod q1, in [0, q1)
};

// Exact successive minima reported as squared Euclidean norms (ascending),
// with an independent set of lattice vectors achieving them.
struct MinimaResult {
    std::vector<Rat> lambda_sq;
    std::vector<std::vector<Rat>> achieving;
};

struct ReducedBasisResult {
    IMat basis;                 // columns: a basis with |e_j| <= c_m * lambda_j
    std::vector<Rat> ratio_sq;  // |e_j|^2 / lambda_j^2 actually achieved
};

// Enumerates, per prime p | q, one representative of each projective class
// of nonzero solutions of R = 0 mod p (first nonzero coordinate scaled to 1,
// classes listed lexicographically) and combines them across primes by
// Chinese remaindering.  Every solution of R = 0 mod q then lies in some
// Lambda(y); verified exhaustively when q^m fits the cap.
CoverLL build_cover_ll(const QuadraticForm& r, i64 q, i64 cap = 10000000);

// Lambda(y) as the column Hermite form of [y | q I]; det = q^{m-1}.
IntegerLattice lattice_of(const std::vector<i64>& y, i64 q);

// x in Lambda(y) mod q?  (Per prime p | q: x parallel to y or x = 0.)
bool cover_ll_contains(const std::vector<i64>& y, i64 q, const std::vector<i64>& x);

// Exact successive minima by zigzag Fincke-Pohst enumeration over an
// LLL-reduced basis; exact rational arithmetic throughout.  m <= 8.
MinimaResult successive_minima_sq(const IntegerLattice& lat);
MinimaResult successive_minima_sq(const RationalBasis& basis);

// Dual basis (inverse transpose); pairs with the primal minima as
// 1 <= lambda_i * lambda*_{m+1-i} <= m!.
RationalBasis dual_lattice(const IntegerLattice& lat);

// LLL-reduced and size-reduced basis with the achieved |e_j| / lambda_j
// ratios recorded.  m <= 8.
ReducedBasisResult reduced_basis(const IntegerLattice& lat);

// Rational upper bound for 2^m / vol(unit ball), the constant in
// Minkowski's second theorem: prod lambda_i <= c_m * det.
Rat minkowski_ratio_bound(int m);

// If lambda_m(Lambda(y)) > threshold, a nonzero s with s . y = 0 mod q and
// |s| <= m! q / threshold (via the shortest dual vector); otherwise nullopt.
std::optional<std::vector<i64>> short_dual_witness(const std::vector<i64>& y, i64 q,
                                                   const Rat& threshold);

// Z(q1) by per-prime square roots of d chained by CRT; validates split/inert
// classifications, checks det_abs = q1 q2^2 and the minima bound
// 3 lambda_max^2 <= 4 |d| q1 q2^2, and certifies covering exhaustively when
// (q1 q2)^2 fits the cap.
CoverLLPlus build_cover_llplus(i64 d, i64 q1, i64 q2, i64 cap = 10000000);

// The lattice Lambda(rho; q1, q2) for a root rho of the cover.
IntegerLattice lattice_of_llplus(const CoverLLPlus& cover, i64 rho);

}  // namespace qsieve
