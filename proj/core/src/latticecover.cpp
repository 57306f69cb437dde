#include "qsieve/latticecover.hpp"

#include "qsieve/errors.hpp"
#include "qsieve/primes.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qsieve {

namespace {

using RatVec = std::vector<Rat>;
using RatCols = std::vector<RatVec>;

Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Int round_nearest(const Rat& x) {
    const Int num = numerator(x);
    const Int den = denominator(x); // canonical: den > 0
    Int t = 2 * num + den;
    Int q = t / (2 * den);
    if (t < 0 && t % (2 * den) != 0) --q;
    return q;
}

struct GramSchmidt {
    int m = 0;
    std::vector<RatVec> mu; // mu[i][j], j < i
    RatVec bstar_sq;
};

GramSchmidt gram_schmidt(const RatCols& b) {
    const int m = static_cast<int>(b.size());
    GramSchmidt gs;
    gs.m = m;
    gs.mu.assign(m, RatVec(m, Rat(0)));
    gs.bstar_sq.assign(m, Rat(0));
    std::vector<RatVec> bstar(m);
    for (int i = 0; i < m; ++i) {
        bstar[i] = b[i];
        for (int j = 0; j < i; ++j) {
            gs.mu[i][j] = dot(b[i], bstar[j]) / gs.bstar_sq[j];
            for (std::size_t t = 0; t < bstar[i].size(); ++t)
                bstar[i][t] -= gs.mu[i][j] * bstar[j][t];
        }
        gs.bstar_sq[i] = dot(bstar[i], bstar[i]);
        if (gs.bstar_sq[i] == 0) throw std::invalid_argument("basis is not full rank");
    }
    return gs;
}

// Textbook LLL with delta = 3/4, exact rational arithmetic, Gram-Schmidt
// recomputed after every basis change (dimensions here are tiny).
void lll_reduce(RatCols& b) {
    const int m = static_cast<int>(b.size());
    if (m <= 1) return;
    const Rat delta(3, 4);
    GramSchmidt gs = gram_schmidt(b);
    int k = 1;
    while (k < m) {
        for (int j = k - 1; j >= 0; --j) {
            const Int r = round_nearest(gs.mu[k][j]);
            if (r != 0) {
                for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= Rat(r) * b[j][t];
                gs = gram_schmidt(b);
            }
        }
        if (gs.bstar_sq[k] >= (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.bstar_sq[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gs = gram_schmidt(b);
            k = std::max(1, k - 1);
        }
    }
}

// All lattice vectors with |v|^2 <= r_sq, as (norm^2, coefficient vector)
// pairs.  Zigzag outward from the real center on every level so the exit
// test is a single exact comparison.
void enumerate_below(const RatCols& b, const GramSchmidt& gs, const Rat& r_sq,
                     std::vector<std::pair<Rat, std::vector<Int>>>& out) {
    const int m = gs.m;
    std::vector<Int> x(m, 0);

    struct Rec {
        const RatCols& b;
        const GramSchmidt& gs;
        const Rat& r_sq;
        std::vector<Int>& x;
        std::vector<std::pair<Rat, std::vector<Int>>>& out;
        void walk(int i, const Rat& used) {
            if (i < 0) {
                for (const Int& c : x)
                    if (c != 0) {
                        out.emplace_back(used, x);
                        return;
                    }
                return;
            }
            Rat center = 0;
            for (int j = i + 1; j < gs.m; ++j)
                if (x[j] != 0) center += gs.mu[j][i] * Rat(x[j]);
            const Rat budget = r_sq - used;
            const Int t0 = round_nearest(-center);
            for (int dir = 0; dir < 2; ++dir) {
                Int t = dir == 0 ? t0 : t0 + 1;
                const int step = dir == 0 ? -1 : 1;
                for (;;) {
                    const Rat v = Rat(t) + center;
                    const Rat contrib = v * v * gs.bstar_sq[i];
                    if (contrib > budget) break;
                    x[i] = t;
                    walk(i - 1, used + contrib);
                    t += step;
                }
            }
            x[i] = 0;
        }
    } rec{b, gs, r_sq, x, out};
    rec.walk(m - 1, Rat(0));
}

MinimaResult minima_from_columns(RatCols b) {
    const int m = static_cast<int>(b.size());
    if (m > 8) throw DomainError("DimensionTooLarge", "exact minima are limited to dimension 8");
    if (m == 0) throw std::invalid_argument("empty basis");
    lll_reduce(b);
    const GramSchmidt gs = gram_schmidt(b);

    // lambda_m never exceeds the longest vector of any basis
    Rat r_sq = dot(b[0], b[0]);
    for (int i = 1; i < m; ++i) r_sq = std::max(r_sq, dot(b[i], b[i]));

    std::vector<std::pair<Rat, std::vector<Int>>> cands;
    enumerate_below(b, gs, r_sq, cands);
    std::sort(cands.begin(), cands.end(), [](const auto& l, const auto& r) {
        if (l.first != r.first) return l.first < r.first;
        return l.second < r.second;
    });

    MinimaResult res;
    std::vector<RatVec> echelon; // normalized rows with pivot 1
    std::vector<int> pivots;
    for (const auto& [norm_sq, coeff] : cands) {
        if (static_cast<int>(res.lambda_sq.size()) == m) break;
        RatVec v(b[0].size(), Rat(0));
        for (int j = 0; j < m; ++j)
            if (coeff[j] != 0)
                for (std::size_t t = 0; t < v.size(); ++t) v[t] += Rat(coeff[j]) * b[j][t];
        RatVec w = v;
        for (std::size_t e = 0; e < echelon.size(); ++e) {
            const Rat f = w[pivots[e]];
            if (f != 0)
                for (std::size_t t = 0; t < w.size(); ++t) w[t] -= f * echelon[e][t];
        }
        int piv = -1;
        for (std::size_t t = 0; t < w.size(); ++t)
            if (w[t] != 0) { piv = static_cast<int>(t); break; }
        if (piv < 0) continue; // dependent on the chosen set
        const Rat inv = w[piv];
        for (std::size_t t = 0; t < w.size(); ++t) w[t] /= inv;
        echelon.push_back(std::move(w));
        pivots.push_back(piv);
        res.lambda_sq.push_back(norm_sq);
        res.achieving.push_back(std::move(v));
    }
    if (static_cast<int>(res.lambda_sq.size()) != m)
        throw std::logic_error("minima enumeration failed to reach full rank");
    return res;
}

RatCols columns_of(const IMat& basis) {
    RatCols cols(basis.cols, RatVec(basis.rows, Rat(0)));
    for (int c = 0; c < basis.cols; ++c)
        for (int r = 0; r < basis.rows; ++r) cols[c][r] = Rat(basis.at(r, c));
    return cols;
}

Int vec_gcd_with(const std::vector<i64>& y, i64 q) {
    Int g = q;
    for (i64 v : y) g = boost::multiprecision::gcd(g, Int(v < 0 ? -v : v));
    return g;
}

std::vector<std::pair<i64, int>> squarefree_factors(i64 q, const char* what) {
    if (q < 1) throw std::invalid_argument(std::string(what) + " must be positive");
    if (!is_squarefree64(static_cast<u64>(q)))
        throw std::invalid_argument(std::string(what) + " must be squarefree");
    return q == 1 ? std::vector<std::pair<i64, int>>{} : factor64(static_cast<u64>(q));
}

Int factorial(int m) {
    Int f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

}  // namespace

CoverLL build_cover_ll(const QuadraticForm& r, i64 q, i64 cap) {
    const int m = r.n_vars();
    if (rank(r) < 3)
        throw DomainError("RankTooSmall", "cover construction needs a form of rank at least 3");
    const auto factors = squarefree_factors(q, "cover modulus");
    for (const auto& [p, e] : factors) {
        (void)e;
        if (!is_good_prime(r, p))
            throw DomainError("NotGoodModulus", "prime " + std::to_string(p) + " is not good");
    }

    CoverLL cover;
    cover.q = q;
    cover.omega_q = static_cast<int>(factors.size());
    cover.generators = {std::vector<i64>(m, 0)}; // q = 1: everything in one lattice

    i64 q_acc = 1;
    for (const auto& [p, e] : factors) {
        (void)e;
        i64 points = 1;
        for (int i = 0; i < m; ++i) {
            if (points > cap / p)
                throw DomainError("CapExceeded", "per-prime enumeration exceeds the budget");
            points *= p;
        }
        // dense coefficients mod p for fast evaluation
        std::vector<std::vector<i64>> c(m, std::vector<i64>(m, 0));
        for (const auto& [ij, v] : r.coeffs()) c[ij.first][ij.second] = mod_pos((i64)(v % p), p);

        std::set<std::vector<i64>> reps; // canonical projective representatives
        std::vector<i64> x(m, 0);
        for (;;) {
            int pos = m - 1;
            while (pos >= 0 && x[pos] == p - 1) x[pos--] = 0;
            if (pos < 0) break;
            ++x[pos];
            i64 val = 0;
            for (int i = 0; i < m; ++i) {
                if (x[i] == 0) continue;
                for (int j = i; j < m; ++j)
                    if (c[i][j]) val = (val + c[i][j] * x[i] % p * x[j]) % p;
            }
            if (val != 0) continue;
            int first = 0;
            while (x[first] == 0) ++first;
            const i64 inv = invmod64(x[first], p);
            std::vector<i64> rep(m);
            for (int i = 0; i < m; ++i) rep[i] = x[i] * inv % p;
            reps.insert(std::move(rep));
        }

        std::vector<std::vector<i64>> combined;
        combined.reserve(cover.generators.size() * reps.size());
        for (const auto& g : cover.generators)
            for (const auto& rep : reps) {
                std::vector<i64> y(m);
                for (int i = 0; i < m; ++i) y[i] = crt_pair(g[i], q_acc, rep[i], p);
                combined.push_back(std::move(y));
            }
        cover.generators = std::move(combined);
        q_acc *= p;
    }

    // #Y(q) <= (3m)^omega q^{m-2}
    Int bound = int_pow(Int(3 * m), cover.omega_q) * int_pow(Int(q), m - 2);
    if (Int(cover.generators.size()) > bound)
        throw std::logic_error("generator count exceeds the cardinality bound");

    // exhaustive covering certificate when q^m is within budget
    i64 total = 1;
    bool feasible = true;
    for (int i = 0; i < m && feasible; ++i) {
        if (total > cap / q) feasible = false;
        else total *= q;
    }
    if (feasible && q > 1) {
        std::vector<std::vector<i64>> cq(m, std::vector<i64>(m, 0));
        for (const auto& [ij, v] : r.coeffs()) cq[ij.first][ij.second] = mod_pos((i64)(v % q), q);
        std::vector<i64> x(m, 0);
        for (;;) {
            int pos = m - 1;
            while (pos >= 0 && x[pos] == q - 1) x[pos--] = 0;
            if (pos < 0) break;
            ++x[pos];
            i64 val = 0;
            for (int i = 0; i < m; ++i) {
                if (x[i] == 0) continue;
                for (int j = i; j < m; ++j)
                    if (cq[i][j]) val = (val + cq[i][j] * x[i] % q * x[j]) % q;
            }
            if (val != 0) continue;
            bool covered = false;
            for (const auto& y : cover.generators)
                if (cover_ll_contains(y, q, x)) { covered = true; break; }
            if (!covered) throw std::logic_error("cover misses a residue solution");
        }
    }
    return cover;
}

bool cover_ll_contains(const std::vector<i64>& y, i64 q, const std::vector<i64>& x) {
    const int m = static_cast<int>(y.size());
    if (static_cast<int>(x.size()) != m) throw std::invalid_argument("dimension mismatch");
    for (const auto& [p, e] : squarefree_factors(q, "cover modulus")) {
        (void)e;
        bool x_zero = true;
        for (i64 v : x)
            if (mod_pos(v, p) != 0) { x_zero = false; break; }
        if (x_zero) continue; // x = 0 mod p lies in every Lambda(y)
        int j = -1;
        for (int i = 0; i < m; ++i)
            if (mod_pos(y[i], p) != 0) { j = i; break; }
        if (j < 0) return false; // y = 0 mod p only covers x = 0
        const i64 rho = mod_pos(x[j], p) * invmod64(y[j], p) % p;
        for (int i = 0; i < m; ++i)
            if (mod_pos(x[i] - rho * mod_pos(y[i], p), p) != 0) return false;
    }
    return true;
}

IntegerLattice lattice_of(const std::vector<i64>& y, i64 q) {
    const int m = static_cast<int>(y.size());
    if (m < 1) throw std::invalid_argument("empty generator");
    if (q < 1) throw std::invalid_argument("modulus must be positive");
    if (vec_gcd_with(y, q) != 1)
        throw DomainError("NotPrimitiveModQ", "generator shares a factor with the modulus");

    IMat block(m, m + 1);
    for (int i = 0; i < m; ++i) {
        block.at(i, 0) = y[i];
        block.at(i, i + 1) = q;
    }
    IMat h = hnf_columns(block);
    IntegerLattice lat;
    lat.m = m;
    lat.basis = IMat(m, m);
    for (int c = 0; c < m; ++c)
        for (int r2 = 0; r2 < m; ++r2) lat.basis.at(r2, c) = h.at(r2, c);
    lat.det_abs = abs(det_bareiss(lat.basis));
    if (lat.det_abs != int_pow(Int(q), m - 1))
        throw std::logic_error("lattice determinant is not q^{m-1}");
    return lat;
}

MinimaResult successive_minima_sq(const IntegerLattice& lat) {
    return minima_from_columns(columns_of(lat.basis));
}

MinimaResult successive_minima_sq(const RationalBasis& basis) {
    return minima_from_columns(basis.columns);
}

RationalBasis dual_lattice(const IntegerLattice& lat) {
    IMat num;
    Int den;
    inverse_rational(lat.basis, num, den);
    RationalBasis dual;
    dual.m = lat.m;
    dual.columns.assign(lat.m, RatVec(lat.m, Rat(0)));
    // dual basis = inverse transpose: column j of the dual is row j of B^{-1}
    for (int j = 0; j < lat.m; ++j)
        for (int t = 0; t < lat.m; ++t) dual.columns[j][t] = Rat(num.at(j, t), den);
    return dual;
}

ReducedBasisResult reduced_basis(const IntegerLattice& lat) {
    if (lat.m > 8) throw DomainError("DimensionTooLarge", "basis reduction is limited to dimension 8");
    RatCols b = columns_of(lat.basis);
    lll_reduce(b);
    // one extra size-reduction sweep against the final Gram-Schmidt data
    GramSchmidt gs = gram_schmidt(b);
    for (int i = 1; i < lat.m; ++i)
        for (int j = i - 1; j >= 0; --j) {
            const Int r = round_nearest(gs.mu[i][j]);
            if (r != 0) {
                for (std::size_t t = 0; t < b[i].size(); ++t) b[i][t] -= Rat(r) * b[j][t];
                gs = gram_schmidt(b);
            }
        }

    ReducedBasisResult out;
    out.basis = IMat(lat.m, lat.m);
    for (int c = 0; c < lat.m; ++c)
        for (int r2 = 0; r2 < lat.m; ++r2) {
            if (denominator(b[c][r2]) != 1)
                throw std::logic_error("reduction left the integer lattice");
            out.basis.at(r2, c) = numerator(b[c][r2]);
        }
    const MinimaResult mins = successive_minima_sq(lat);
    for (int c = 0; c < lat.m; ++c) out.ratio_sq.push_back(dot(b[c], b[c]) / mins.lambda_sq[c]);
    return out;
}

Rat minkowski_ratio_bound(int m) {
    // rational upper bounds for 2^m / vol(B_m): 1, 4/pi, 6/pi, 32/pi^2, ...
    static const Rat table[] = {Rat(1),        Rat(128, 100), Rat(192, 100), Rat(325, 100),
                                Rat(61, 10),   Rat(124, 10),  Rat(272, 10),  Rat(631, 10)};
    if (m < 1) throw std::invalid_argument("dimension must be positive");
    if (m > 8) throw DomainError("DimensionTooLarge", "no tabulated constant beyond dimension 8");
    return table[m - 1];
}

std::optional<std::vector<i64>> short_dual_witness(const std::vector<i64>& y, i64 q,
                                                   const Rat& threshold) {
    if (threshold <= 0) throw std::invalid_argument("threshold must be positive");
    const IntegerLattice lat = lattice_of(y, q);
    const MinimaResult primal = successive_minima_sq(lat);
    if (primal.lambda_sq.back() <= threshold * threshold) return std::nullopt;

    const MinimaResult dual = successive_minima_sq(dual_lattice(lat));
    std::vector<i64> s(lat.m);
    Rat s_norm_sq = 0;
    for (int i = 0; i < lat.m; ++i) {
        const Rat si = Rat(q) * dual.achieving[0][i];
        if (denominator(si) != 1) throw std::logic_error("dual witness is not integral");
        s[i] = static_cast<i64>(numerator(si));
        s_norm_sq += si * si;
    }
    // certify both promised properties before returning
    Int sy = 0;
    for (int i = 0; i < lat.m; ++i) sy += Int(s[i]) * y[i];
    if (sy % q != 0) throw std::logic_error("dual witness is not orthogonal mod q");
    const Rat rhs = Rat(factorial(lat.m) * q);
    if (s_norm_sq * threshold * threshold > rhs * rhs)
        throw std::logic_error("dual witness exceeds the transference bound");
    return s;
}

CoverLLPlus build_cover_llplus(i64 d, i64 q1, i64 q2, i64 cap) {
    if (d >= 0) {
        const Int root = boost::multiprecision::sqrt(Int(d));
        if (root * root == d)
            throw std::invalid_argument("d must not be a perfect square");
    }
    const auto f1 = squarefree_factors(q1, "split modulus");
    const auto f2 = squarefree_factors(q2, "inert modulus");
    if (std::gcd(q1, q2) != 1) throw std::invalid_argument("split and inert moduli must be coprime");
    for (const auto& [p, e] : f1) {
        (void)e;
        if (classify_prime(d, p) != PrimeClass::Split)
            throw DomainError("BadSplitType", std::to_string(p) + " is not split");
    }
    for (const auto& [p, e] : f2) {
        (void)e;
        if (classify_prime(d, p) != PrimeClass::Inert)
            throw DomainError("BadSplitType", std::to_string(p) + " is not inert");
    }

    CoverLLPlus cover;
    cover.d = d;
    cover.q1 = q1;
    cover.q2 = q2;
    cover.roots = {0};
    i64 q_acc = 1;
    for (const auto& [p, e] : f1) {
        (void)e;
        const auto r = sqrt_mod_p(mod_pos(d % p, p), p);
        if (!r) throw std::logic_error("split prime has no square root"); // unreachable
        std::vector<i64> next;
        next.reserve(cover.roots.size() * 2);
        for (i64 base : cover.roots)
            for (i64 root : {*r, p - *r}) next.push_back(crt_pair(base, q_acc, root, p));
        cover.roots = std::move(next);
        q_acc *= p;
    }
    std::sort(cover.roots.begin(), cover.roots.end());

    const Int det_expected = Int(q1) * q2 * q2;
    for (i64 rho : cover.roots) {
        const IntegerLattice lat = lattice_of_llplus(cover, rho);
        if (lat.det_abs != det_expected) throw std::logic_error("lattice determinant mismatch");
        const MinimaResult mins = successive_minima_sq(lat);
        // 3 lambda_max^2 <= 4 |d| q1 q2^2
        if (Rat(3) * mins.lambda_sq.back() > Rat(4) * Rat(abs(Int(d)) * q1 * q2 * q2))
            throw std::logic_error("largest minimum violates the Hermite bound");
    }

    const i64 qq = q1 * q2;
    if (qq <= cap / qq) { // (q1 q2)^2 within budget: certify covering exhaustively
        for (i64 x1 = 0; x1 < qq; ++x1)
            for (i64 x2 = 0; x2 < qq; ++x2) {
                if (mod_pos(x1 * x1 - d % qq * x2 % qq * x2, qq) != 0) continue;
                bool covered = false;
                for (i64 rho : cover.roots)
                    if (mod_pos(x1 - rho * x2, q1) == 0 && x1 % q2 == 0 && x2 % q2 == 0) {
                        covered = true;
                        break;
                    }
                if (!covered) throw std::logic_error("plane cover misses a residue solution");
            }
    }
    return cover;
}

IntegerLattice lattice_of_llplus(const CoverLLPlus& cover, i64 rho) {
    if (std::find(cover.roots.begin(), cover.roots.end(), rho) == cover.roots.end())
        throw std::invalid_argument("rho is not a listed root of the cover");
    IntegerLattice lat;
    lat.m = 2;
    lat.basis = IMat(2, 2);
    lat.basis.at(0, 0) = Int(cover.q1) * cover.q2;
    lat.basis.at(0, 1) = Int(rho) * cover.q2;
    lat.basis.at(1, 1) = cover.q2;
    lat.det_abs = abs(det_bareiss(lat.basis));
    return lat;
}

}  // namespace qsieve
