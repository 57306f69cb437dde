#pragma once

#include "qsieve/errors.hpp"
#include "qsieve/numeric.hpp"
#include "qsieve/polynomial.hpp"
#include "qsieve/primes.hpp"
#include "qsieve/quadform.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qsieve {

// Axis-aligned box with per-axis sup-norm half-widths (reals >= 1; the
// integer sweep covers |x_i| <= floor(B_i)).
struct Box {
    std::vector<double> bounds;

    explicit Box(std::vector<double> b);
    static Box uniform(int dims, double b);

    int dims() const { return static_cast<int>(bounds.size()); }
    double volume() const;
    double b_min() const;
    i64 axis_floor(int i) const { return static_cast<i64>(bounds[static_cast<std::size_t>(i)]); }
};

struct SieveReport {
    i64 b = 0;
    i64 m = 0;
    i64 total_points = 0;
    i64 sieved_points = 0;      // gcd of the family is 0 or has a prime factor > m
    i64 zero_locus_points = 0;  // all family members vanish
    double elapsed_seconds = 0.0;
};

namespace detail {

// Ascending integral roots t of a t^2 + b t + c = 0 with |t| <= bound.
std::vector<i64> quadratic_roots_bounded(const Int& a, const Int& b, const Int& c, i64 bound);

// Divisor enumeration helper: smallest-prime-factor table when the value
// range is small, factor64 otherwise.
class DivisorHelper {
public:
    explicit DivisorHelper(u64 max_abs_value);
    // positive divisors d of |t| (t != 0) with lo <= d <= hi, ascending
    void divisors_in_range(u64 t, u64 lo, u64 hi, std::vector<u64>& out) const;

private:
    std::vector<std::uint32_t> spf_;
};

} // namespace detail

// Streams every x in Z^n with |x|_inf <= B and x0 x1 = Q0(x2..), exactly
// once, for a form in hyperbolic shape.  The visitor receives a reference to
// a scratch vector valid only during the call.  Order: the (x2..xn) prefix
// ascends lexicographically from -B; for Q0(prefix) = t != 0 the positive
// divisors d of |t| ascend, each emitting (d, t/d) then (-d, -t/d) when both
// coordinates fit; for t = 0 the x0 = 0 line comes before the x1 = 0 line.
// x2_lo/x2_hi restrict the first prefix coordinate (used for work splitting).
template <class Fn>
void for_each_quadric_point(const QuadraticForm& qstar, i64 B, Fn&& fn, i64 x2_lo, i64 x2_hi) {
    QuadraticForm q0;
    if (!is_hyperbolic_shape(qstar, &q0))
        throw std::invalid_argument("form must be in hyperbolic shape X0*X1 - Q0");
    if (B < 0) throw std::invalid_argument("bound must be nonnegative");
    const int n = qstar.n_vars();
    const int k = n - 2;

    // i64 evaluation of Q0 is safe when the sup bound fits comfortably.
    Int sup = q0.n_vars() > 0 ? q0.to_polynomial().sup_bound_uniform(B) : Int(0);
    if (sup >= (Int(1) << 62))
        throw std::invalid_argument("bound too large for 64-bit quadric sweep");
    const u64 max_t = sup.template convert_to<u64>();
    detail::DivisorHelper divisors(max_t);

    std::vector<i64> x(static_cast<std::size_t>(n), 0);
    std::vector<u64> divbuf;

    // sparse Q0 terms re-indexed into ambient coordinates
    struct Term {
        int i, j;
        i64 c;
    };
    std::vector<Term> terms;
    for (const auto& [ij, c] : q0.coeffs())
        terms.push_back({ij.first + 2, ij.second + 2, c.template convert_to<i64>()});

    auto emit_pairs = [&](i64 t) {
        if (t == 0) {
            x[0] = 0;
            for (i64 v = -B; v <= B; ++v) {
                x[1] = v;
                fn(const_cast<const std::vector<i64>&>(x));
            }
            x[1] = 0;
            for (i64 v = -B; v <= B; ++v) {
                if (v == 0) continue;
                x[0] = v;
                fn(const_cast<const std::vector<i64>&>(x));
            }
            x[0] = 0;
            return;
        }
        const u64 at = static_cast<u64>(t < 0 ? -t : t);
        const u64 hi = static_cast<u64>(B);
        if (hi == 0) return;
        const u64 lo = (at + hi - 1) / hi; // smallest d with |t|/d <= B
        divbuf.clear();
        divisors.divisors_in_range(at, lo, hi, divbuf);
        for (u64 d : divbuf) {
            const i64 other = t / static_cast<i64>(d);
            x[0] = static_cast<i64>(d);
            x[1] = other;
            fn(const_cast<const std::vector<i64>&>(x));
            x[0] = -static_cast<i64>(d);
            x[1] = -other;
            fn(const_cast<const std::vector<i64>&>(x));
        }
        x[0] = 0;
        x[1] = 0;
    };

    if (k == 0) {
        if (x2_lo <= 0 && 0 <= x2_hi) emit_pairs(0);
        return;
    }

    std::vector<i64> pref(static_cast<std::size_t>(k));
    pref[0] = std::max(-B, x2_lo);
    const i64 first_hi = std::min(B, x2_hi);
    if (pref[0] > first_hi) return;
    for (int i = 1; i < k; ++i) pref[i] = -B;
    for (;;) {
        for (int i = 0; i < k; ++i) x[static_cast<std::size_t>(i + 2)] = pref[i];
        i64 t = 0;
        for (const Term& tm : terms) t += tm.c * x[static_cast<std::size_t>(tm.i)] * x[static_cast<std::size_t>(tm.j)];
        emit_pairs(t);
        int pos = k - 1;
        while (pos > 0 && pref[pos] == B) pref[pos--] = -B;
        if (pos == 0) {
            if (pref[0] == first_hi) break;
            ++pref[0];
        } else {
            ++pref[pos];
        }
    }
}

template <class Fn>
void for_each_quadric_point(const QuadraticForm& qstar, i64 B, Fn&& fn) {
    for_each_quadric_point(qstar, B, std::forward<Fn>(fn), -B, B);
}

// Streams x in [-B,B]^n with Q(x) = 0 and x == a (mod q), for any integral
// quadratic form: the leading n-1 coordinates step in strides of q from the
// least representative, the last coordinate is solved exactly.  Exact Int
// arithmetic throughout; meant for congruence counts and searches, not bulk
// sweeps.
template <class Fn>
void for_each_quadric_point_congruence(const QuadraticForm& q, i64 B, i64 qmod,
                                       const std::vector<i64>& a, Fn&& fn) {
    const int n = q.n_vars();
    if (qmod < 1) throw std::invalid_argument("modulus must be positive");
    if (static_cast<int>(a.size()) != n) throw std::invalid_argument("residue vector size mismatch");
    if (B < 0) throw std::invalid_argument("bound must be nonnegative");
    const int last = n - 1;
    std::vector<i64> start(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        start[i] = -B + mod_pos(a[i] + B, qmod);
        if (start[i] > B) return; // class misses the box entirely
    }
    std::vector<i64> x(static_cast<std::size_t>(n), 0);
    std::vector<i64> pref(static_cast<std::size_t>(last));
    for (int i = 0; i < last; ++i) pref[i] = start[i];
    const Int clast = q.coeff(last, last);
    for (;;) {
        for (int i = 0; i < last; ++i) x[static_cast<std::size_t>(i)] = pref[i];
        Int lin = 0;
        for (int i = 0; i < last; ++i) lin += q.coeff(i, last) * x[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(last)] = 0;
        std::vector<Int> xi(x.begin(), x.end());
        const Int cst = q.eval(xi);
        if (clast == 0 && lin == 0) {
            if (cst == 0) {
                for (i64 t = start[last]; t <= B; t += qmod) {
                    x[static_cast<std::size_t>(last)] = t;
                    fn(const_cast<const std::vector<i64>&>(x));
                }
            }
        } else {
            for (i64 t : detail::quadratic_roots_bounded(clast, lin, cst, B)) {
                if (mod_pos(t - a[last], qmod) != 0) continue;
                x[static_cast<std::size_t>(last)] = t;
                fn(const_cast<const std::vector<i64>&>(x));
            }
        }
        if (last == 0) break;
        int pos = last - 1;
        while (pos >= 0 && pref[pos] + qmod > B) {
            pref[pos] = start[pos];
            --pos;
        }
        if (pos < 0) break;
        pref[pos] += qmod;
    }
}

// Materialized point list (small bounds; mostly for tests and witnesses).
std::vector<std::vector<i64>> collect_quadric_points(const QuadraticForm& qstar, i64 B);

// Exact #{x in [-B,B]^n : Q(x) = 0, x == a (mod q)}.
i64 count_points_congruence(const QuadraticForm& q, i64 B, i64 qmod, const std::vector<i64>& a);

// Exact #{x : Q*(x) = 0, |x| <= B} for a hyperbolic-shape form.
i64 count_quadric_points(const QuadraticForm& qstar, i64 B);

// Sieve count N(B, M): quadric points whose family gcd is 0 or has a prime
// factor > M.  Uses the hyperbolic fast path when the form has that shape,
// otherwise the exact congruence sweep with q = 1.
SieveReport sieve_count(const QuadraticForm& q, const std::vector<IntegerPolynomial>& family,
                        i64 B, i64 M, int threads = 1);

// One enumeration pass, many thresholds (m_grid ascending).
std::vector<SieveReport> sieve_count_grid(const QuadraticForm& q,
                                          const std::vector<IntegerPolynomial>& family, i64 B,
                                          const std::vector<i64>& m_grid, int threads = 1);

// Affine variant over a lopsided box: counts x with all f_j(x) sharing a
// prime divisor > M (the all-zero point counts; every prime divides 0).
SieveReport affine_sieve_count(const std::vector<IntegerPolynomial>& family, const Box& box,
                               i64 M, int threads = 1);

// Searches |x| <= B_max for a quadric zero with x == a (mod M) whose family
// gcd is nonzero and supported only on the primes of S.  Returns the first
// hit in the congruence-sweep order, or nullopt.  Throws DomainError
// "BadTarget" when Q(a) != 0 mod M.
std::optional<std::vector<i64>> strong_approx_search(const QuadraticForm& q,
                                                     const std::vector<IntegerPolynomial>& family,
                                                     const std::vector<i64>& a, i64 M,
                                                     const std::vector<i64>& s_primes, i64 b_max);

} // namespace qsieve
