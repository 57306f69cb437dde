#include "qsieve/enumerate.hpp"

#include "qsieve/parallel.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <array>
#include <chrono>
#include <stdexcept>

namespace qsieve {

Box::Box(std::vector<double> b) : bounds(std::move(b)) {
    if (bounds.empty()) throw std::invalid_argument("box needs at least one axis");
    for (double v : bounds)
        if (!(v >= 1.0)) throw std::invalid_argument("box half-widths must be >= 1");
}

Box Box::uniform(int dims, double b) {
    return Box(std::vector<double>(static_cast<std::size_t>(dims), b));
}

double Box::volume() const {
    double v = 1.0;
    for (double b : bounds) v *= b;
    return v;
}

double Box::b_min() const {
    double m = bounds[0];
    for (double b : bounds) m = std::min(m, b);
    return m;
}

namespace detail {

std::vector<i64> quadratic_roots_bounded(const Int& a, const Int& b, const Int& c, i64 bound) {
    std::vector<i64> roots;
    auto push = [&](const Int& t) {
        if (abs(t) > bound) return;
        i64 v = t.convert_to<i64>();
        for (i64 r : roots)
            if (r == v) return;
        roots.push_back(v);
    };
    if (a == 0) {
        if (b == 0) return roots; // constant: caller handles the c == 0 case
        if (c % b == 0) push(-c / b);
        return roots;
    }
    Int disc = b * b - 4 * a * c;
    if (disc < 0) return roots;
    Int s = boost::multiprecision::sqrt(disc);
    if (s * s != disc) return roots;
    for (const Int& num : {Int(-b - s), Int(-b + s)})
        if (num % (2 * a) == 0) push(num / (2 * a));
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {
constexpr u64 kSpfLimit = u64(1) << 24;
}

DivisorHelper::DivisorHelper(u64 max_abs_value) {
    if (max_abs_value >= 2 && max_abs_value <= kSpfLimit)
        spf_ = spf_table(static_cast<std::size_t>(max_abs_value));
}

void DivisorHelper::divisors_in_range(u64 t, u64 lo, u64 hi, std::vector<u64>& out) const {
    out.clear();
    if (t == 0 || lo > hi) return;
    std::array<u64, 16> ps{};
    std::array<int, 16> es{};
    int np = 0;
    if (!spf_.empty() && t < spf_.size()) {
        u64 m = t;
        while (m > 1) {
            u64 p = spf_[static_cast<std::size_t>(m)];
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            ps[static_cast<std::size_t>(np)] = p;
            es[static_cast<std::size_t>(np)] = e;
            ++np;
        }
    } else {
        for (const auto& [p, e] : factor64(t)) {
            ps[static_cast<std::size_t>(np)] = static_cast<u64>(p);
            es[static_cast<std::size_t>(np)] = e;
            ++np;
        }
    }
    out.push_back(1);
    for (int i = 0; i < np; ++i) {
        const std::size_t sz = out.size();
        u64 pe = 1;
        for (int e = 0; e < es[static_cast<std::size_t>(i)]; ++e) {
            pe *= ps[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pe);
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [&](u64 d) { return d < lo || d > hi; }),
              out.end());
    std::sort(out.begin(), out.end());
}

} // namespace detail

std::vector<std::vector<i64>> collect_quadric_points(const QuadraticForm& qstar, i64 B) {
    std::vector<std::vector<i64>> out;
    for_each_quadric_point(qstar, B, [&](const std::vector<i64>& x) { out.push_back(x); });
    return out;
}

i64 count_quadric_points(const QuadraticForm& qstar, i64 B) {
    i64 n = 0;
    for_each_quadric_point(qstar, B, [&](const std::vector<i64>&) { ++n; });
    return n;
}

i64 count_points_congruence(const QuadraticForm& q, i64 B, i64 qmod, const std::vector<i64>& a) {
    i64 n = 0;
    for_each_quadric_point_congruence(q, B, qmod, a, [&](const std::vector<i64>&) { ++n; });
    return n;
}

namespace {

using i128 = __int128_t;
using u128 = __uint128_t;

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

struct CompiledTerm {
    i64 coeff;
    std::vector<std::pair<int, int>> powers; // (variable, exponent)
};

struct CompiledPoly {
    std::vector<CompiledTerm> terms; // empty + !fast => use slow
    IntegerPolynomial slow;
    bool fast = false;
};

CompiledPoly compile_poly(const IntegerPolynomial& p, const std::vector<i64>& axis_bounds) {
    CompiledPoly cp;
    cp.slow = p;
    Int sup = p.sup_bound(axis_bounds);
    cp.fast = sup < (Int(1) << 120);
    if (!cp.fast) return cp;
    for (const auto& [mono, c] : p.terms()) {
        if (abs(c) >= (Int(1) << 62)) {
            cp.fast = false;
            cp.terms.clear();
            return cp;
        }
        CompiledTerm t;
        t.coeff = c.convert_to<i64>();
        for (std::size_t v = 0; v < mono.size(); ++v)
            if (mono[v] > 0) t.powers.emplace_back(static_cast<int>(v), mono[v]);
        cp.terms.push_back(std::move(t));
    }
    return cp;
}

i128 eval_compiled(const CompiledPoly& cp, const std::vector<i64>& x) {
    i128 s = 0;
    for (const CompiledTerm& t : cp.terms) {
        i128 v = t.coeff;
        for (const auto& [var, e] : t.powers) {
            const i128 xv = x[static_cast<std::size_t>(var)];
            for (int k = 0; k < e; ++k) v *= xv;
        }
        s += v;
    }
    return s;
}

// gcd of the family values at x: {0, u64 value, or overflow via Int}
struct GcdValue {
    bool zero = false;
    bool big = false;
    u64 small = 0;
    Int wide;
};

GcdValue family_gcd(const std::vector<CompiledPoly>& family, const std::vector<i64>& x) {
    GcdValue out;
    bool all_fast = true;
    for (const auto& cp : family)
        if (!cp.fast) all_fast = false;
    if (all_fast) {
        u128 g = 0;
        for (const auto& cp : family) {
            i128 v = eval_compiled(cp, x);
            u128 av = v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v);
            g = gcd128(g, av);
            if (g == 1) break;
        }
        if (g == 0) {
            out.zero = true;
        } else if (g <= u128(~u64(0))) {
            out.small = static_cast<u64>(g);
        } else {
            out.big = true;
            // reconstruct exactly for the rare wide case
            Int gg = 0;
            std::vector<Int> xi(x.begin(), x.end());
            for (const auto& cp : family) gg = boost::multiprecision::gcd(gg, cp.slow.eval(xi));
            out.wide = gg;
        }
        return out;
    }
    Int g = 0;
    std::vector<Int> xi(x.begin(), x.end());
    for (const auto& cp : family) {
        g = boost::multiprecision::gcd(g, cp.slow.eval(xi));
        if (g == 1) break;
    }
    if (g == 0)
        out.zero = true;
    else if (g <= Int(~u64(0)))
        out.small = g.convert_to<u64>();
    else {
        out.big = true;
        out.wide = g;
    }
    return out;
}

// Does g (exact, > 1) have a prime factor > m?  Wide values are stripped by
// the primes up to 10^6 and the cofactor is certified prime; anything larger
// is out of desk scale by construction.
bool wide_has_factor_above(Int g, i64 m) {
    if (m < 2) return g > 1;
    static const std::vector<i64> small_primes = primes_up_to(1000000);
    for (i64 p : small_primes) {
        if (p > m) break;
        while (g % p == 0) g /= p;
        if (g == 1) return false;
    }
    if (g == 1) return false;
    if (m < 1000000) return true; // remaining factors all exceed 10^6 > m
    if (g <= Int(~u64(0))) return has_prime_factor_above(g.convert_to<u64>(), static_cast<u64>(m));
    if (boost::multiprecision::miller_rabin_test(g, 32)) return g > m;
    throw std::logic_error("family gcd beyond factoring range");
}

struct SieveAccum {
    i64 total = 0;
    i64 zero_locus = 0;
    std::vector<i64> sieved; // per threshold

    explicit SieveAccum(std::size_t k) : sieved(k, 0) {}
    SieveAccum() = default;

    void merge(const SieveAccum& o) {
        total += o.total;
        zero_locus += o.zero_locus;
        if (sieved.size() < o.sieved.size()) sieved.resize(o.sieved.size(), 0);
        for (std::size_t i = 0; i < o.sieved.size(); ++i) sieved[i] += o.sieved[i];
    }
};

void tally_point(const std::vector<CompiledPoly>& family, const std::vector<i64>& x,
                 const std::vector<i64>& m_grid, SieveAccum& acc) {
    ++acc.total;
    GcdValue g = family_gcd(family, x);
    if (g.zero) {
        ++acc.zero_locus;
        for (auto& s : acc.sieved) ++s;
        return;
    }
    if (!g.big) {
        if (g.small == 1) return;
        const u64 lpf = largest_prime_factor64(g.small);
        for (std::size_t i = 0; i < m_grid.size(); ++i)
            if (lpf > static_cast<u64>(m_grid[i])) ++acc.sieved[i];
        return;
    }
    for (std::size_t i = 0; i < m_grid.size(); ++i)
        if (wide_has_factor_above(g.wide, m_grid[i])) ++acc.sieved[i];
}

std::vector<CompiledPoly> compile_family(const std::vector<IntegerPolynomial>& family, int n_vars,
                                         const std::vector<i64>& axis_bounds, bool require_homogeneous) {
    if (family.empty()) throw std::invalid_argument("family must be nonempty");
    std::vector<CompiledPoly> out;
    for (const auto& f : family) {
        if (require_homogeneous && !f.is_homogeneous())
            throw std::invalid_argument("family members must be homogeneous forms");
        if (f.n_vars() > n_vars)
            throw std::invalid_argument("family member uses more variables than the ambient");
        out.push_back(compile_poly(f.extended(n_vars), axis_bounds));
    }
    return out;
}

} // namespace

std::vector<SieveReport> sieve_count_grid(const QuadraticForm& q,
                                          const std::vector<IntegerPolynomial>& family, i64 B,
                                          const std::vector<i64>& m_grid, int threads) {
    if (B < 0) throw std::invalid_argument("bound must be nonnegative");
    const auto t0 = std::chrono::steady_clock::now();
    const int n = q.n_vars();
    const std::vector<i64> axes(static_cast<std::size_t>(n), B);
    const auto compiled = compile_family(family, n, axes, /*require_homogeneous=*/true);

    SieveAccum acc(m_grid.size());
    if (is_hyperbolic_shape(q, nullptr)) {
        acc = parallel_reduce<SieveAccum>(
            -B, B + 1, threads, SieveAccum(m_grid.size()),
            [&](i64 lo, i64 hi) {
                SieveAccum part(m_grid.size());
                for_each_quadric_point(
                    q, B, [&](const std::vector<i64>& x) { tally_point(compiled, x, m_grid, part); },
                    lo, hi - 1);
                return part;
            },
            [](SieveAccum& a, const SieveAccum& b) { a.merge(b); });
    } else {
        const std::vector<i64> zero(static_cast<std::size_t>(n), 0);
        for_each_quadric_point_congruence(
            q, B, 1, zero, [&](const std::vector<i64>& x) { tally_point(compiled, x, m_grid, acc); });
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<SieveReport> out;
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        SieveReport r;
        r.b = B;
        r.m = m_grid[i];
        r.total_points = acc.total;
        r.sieved_points = acc.sieved[i];
        r.zero_locus_points = acc.zero_locus;
        r.elapsed_seconds = dt;
        out.push_back(r);
    }
    return out;
}

SieveReport sieve_count(const QuadraticForm& q, const std::vector<IntegerPolynomial>& family, i64 B,
                        i64 M, int threads) {
    return sieve_count_grid(q, family, B, {M}, threads).front();
}

SieveReport affine_sieve_count(const std::vector<IntegerPolynomial>& family, const Box& box, i64 M,
                               int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = box.dims();
    std::vector<i64> axes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) axes[static_cast<std::size_t>(i)] = box.axis_floor(i);
    const auto compiled = compile_family(family, n, axes, /*require_homogeneous=*/false);
    const std::vector<i64> m_grid{M};

    const i64 first = axes[0];
    SieveAccum acc = parallel_reduce<SieveAccum>(
        -first, first + 1, threads, SieveAccum(1),
        [&](i64 lo, i64 hi) {
            SieveAccum part(1);
            std::vector<i64> x(static_cast<std::size_t>(n), 0);
            for (i64 v0 = lo; v0 < hi; ++v0) {
                x[0] = v0;
                for (int i = 1; i < n; ++i)
                    x[static_cast<std::size_t>(i)] = -axes[static_cast<std::size_t>(i)];
                for (;;) {
                    tally_point(compiled, x, m_grid, part);
                    int pos = n - 1;
                    while (pos >= 1 &&
                           x[static_cast<std::size_t>(pos)] == axes[static_cast<std::size_t>(pos)]) {
                        x[static_cast<std::size_t>(pos)] = -axes[static_cast<std::size_t>(pos)];
                        --pos;
                    }
                    if (pos < 1) break;
                    ++x[static_cast<std::size_t>(pos)];
                }
            }
            return part;
        },
        [](SieveAccum& a, const SieveAccum& b) { a.merge(b); });

    SieveReport r;
    r.b = static_cast<i64>(box.b_min());
    r.m = M;
    r.total_points = acc.total;
    r.sieved_points = acc.sieved[0];
    r.zero_locus_points = acc.zero_locus;
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::optional<std::vector<i64>> strong_approx_search(const QuadraticForm& q,
                                                     const std::vector<IntegerPolynomial>& family,
                                                     const std::vector<i64>& a, i64 M,
                                                     const std::vector<i64>& s_primes, i64 b_max) {
    const int n = q.n_vars();
    if (static_cast<int>(a.size()) != n) throw std::invalid_argument("target vector size mismatch");
    if (M < 1) throw std::invalid_argument("modulus must be positive");
    if (family.empty()) throw std::invalid_argument("family must be nonempty");
    {
        i64 m = M;
        for (i64 p : s_primes)
            while (p > 1 && m % p == 0) m /= p;
        if (m != 1) throw std::invalid_argument("modulus must be a product of primes in S");
    }
    if (Int(q.eval_i64pt(a) % M) != 0)
        throw DomainError("BadTarget", "Q(a) is not divisible by the modulus");

    std::optional<std::vector<i64>> found;
    for_each_quadric_point_congruence(q, b_max, M, a, [&](const std::vector<i64>& x) {
        if (found) return;
        bool nonzero = false;
        for (i64 v : x)
            if (v != 0) nonzero = true;
        if (!nonzero) return;
        std::vector<Int> xi(x.begin(), x.end());
        Int g = 0;
        for (const auto& f : family) g = boost::multiprecision::gcd(g, f.extended(n).eval(xi));
        if (g == 0) return; // divisible by primes outside S
        g = abs(g);
        for (i64 p : s_primes)
            while (p > 1 && g % p == 0) g /= p;
        if (g == 1) found = x;
    });
    return found;
}

} // namespace qsieve
