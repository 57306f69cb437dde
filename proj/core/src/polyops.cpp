#include "qsieve/polyops.hpp"

#include "qsieve/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace qsieve {

namespace {

// Exact division of multivariate integer polynomials (throws if inexact).
// Uses leading-term reduction under the lexicographic monomial order; when
// the dividend is a true multiple the division never stalls.
IntegerPolynomial divexact(IntegerPolynomial a, const IntegerPolynomial& b) {
    if (b.is_zero()) throw std::logic_error("polynomial division by zero");
    const int n = std::max(a.n_vars(), b.n_vars());
    a = a.extended(n);
    const IntegerPolynomial bb = b.extended(n);
    const auto& lead_b = *bb.terms().rbegin();
    IntegerPolynomial q = IntegerPolynomial::constant(n, 0);
    while (!a.is_zero()) {
        const auto& lead_a = *a.terms().rbegin();
        Monomial diff(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            diff[i] = lead_a.first[i] - lead_b.first[i];
            if (diff[i] < 0) throw std::logic_error("inexact polynomial division");
        }
        if (lead_a.second % lead_b.second != 0)
            throw std::logic_error("inexact polynomial division");
        IntegerPolynomial t = IntegerPolynomial::monomial(n, diff, lead_a.second / lead_b.second);
        q += t;
        a = a - t * bb;
    }
    return q;
}

// Fraction-free determinant of a matrix of polynomials.
IntegerPolynomial det_poly_bareiss(std::vector<std::vector<IntegerPolynomial>> m, int n_vars) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return IntegerPolynomial::constant(n_vars, 1);
    IntegerPolynomial prev = IntegerPolynomial::constant(n_vars, 1);
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            int swap_row = -1;
            for (int r = k + 1; r < n; ++r)
                if (!m[r][k].is_zero()) { swap_row = r; break; }
            if (swap_row < 0) return IntegerPolynomial::constant(n_vars, 0);
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = divexact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
        prev = m[k][k];
    }
    IntegerPolynomial det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

} // namespace

Int height(const IntegerPolynomial& f) {
    if (f.is_zero()) throw DomainError("ZeroPolynomial", "height of the zero polynomial");
    Int h = 0;
    for (const auto& [mono, c] : f.terms()) {
        (void)mono;
        Int a = abs(c);
        if (a > h) h = a;
    }
    return h;
}

IntegerPolynomial sylvester_resultant(const IntegerPolynomial& f, const IntegerPolynomial& g,
                                      int var_index) {
    const int d1 = f.degree_in(var_index);
    const int d2 = g.degree_in(var_index);
    if (d1 <= 0 || d2 <= 0)
        throw DomainError("VariableAbsent",
                          "both inputs must have positive degree in the eliminated variable");
    const int n = std::max(f.n_vars(), g.n_vars());
    auto fc = f.extended(n).coeffs_in(var_index); // ascending, size d1+1
    auto gc = g.extended(n).coeffs_in(var_index);
    const int size = d1 + d2;
    std::vector<std::vector<IntegerPolynomial>> m(
        static_cast<std::size_t>(size),
        std::vector<IntegerPolynomial>(static_cast<std::size_t>(size),
                                       IntegerPolynomial::constant(n, 0)));
    for (int r = 0; r < d2; ++r)
        for (int k = 0; k <= d1; ++k) m[r][r + k] = fc[d1 - k];
    for (int s = 0; s < d1; ++s)
        for (int k = 0; k <= d2; ++k) m[d2 + s][s + k] = gc[d2 - k];
    return det_poly_bareiss(std::move(m), n);
}

namespace {

i64 count_box_rec(const IntegerPolynomial& f, const std::vector<int>& occ, std::size_t idx, i64 b,
                  const std::vector<Int>& range_pow) {
    if (f.total_degree() <= 0) {
        if (!f.is_zero()) return 0;
        // remaining occurring variables range freely
        return static_cast<i64>(range_pow[occ.size() - idx]);
    }
    i64 total = 0;
    for (i64 v = -b; v <= b; ++v)
        total += count_box_rec(f.substituted(occ[idx], Int(v)), occ, idx + 1, b, range_pow);
    return total;
}

} // namespace

ZeroCount count_zeros_box(const IntegerPolynomial& f, i64 B, i64 cap) {
    if (f.is_zero()) throw std::invalid_argument("count_zeros_box: zero polynomial");
    if (B < 1) throw std::invalid_argument("count_zeros_box: B must be positive");
    const int n = f.n_vars();
    const Int side = 2 * Int(B) + 1;
    if (int_pow(side, static_cast<unsigned>(n)) > cap)
        throw DomainError("CapExceeded", "box of side " + side.str() + " in " + std::to_string(n) +
                                             " variables exceeds the enumeration cap");
    const auto occ = f.occurring_vars();
    const int d = std::max(f.total_degree(), 0);
    Int bound = Int(static_cast<i64>(occ.size())) * d * int_pow(side, static_cast<unsigned>(n - 1));

    std::vector<Int> range_pow(occ.size() + 1);
    for (std::size_t k = 0; k <= occ.size(); ++k) range_pow[k] = int_pow(side, static_cast<unsigned>(k));
    i64 exact = count_box_rec(f, occ, 0, B, range_pow);
    // variables not occurring in f range freely too
    exact *= static_cast<i64>(int_pow(side, static_cast<unsigned>(n - static_cast<int>(occ.size()))));
    return {exact, bound};
}

ZeroCount count_zeros_mod_p(const IntegerPolynomial& f, i64 p, i64 cap) {
    if (p < 2) throw std::invalid_argument("count_zeros_mod_p: p must be a prime");
    const int n = f.n_vars();
    IntegerPolynomial red = IntegerPolynomial::constant(n, 0);
    for (const auto& [mono, c] : f.terms()) {
        Int r = c % p;
        if (r < 0) r += p;
        if (r != 0) red.add_term(mono, r);
    }
    if (red.is_zero())
        throw DomainError("IdenticallyZeroModP", "polynomial vanishes identically modulo " +
                                                     std::to_string(p));
    if (int_pow(Int(p), static_cast<unsigned>(n)) > cap)
        throw DomainError("CapExceeded", "p^n exceeds the enumeration cap");
    const int d = red.total_degree();
    Int bound = Int(n) * d * int_pow(Int(p), static_cast<unsigned>(n - 1));

    const auto occ = red.occurring_vars();
    std::vector<i64> x(static_cast<std::size_t>(n), 0);
    i64 exact = 0;
    if (!occ.empty()) {
        std::vector<i64> odo(occ.size(), 1);
        for (;;) {
            for (std::size_t i = 0; i < occ.size(); ++i) x[occ[i]] = odo[i];
            if (red.eval_mod(x, p) == 0) ++exact;
            std::size_t pos = occ.size();
            while (pos > 0 && odo[pos - 1] == p) odo[--pos] = 1;
            if (pos == 0) break;
            ++odo[pos - 1];
        }
    }
    i64 free_mult = 1;
    for (int k = 0; k < n - static_cast<int>(occ.size()); ++k) free_mult *= p;
    exact *= free_mult;
    return {exact, bound};
}

IntegerPolynomial shift_variables(const IntegerPolynomial& f, int offset, int n_vars_new) {
    if (offset < 0) throw std::invalid_argument("negative variable shift");
    IntegerPolynomial out = IntegerPolynomial::constant(n_vars_new, 0);
    for (const auto& [mono, c] : f.terms()) {
        Monomial m(static_cast<std::size_t>(n_vars_new), 0);
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] == 0) continue;
            if (static_cast<int>(i) + offset >= n_vars_new)
                throw std::invalid_argument("variable shift out of range");
            m[i + offset] = mono[i];
        }
        out.add_term(m, c);
    }
    return out;
}

std::vector<IntegerPolynomial> eliminate_x0(const QuadraticForm& q0,
                                            const std::vector<IntegerPolynomial>& family,
                                            int degree_bound) {
    const int m = q0.n_vars() + 2;
    const IntegerPolynomial q0_amb = shift_variables(q0.to_polynomial(), 2, m);
    int max_deg = 0;
    for (const auto& f : family) {
        if (!f.is_homogeneous())
            throw DomainError("NotHomogeneous", "family members must be homogeneous forms");
        if (f.n_vars() > m)
            throw std::invalid_argument("family member uses more variables than the quadric ambient");
        max_deg = std::max(max_deg, f.total_degree());
    }
    int d = degree_bound < 0 ? max_deg : degree_bound;
    if (d < max_deg) throw std::invalid_argument("degree bound below the family degree");

    const IntegerPolynomial x1 = IntegerPolynomial::variable(m, 1);
    std::vector<IntegerPolynomial> out;
    out.reserve(family.size());
    for (const auto& f : family) {
        auto parts = f.extended(m).coeffs_in(0); // f = sum_j X0^j parts[j]
        IntegerPolynomial k = IntegerPolynomial::constant(m, 0);
        for (std::size_t j = 0; j < parts.size(); ++j) {
            if (parts[j].is_zero()) continue;
            k += q0_amb.pow(static_cast<unsigned>(j)) *
                 x1.pow(static_cast<unsigned>(d - static_cast<int>(j))) * parts[j];
        }
        out.push_back(std::move(k));
    }
    return out;
}

std::vector<IntegerPolynomial> strip_common_content(const std::vector<IntegerPolynomial>& family,
                                                    const std::vector<i64>& allowed_primes) {
    bool any_nonzero = false;
    for (const auto& f : family)
        if (!f.is_zero()) any_nonzero = true;
    if (family.empty() || !any_nonzero)
        throw DomainError("AllZero", "family has no nonzero member");

    std::vector<IntegerPolynomial> out = family;
    for (auto& f : out) {
        if (f.is_zero()) continue;
        Int c = f.content();
        Int divisor = 1;
        for (i64 p : allowed_primes)
            while (c % p == 0) {
                divisor *= p;
                c /= p;
            }
        if (divisor > 1) f = f.divided_by_int(divisor);
    }

    int n_max = 0;
    for (const auto& f : out) n_max = std::max(n_max, f.n_vars());
    Monomial common;
    bool first = true;
    for (const auto& f : out) {
        if (f.is_zero()) continue;
        for (const auto& [mono, c] : f.terms()) {
            (void)c;
            Monomial padded(static_cast<std::size_t>(n_max), 0);
            std::copy(mono.begin(), mono.end(), padded.begin());
            if (first) {
                common = padded;
                first = false;
            } else {
                for (std::size_t i = 0; i < common.size(); ++i)
                    common[i] = std::min(common[i], padded[i]);
            }
        }
    }
    bool trivial = true;
    for (auto e : common)
        if (e != 0) trivial = false;
    if (trivial) return out;

    // All-or-nothing: removing the common monomial must not reduce any
    // member to a constant (that would change its zero set structure).
    auto equals_common = [&](const Monomial& mono) {
        for (std::size_t i = 0; i < common.size(); ++i) {
            std::int32_t e = i < mono.size() ? mono[i] : 0;
            if (e != common[i]) return false;
        }
        return true;
    };
    for (const auto& f : out) {
        if (f.is_zero()) continue;
        bool would_be_constant = true;
        for (const auto& [mono, c] : f.terms()) {
            (void)c;
            if (!equals_common(mono)) {
                would_be_constant = false;
                break;
            }
        }
        if (would_be_constant) return out;
    }
    for (auto& f : out) {
        if (f.is_zero()) continue;
        Monomial trimmed(common.begin(), common.begin() + f.n_vars());
        f = f.divided_by_monomial(trimmed);
    }
    return out;
}

} // namespace qsieve
