#include "qsieve/localdensity.hpp"

#include "qsieve/errors.hpp"
#include "qsieve/primes.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace qsieve {

std::string to_string(DensityMethod m) {
    switch (m) {
        case DensityMethod::BruteForce: return "BruteForce";
        case DensityMethod::SmoothSingularRecursion: return "SmoothSingularRecursion";
        case DensityMethod::ClosedForm: return "ClosedForm";
    }
    return "?";
}

namespace {

// p^e if it stays within limit, otherwise -1.
i64 pow_within(i64 p, i64 e, i64 limit) {
    i64 v = 1;
    for (i64 i = 0; i < e; ++i) {
        if (v > limit / p) return -1;
        v *= p;
    }
    return v;
}

void require_prime(i64 p) {
    if (p < 2 || !is_prime64(static_cast<u64>(p)))
        throw std::invalid_argument("modulus base must be prime");
}

// Dense c[i][j] (i <= j) reduced into [0, m).
std::vector<std::vector<i64>> dense_coeffs_mod(const QuadraticForm& q, i64 m) {
    int n = q.n_vars();
    std::vector<std::vector<i64>> c(n, std::vector<i64>(n, 0));
    for (const auto& [ij, v] : q.coeffs()) {
        const i64 r = static_cast<i64>(v % m);
        c[ij.first][ij.second] = r < 0 ? r + m : r;
    }
    return c;
}

// Visit every x in [0, m)^n with Q(x) mod m, updating the last coordinate
// incrementally: Q(..., t+1) - Q(..., t) = a(2t+1) + s with a the diagonal
// coefficient and s the accumulated cross terms.
template <typename Fn>
void residue_sweep(const QuadraticForm& q, i64 m, Fn&& fn) {
    const int n = q.n_vars();
    const auto c = dense_coeffs_mod(q, m);
    std::vector<i64> x(n, 0);
    const i64 a = c[n - 1][n - 1];
    for (;;) {
        i64 gamma = 0; // Q(prefix, 0)
        for (int i = 0; i + 1 < n; ++i)
            for (int j = i; j + 1 < n; ++j)
                if (c[i][j]) gamma = (gamma + c[i][j] % m * (x[i] * x[j] % m)) % m;
        i64 s = 0; // coefficient of the last variable, linear part
        for (int i = 0; i + 1 < n; ++i)
            if (c[i][n - 1]) s = (s + c[i][n - 1] * x[i]) % m;
        i64 v = gamma;
        for (i64 t = 0; t < m; ++t) {
            x[n - 1] = t;
            fn(x, v);
            v = (v + s + a % m * ((2 * t + 1) % m)) % m;
        }
        x[n - 1] = 0;
        int pos = n - 2;
        while (pos >= 0 && x[pos] == m - 1) x[pos--] = 0;
        if (pos < 0) break;
        ++x[pos];
    }
}

// Reduced polynomial mod p: kept terms have coefficient in [1, p).
struct ReducedPoly {
    std::vector<std::pair<Monomial, i64>> terms;
    bool zero() const { return terms.empty(); }
    bool nonzero_constant() const {
        return terms.size() == 1 &&
               std::all_of(terms[0].first.begin(), terms[0].first.end(),
                           [](int e) { return e == 0; });
    }
    bool homogeneous_linear() const {
        for (const auto& [mono, c] : terms) {
            (void)c;
            int total = 0;
            for (int e : mono) total += e;
            if (total != 1) return false;
        }
        return true;
    }
    i64 eval_mod(const std::vector<i64>& x, i64 p) const {
        i64 acc = 0;
        for (const auto& [mono, c] : terms) {
            i64 t = c;
            for (size_t i = 0; i < mono.size(); ++i)
                for (int e = 0; e < mono[i]; ++e) t = t * (x[i] % p) % p;
            acc = (acc + t) % p;
        }
        return acc;
    }
    i64 constant_term_mod(i64 p) const {
        for (const auto& [mono, c] : terms) {
            bool constant = true;
            for (int e : mono)
                if (e != 0) constant = false;
            if (constant) return c % p;
        }
        return 0;
    }
};

ReducedPoly reduce_mod_p(const IntegerPolynomial& f, i64 p) {
    ReducedPoly out;
    for (const auto& [mono, c] : f.terms()) {
        i64 r = static_cast<i64>(c % p);
        if (r < 0) r += p;
        if (r) out.terms.emplace_back(mono, r);
    }
    return out;
}

bool nonsingular_mod_p(const QuadraticForm& q, i64 p) {
    return p % 2 == 1 && rank_mod_p(q.doubled_matrix(), p) == q.n_vars();
}

// Exact #{x in F_p^n : Q(x) = 0} for odd p, via congruence diagonalization
// mod p.  With r nonzero diagonal entries d_1..d_r (the regular part; Q
// vanishes on the radical in odd characteristic):
//   r odd:  p^{n-1}
//   r even: p^{n-1} + eta (p^{n-r/2} - p^{n-r/2-1}),
//           eta = legendre((-1)^{r/2} d_1...d_r)
Int nu_p_closed_form(const QuadraticForm& q, i64 p) {
    const int n = q.n_vars();
    IMat A = q.doubled_matrix();
    std::vector<std::vector<i64>> a(n, std::vector<i64>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = mod_pos(static_cast<i64>(A.at(i, j) % p), p);

    int r = 0;
    i64 prod = 1; // product of the Q-diagonal d_i = a_ii / 2 mod p
    const i64 inv2 = invmod64(2, p);
    for (int i = 0; i < n; ++i) {
        // choose a pivot on the diagonal, manufacturing one from an
        // off-diagonal entry if necessary
        int piv = -1;
        for (int l = i; l < n; ++l)
            if (a[l][l]) { piv = l; break; }
        if (piv < 0) {
            int fl = -1, fc = -1;
            for (int l = i; l < n && fl < 0; ++l)
                for (int c2 = l + 1; c2 < n; ++c2)
                    if (a[l][c2]) { fl = l; fc = c2; break; }
            if (fl < 0) break; // trailing block is zero: rank found
            for (int t = 0; t < n; ++t) a[fl][t] = (a[fl][t] + a[fc][t]) % p;
            for (int t = 0; t < n; ++t) a[t][fl] = (a[t][fl] + a[t][fc]) % p;
            piv = fl;
        }
        if (piv != i) {
            std::swap(a[piv], a[i]);
            for (int t = 0; t < n; ++t) std::swap(a[t][piv], a[t][i]);
        }
        const i64 d = a[i][i];
        const i64 dinv = invmod64(d, p);
        for (int l = i + 1; l < n; ++l) {
            if (!a[l][i]) continue;
            const i64 f = a[l][i] * dinv % p;
            for (int t = 0; t < n; ++t) a[l][t] = mod_pos(a[l][t] - f * a[i][t] % p, p);
            for (int t = 0; t < n; ++t) a[t][l] = mod_pos(a[t][l] - f * a[t][i] % p, p);
        }
        prod = prod * (d * inv2 % p) % p;
        ++r;
    }

    if (r == 0) return int_pow(Int(p), n);
    if (r % 2 == 1) return int_pow(Int(p), n - 1);
    const int h = r / 2;
    i64 arg = prod;
    if (h % 2 == 1) arg = (p - arg) % p; // times (-1)^{r/2}
    const int eta = legendre_symbol(arg, p);
    Int out = int_pow(Int(p), n - 1);
    out += Int(eta) * (int_pow(Int(p), n - h) - int_pow(Int(p), n - h - 1));
    return out;
}

Int nu_brute(const QuadraticForm& q, i64 p, int k, i64 cap) {
    const i64 m = pow_within(p, k, (i64)1 << 62);
    if (m < 0 || pow_within(m, q.n_vars(), cap) < 0)
        throw DomainError("CapExceeded", "residue sweep would exceed the evaluation budget");
    Int count = 0;
    residue_sweep(q, m, [&](const std::vector<i64>&, i64 v) {
        if (v == 0) ++count;
    });
    return count;
}

// nu(p^k) = (nu(p) - 1) p^{(k-1)(n-1)} + p^n nu(p^{k-2}) for odd p with Q
// nonsingular mod p: nonzero solutions mod p are smooth and lift by Hensel,
// the rest lie over x = 0 and reduce two levels down.
Int nu_recursion(const QuadraticForm& q, i64 p, int k) {
    const int n = q.n_vars();
    const Int nu1 = nu_p_closed_form(q, p);
    Int prev2 = 1;   // nu(p^0)
    Int prev1 = nu1; // nu(p^1)
    if (k == 0) return prev2;
    if (k == 1) return prev1;
    for (int j = 2; j <= k; ++j) {
        Int cur = (nu1 - 1) * int_pow(Int(p), (j - 1) * (n - 1)) + int_pow(Int(p), n) * prev2;
        prev2 = prev1;
        prev1 = cur;
    }
    return prev1;
}

Rat sigma_closed_form(const QuadraticForm& q, i64 p) {
    const int n = q.n_vars();
    const Int nu1 = nu_p_closed_form(q, p);
    const Rat head = Rat(nu1 - 1) / Rat(int_pow(Int(p), n - 1));
    const Rat ratio = Rat(1) / Rat(int_pow(Int(p), n - 2));
    return head / (Rat(1) - ratio);
}

// Null-space basis of the span of the given homogeneous linear forms mod p,
// returned as vectors with entries in [0, p).
std::vector<std::vector<i64>> linear_kernel_mod_p(const std::vector<ReducedPoly>& forms, int n,
                                                  i64 p) {
    std::vector<std::vector<i64>> rows;
    for (const auto& f : forms) {
        std::vector<i64> row(n, 0);
        for (const auto& [mono, c] : f.terms)
            for (int i = 0; i < n; ++i)
                if (mono[i] == 1) row[i] = c % p;
        rows.push_back(std::move(row));
    }
    // row echelon mod p
    std::vector<int> pivot_cols;
    int rr = 0;
    for (int col = 0; col < n && rr < static_cast<int>(rows.size()); ++col) {
        int sel = -1;
        for (int i = rr; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][col]) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(rows[sel], rows[rr]);
        const i64 inv = invmod64(rows[rr][col], p);
        for (int t = 0; t < n; ++t) rows[rr][t] = rows[rr][t] * inv % p;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == rr || !rows[i][col]) continue;
            const i64 f = rows[i][col];
            for (int t = 0; t < n; ++t) rows[i][t] = mod_pos(rows[i][t] - f * rows[rr][t] % p, p);
        }
        pivot_cols.push_back(col);
        ++rr;
    }
    std::vector<std::vector<i64>> basis;
    std::vector<bool> is_pivot(n, false);
    for (int c2 : pivot_cols) is_pivot[c2] = true;
    for (int free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<i64> v(n, 0);
        v[free] = 1;
        for (int i = 0; i < rr; ++i)
            v[pivot_cols[i]] = mod_pos(-rows[i][free], p);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Q restricted to the subspace spanned by the basis vectors, as a form in
// dim(basis) variables with coefficients reduced mod p.
QuadraticForm restrict_form_mod_p(const QuadraticForm& q, const std::vector<std::vector<i64>>& basis,
                                  i64 p) {
    const int n = q.n_vars();
    const int m = static_cast<int>(basis.size());
    IMat A = q.doubled_matrix();
    QuadraticForm sub(m);
    for (int j = 0; j < m; ++j) {
        std::vector<Int> bj(basis[j].begin(), basis[j].end());
        sub.set_coeff(j, j, q.eval(bj) % p);
        for (int l = j + 1; l < m; ++l) {
            Int pair = 0; // b_j^T A b_l
            for (int r2 = 0; r2 < n; ++r2) {
                if (!basis[j][r2]) continue;
                for (int c2 = 0; c2 < n; ++c2)
                    if (basis[l][c2]) pair += Int(basis[j][r2]) * A.at(r2, c2) * basis[l][c2];
            }
            sub.set_coeff(j, l, pair % p);
        }
    }
    return sub;
}

}  // namespace

Int nu(const QuadraticForm& q, i64 p, int k, const DensityOptions& opt) {
    require_prime(p);
    if (k < 0) throw std::invalid_argument("level must be nonnegative");
    if (q.n_vars() == 0) throw std::invalid_argument("form has no variables");
    if (k == 0) return 1;
    if (opt.method == NuMethod::Auto && nonsingular_mod_p(q, p)) return nu_recursion(q, p, k);
    return nu_brute(q, p, k, opt.cap);
}

Int nu_constrained(const QuadraticForm& q, i64 p, int k, const std::vector<i64>& a,
                   const DensityOptions& opt) {
    require_prime(p);
    if (k < 1) throw std::invalid_argument("level must be positive");
    const int n = q.n_vars();
    if (n == 0) throw std::invalid_argument("form has no variables");
    if (static_cast<int>(a.size()) != n) throw std::invalid_argument("class vector size mismatch");
    const i64 m = pow_within(p, k, (i64)1 << 62);
    const i64 span = pow_within(p, k - 1, (i64)1 << 62); // members per coordinate
    if (m < 0 || span < 0 || pow_within(span, n, opt.cap) < 0)
        throw DomainError("CapExceeded", "congruence-class sweep would exceed the evaluation budget");

    std::vector<i64> base(n);
    for (int i = 0; i < n; ++i) base[i] = mod_pos(a[i], p);
    const auto c = dense_coeffs_mod(q, m);

    // odometer over y with x = base + p y; the last coordinate advances the
    // value of Q incrementally through x_last = base_last + p t.
    Int count = 0;
    std::vector<i64> x = base;
    const i64 alpha = p % m * p % m * c[n - 1][n - 1] % m;
    for (;;) {
        i64 s = 0;
        for (int i = 0; i + 1 < n; ++i)
            if (c[i][n - 1]) s = (s + c[i][n - 1] * x[i]) % m;
        x[n - 1] = base[n - 1];
        i64 v = mod_pos(static_cast<i64>(q.eval_i64pt(x) % m), m);
        const i64 beta = (s + 2 * c[n - 1][n - 1] % m * base[n - 1]) % m * p % m;
        for (i64 t = 0; t < span; ++t) {
            if (v == 0) ++count;
            v = (v + beta + alpha * ((2 * t + 1) % m)) % m;
        }
        int pos = n - 2;
        while (pos >= 0 && x[pos] == base[pos] + p * (span - 1)) {
            x[pos] = base[pos];
            --pos;
        }
        if (pos < 0) break;
        x[pos] += p;
    }
    return count;
}

DensityValue sigma_p(const QuadraticForm& q, i64 p, int k_max, const DensityOptions& opt) {
    require_prime(p);
    if (k_max < 1) throw std::invalid_argument("truncation level must be positive");
    if (q.n_vars() == 0) throw std::invalid_argument("form has no variables");
    const int n = q.n_vars();
    DensityValue out;
    out.p = p;
    out.k_used = k_max;
    if (opt.method == NuMethod::Auto && n >= 3 && nonsingular_mod_p(q, p)) {
        out.method = DensityMethod::SmoothSingularRecursion;
        out.value = sigma_closed_form(q, p);
        out.stabilized = true;
        return out;
    }
    out.method = DensityMethod::BruteForce;
    out.value = Rat(nu_brute(q, p, k_max, opt.cap)) / Rat(int_pow(Int(p), k_max * (n - 1)));
    out.stabilized = false;
    return out;
}

std::vector<Rat> sigma_truncations(const QuadraticForm& q, i64 p, int k_max,
                                   const DensityOptions& opt) {
    require_prime(p);
    if (k_max < 1) throw std::invalid_argument("truncation level must be positive");
    const int n = q.n_vars();
    std::vector<Rat> out;
    for (int k = 1; k <= k_max; ++k)
        out.push_back(Rat(nu(q, p, k, opt)) / Rat(int_pow(Int(p), k * (n - 1))));
    return out;
}

DensityValue mu_qp_coprime(const QuadraticForm& q, const IntegerPolynomial& f,
                           const IntegerPolynomial& g, i64 p, int k_max,
                           const DensityOptions& opt) {
    require_prime(p);
    if (k_max < 1) throw std::invalid_argument("truncation level must be positive");
    if (q.n_vars() == 0) throw std::invalid_argument("form has no variables");
    const int n = q.n_vars();
    const ReducedPoly fr = reduce_mod_p(f.extended(n), p);
    const ReducedPoly gr = reduce_mod_p(g.extended(n), p);

    DensityValue out;
    out.p = p;
    out.k_used = k_max;

    // p | gcd(f, g) identically, or never
    if (fr.zero() && gr.zero()) {
        out.method = DensityMethod::ClosedForm;
        out.value = 0;
        out.stabilized = true;
        return out;
    }
    if (fr.nonzero_constant() || gr.nonzero_constant()) {
        out.method = DensityMethod::ClosedForm;
        out.value = 1;
        out.stabilized = true;
        return out;
    }

    if (opt.method == NuMethod::Auto && n >= 3 && nonsingular_mod_p(q, p)) {
        // The excluded classes a mod p have Q(a) = f(a) = g(a) = 0.  Each
        // nonzero one is a smooth zero contributing p^{(k-1)(n-1)} lifts;
        // the zero class contributes the singular branch p^n nu(p^{k-2}).
        // Dividing by nu(p^k) and letting k grow:
        //   mu = 1 - (c_s p^{-(n-1)} + delta_0 p^{-(n-2)} sigma) / sigma.
        Int z_total = -1;
        bool delta0 = fr.constant_term_mod(p) == 0 && gr.constant_term_mod(p) == 0;
        if (pow_within(p, n, opt.cap) > 0) {
            Int z = 0;
            residue_sweep(q, p, [&](const std::vector<i64>& x, i64 v) {
                if (v == 0 && fr.eval_mod(x, p) == 0 && gr.eval_mod(x, p) == 0) ++z;
            });
            z_total = z;
        } else if (fr.homogeneous_linear() && gr.homogeneous_linear()) {
            auto basis = linear_kernel_mod_p({fr, gr}, n, p);
            if (basis.empty()) {
                z_total = 1; // only the zero vector
            } else {
                z_total = nu_p_closed_form(restrict_form_mod_p(q, basis, p), p);
            }
        } else {
            throw DomainError("CapExceeded",
                              "level-1 class count exceeds the budget and no closed form applies");
        }
        const Int c_s = z_total - (delta0 ? 1 : 0);
        const Rat sigma = sigma_closed_form(q, p);
        Rat excluded = Rat(c_s) / Rat(int_pow(Int(p), n - 1)) / sigma;
        if (delta0) excluded += Rat(1) / Rat(int_pow(Int(p), n - 2));
        out.method = DensityMethod::ClosedForm;
        out.value = Rat(1) - excluded;
        out.stabilized = true;
        return out;
    }

    // honest truncation: sweep mod p^k and divide
    const i64 m = pow_within(p, k_max, (i64)1 << 62);
    if (m < 0 || pow_within(m, n, opt.cap) < 0)
        throw DomainError("CapExceeded", "residue sweep would exceed the evaluation budget");
    Int zeros = 0, coprime = 0;
    residue_sweep(q, m, [&](const std::vector<i64>& x, i64 v) {
        if (v != 0) return;
        ++zeros;
        if (fr.eval_mod(x, p) != 0 || gr.eval_mod(x, p) != 0) ++coprime;
    });
    out.method = DensityMethod::BruteForce;
    out.value = Rat(coprime) / Rat(zeros);
    out.stabilized = false;
    return out;
}

Rat g_weight(const QuadraticForm& q, const IntegerPolynomial& f, const IntegerPolynomial& g,
             i64 q_mod, int k_max, const DensityOptions& opt) {
    if (q_mod < 1) throw std::invalid_argument("modulus must be positive");
    if (q_mod == 1) return Rat(1);
    if (!is_squarefree64(static_cast<u64>(q_mod)))
        throw std::invalid_argument("modulus must be squarefree");
    Rat out(1);
    for (const auto& [p, e] : factor64(static_cast<u64>(q_mod))) {
        (void)e;
        out *= Rat(1) - mu_qp_coprime(q, f, g, static_cast<i64>(p), k_max, opt).value;
    }
    return out;
}

CoprimePrediction predicted_coprime_density(const QuadraticForm& q, const IntegerPolynomial& f,
                                            const IntegerPolynomial& g, i64 p_max, int k_max,
                                            const DensityOptions& opt) {
    const int n = q.n_vars();
    CoprimePrediction pred;
    pred.product = 1;
    pred.tail_bound = 0;
    Rat c_fit = 0; // max of g(p) p^2 over the computed primes
    for (i64 p : primes_up_to(p_max < 0 ? 0 : static_cast<u64>(p_max))) {
        int k_eff = k_max;
        if (!(opt.method == NuMethod::Auto && n >= 3 && nonsingular_mod_p(q, p))) {
            // shrink the truncation level until the sweep fits the budget
            while (k_eff > 1 && (pow_within(p, k_eff, (i64)1 << 62) < 0 ||
                                 pow_within(pow_within(p, k_eff, (i64)1 << 62), n, opt.cap) < 0))
                --k_eff;
        }
        const DensityValue mu = mu_qp_coprime(q, f, g, p, k_eff, opt);
        pred.product *= mu.value;
        const Rat gp = (Rat(1) - mu.value) * Rat(Int(p) * p);
        if (gp > c_fit) c_fit = gp;
    }
    if (c_fit == 0) return pred; // nothing excluded anywhere: tail is exactly 0

    // sum_{p > p_max} p^{-2} <= (scaled prime sum up to 10^6) + sum_{n > 10^6} n^{-2}
    const i64 kScale = 1000000000000; // 10^12
    const u64 kSieveTo = 1000000;
    Int acc = 0;
    for (i64 p : primes_up_to(kSieveTo))
        if (p > p_max) acc += (kScale + p * p - 1) / (p * p);
    Rat tail_sum = Rat(acc, Int(kScale)) + Rat(1, 1000000);
    pred.tail_bound = c_fit * tail_sum;
    return pred;
}

}  // namespace qsieve
