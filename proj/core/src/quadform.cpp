#include "qsieve/quadform.hpp"

#include "qsieve/errors.hpp"
#include "qsieve/primes.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace qsieve {

namespace {

std::vector<Int> mat_vec(const IMat& m, const std::vector<Int>& v) {
    std::vector<Int> out(m.rows, Int(0));
    for (int r = 0; r < m.rows; ++r) {
        Int s = 0;
        for (int c = 0; c < m.cols; ++c) s += m.at(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

Int vec_content(const std::vector<Int>& v) {
    Int g = 0;
    for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
    return g;
}

} // namespace

QuadraticForm QuadraticForm::parse(const std::string& text, int n_vars_min) {
    return from_polynomial(IntegerPolynomial::parse(text, n_vars_min), n_vars_min);
}

QuadraticForm QuadraticForm::from_polynomial(const IntegerPolynomial& p, int n_vars_min) {
    QuadraticForm q(std::max(p.n_vars(), n_vars_min));
    for (const auto& [mono, c] : p.terms()) {
        int i = -1, j = -1;
        int deg = 0;
        for (std::size_t v = 0; v < mono.size(); ++v) {
            for (int rep = 0; rep < mono[v]; ++rep) {
                if (i < 0) {
                    i = static_cast<int>(v);
                } else if (j < 0) {
                    j = static_cast<int>(v);
                } else {
                    throw std::invalid_argument("quadratic form must be homogeneous of degree 2");
                }
            }
            deg += mono[v];
        }
        if (deg != 2)
            throw std::invalid_argument("quadratic form must be homogeneous of degree 2");
        q.set_coeff(i, j, c);
    }
    return q;
}

Int QuadraticForm::coeff(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = coeffs_.find({i, j});
    return it == coeffs_.end() ? Int(0) : it->second;
}

void QuadraticForm::set_coeff(int i, int j, const Int& c) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_) throw std::invalid_argument("coefficient index out of range");
    if (c == 0)
        coeffs_.erase({i, j});
    else
        coeffs_[{i, j}] = c;
}

Int QuadraticForm::eval(const std::vector<Int>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("point dimension mismatch");
    Int s = 0;
    for (const auto& [ij, c] : coeffs_) s += c * x[ij.first] * x[ij.second];
    return s;
}

Int QuadraticForm::eval_i64pt(const std::vector<i64>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("point dimension mismatch");
    Int s = 0;
    for (const auto& [ij, c] : coeffs_) s += c * Int(x[ij.first]) * Int(x[ij.second]);
    return s;
}

IntegerPolynomial QuadraticForm::to_polynomial() const {
    IntegerPolynomial p = IntegerPolynomial::constant(n_, 0);
    for (const auto& [ij, c] : coeffs_) {
        Monomial m(static_cast<std::size_t>(n_), 0);
        m[ij.first] += 1;
        m[ij.second] += 1;
        p.add_term(m, c);
    }
    return p;
}

IMat QuadraticForm::doubled_matrix() const {
    IMat a(n_, n_);
    for (const auto& [ij, c] : coeffs_) {
        auto [i, j] = ij;
        if (i == j) {
            a.at(i, i) = 2 * c;
        } else {
            a.at(i, j) = c;
            a.at(j, i) = c;
        }
    }
    return a;
}

QuadraticForm QuadraticForm::transformed(const IMat& u) const {
    if (u.rows != n_) throw std::invalid_argument("transform row count mismatch");
    IMat a = imat_mul(imat_transpose(u), imat_mul(doubled_matrix(), u));
    QuadraticForm out(u.cols);
    for (int i = 0; i < u.cols; ++i) {
        // Diagonal entries of a pulled-back doubled matrix are 2 Q(u_i).
        out.set_coeff(i, i, a.at(i, i) / 2);
        for (int j = i + 1; j < u.cols; ++j) out.set_coeff(i, j, a.at(i, j));
    }
    return out;
}

QuadraticForm QuadraticForm::rebased_to_used() const {
    if (coeffs_.empty()) return *this;
    int lo = n_, hi = -1;
    for (const auto& [ij, c] : coeffs_) {
        (void)c;
        lo = std::min(lo, ij.first);
        hi = std::max(hi, ij.second);
    }
    QuadraticForm out(hi - lo + 1);
    for (const auto& [ij, c] : coeffs_) out.set_coeff(ij.first - lo, ij.second - lo, c);
    return out;
}

bool QuadraticForm::operator==(const QuadraticForm& o) const {
    return n_ == o.n_ && coeffs_ == o.coeffs_;
}

int rank(const QuadraticForm& q) { return rank_rational(q.doubled_matrix()); }

std::pair<int, int> signature(const QuadraticForm& q) {
    const int n = q.n_vars();
    IMat a = q.doubled_matrix();
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = Rat(a.at(i, j));

    auto swap_sym = [&](int i, int j) {
        g[i].swap(g[j]);
        for (int r = 0; r < n; ++r) std::swap(g[r][i], g[r][j]);
    };
    auto add_sym = [&](int dst, int src, const Rat& f) {
        // row dst += f * row src, then the mirrored column operation
        for (int c = 0; c < n; ++c) g[dst][c] += f * g[src][c];
        for (int r = 0; r < n; ++r) g[r][dst] += f * g[r][src];
    };

    int pos = 0, neg = 0;
    for (int k = 0; k < n; ++k) {
        if (g[k][k] == 0) {
            int pivot = -1;
            for (int l = k + 1; l < n; ++l)
                if (g[l][l] != 0) { pivot = l; break; }
            if (pivot >= 0) {
                swap_sym(k, pivot);
            } else {
                // All remaining diagonal entries vanish; a nonzero off-diagonal
                // pair can be folded onto the diagonal (characteristic zero).
                int bi = -1, bj = -1;
                for (int i = k; i < n && bi < 0; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (g[i][j] != 0) { bi = i; bj = j; break; }
                if (bi < 0) break; // remaining block is identically zero
                add_sym(bi, bj, Rat(1));
                if (bi != k) swap_sym(k, bi);
            }
        }
        if (g[k][k] > 0)
            ++pos;
        else
            ++neg;
        for (int r = k + 1; r < n; ++r) {
            if (g[r][k] == 0) continue;
            add_sym(r, k, -g[r][k] / g[k][k]);
        }
    }
    return {pos, neg};
}

bool is_indefinite(const QuadraticForm& q) {
    auto [pos, neg] = signature(q);
    return pos > 0 && neg > 0;
}

bool is_good_prime(const QuadraticForm& q, i64 p) {
    if (p == 2) return false;
    IMat a = q.doubled_matrix();
    return rank_mod_p(a, p) == rank_rational(a);
}

const char* to_string(PrimeClass c) {
    switch (c) {
        case PrimeClass::Ramified: return "ramified";
        case PrimeClass::Split: return "split";
        case PrimeClass::Inert: return "inert";
    }
    return "?";
}

PrimeClass classify_prime(const Int& d, i64 p) {
    if (d >= 0) {
        Int s = boost::multiprecision::sqrt(d);
        if (s * s == d) throw std::invalid_argument("d must not be a perfect square");
    }
    if (p == 2 || d % p == 0) return PrimeClass::Ramified;
    i64 r = mod_pos(static_cast<i64>(Int(d % p)), p);
    return legendre_symbol(r, p) == 1 ? PrimeClass::Split : PrimeClass::Inert;
}

bool is_hyperbolic_shape(const QuadraticForm& q, QuadraticForm* q0_out) {
    if (q.n_vars() < 2) return false;
    if (q.coeff(0, 1) != 1) return false;
    QuadraticForm q0(q.n_vars() - 2);
    for (const auto& [ij, c] : q.coeffs()) {
        auto [i, j] = ij;
        if (i == 0 && j == 1) continue;
        if (i <= 1 || j <= 1) return false;
        q0.set_coeff(i - 2, j - 2, -c);
    }
    if (q0_out) *q0_out = q0;
    return true;
}

QuadraticForm hyperbolic_from_q0(const QuadraticForm& q0) {
    QuadraticForm q(q0.n_vars() + 2);
    q.set_coeff(0, 1, 1);
    for (const auto& [ij, c] : q0.coeffs()) q.set_coeff(ij.first + 2, ij.second + 2, -c);
    return q;
}

namespace {

// Integral roots t of a t^2 + b t + c = 0 with |t| <= bound, ascending.
std::vector<Int> quadratic_integer_roots(const Int& a, const Int& b, const Int& c, const Int& bound) {
    std::vector<Int> roots;
    if (a == 0) {
        if (b == 0) {
            if (c == 0)
                for (Int t = -bound; t <= bound; ++t) roots.push_back(t);
        } else if (c % b == 0) {
            Int t = -c / b;
            if (abs(t) <= bound) roots.push_back(t);
        }
        return roots;
    }
    Int disc = b * b - 4 * a * c;
    if (disc < 0) return roots;
    Int s = boost::multiprecision::sqrt(disc);
    if (s * s != disc) return roots;
    for (const Int& num : {Int(-b - s), Int(-b + s)}) {
        if (num % (2 * a) != 0) continue;
        Int t = num / (2 * a);
        if (abs(t) <= bound && (roots.empty() || roots.back() != t)) roots.push_back(t);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// First smooth integral zero of q in the ball |x|_inf <= bound, ordered by
// shell radius, then lexicographically over the leading coordinates, then by
// the solved last coordinate.  "Smooth" means the gradient A x is nonzero.
std::vector<Int> find_smooth_zero(const QuadraticForm& q, const IMat& a, i64 bound) {
    const int m = q.n_vars();
    const int last = m - 1;
    for (i64 radius = 1; radius <= bound; ++radius) {
        std::vector<Int> x(static_cast<std::size_t>(m), Int(0));
        std::vector<i64> prefix(static_cast<std::size_t>(last), -radius);
        bool done = false;
        while (!done) {
            i64 pref_norm = 0;
            for (i64 v : prefix) pref_norm = std::max(pref_norm, v < 0 ? -v : v);
            for (int i = 0; i < last; ++i) x[i] = prefix[i];
            // Q(x) = c_ll t^2 + L t + C as a polynomial in the last coordinate.
            Int clast = q.coeff(last, last);
            Int lin = 0;
            for (int i = 0; i < last; ++i) lin += q.coeff(i, last) * x[i];
            x[last] = 0;
            Int cst = q.eval(x);
            for (const Int& t : quadratic_integer_roots(clast, lin, cst, Int(radius))) {
                i64 norm = std::max(pref_norm, static_cast<i64>(abs(t)));
                if (norm != radius) continue; // counted at its own shell
                x[last] = t;
                bool nonzero_grad = false;
                for (int r = 0; r < m && !nonzero_grad; ++r) {
                    Int w = 0;
                    for (int c = 0; c < m; ++c) w += a.at(r, c) * x[c];
                    if (w != 0) nonzero_grad = true;
                }
                if (nonzero_grad) return x;
            }
            // advance the odometer (last index fastest)
            int pos = last - 1;
            while (pos >= 0 && prefix[pos] == radius) prefix[pos--] = -radius;
            if (pos < 0)
                done = true;
            else
                ++prefix[pos];
        }
    }
    throw DomainError("SearchExhausted",
                      "no smooth integral zero with sup norm <= " + std::to_string(bound));
}

} // namespace

HyperbolicNormalization normalize_to_hyperbolic(const QuadraticForm& q, i64 search_bound) {
    const int m = q.n_vars();
    {
        QuadraticForm q0;
        if (is_hyperbolic_shape(q, &q0))
            return {IMat::identity(m), Int(1), q0};
    }
    if (!is_indefinite(q))
        throw DomainError("NotIndefinite", "form has no real zeros besides the origin");
    if (search_bound < 1) throw std::invalid_argument("search bound must be positive");

    IMat a = q.doubled_matrix();
    std::vector<Int> e = find_smooth_zero(q, a, search_bound);
    Int g = vec_content(e);
    if (g > 1)
        for (Int& v : e) v /= g;

    std::vector<Int> w = mat_vec(a, e); // gradient at e, nonzero
    int ui = -1;
    for (int i = 0; i < m; ++i) {
        if (w[i] == 0) continue;
        if (ui < 0 || abs(w[i]) < abs(w[ui])) ui = i;
    }
    Int c = w[ui];
    Int qu = q.coeff(ui, ui);
    // u' = c e_ui - Q(e_ui) e is isotropic and pairs with e to value c^2.
    std::vector<Int> up(static_cast<std::size_t>(m), Int(0));
    for (int i = 0; i < m; ++i) up[i] = -qu * e[i];
    up[ui] += c;
    std::vector<Int> wp = mat_vec(a, up);

    IMat pair_rows(2, m);
    for (int j = 0; j < m; ++j) {
        pair_rows.at(0, j) = w[j];
        pair_rows.at(1, j) = wp[j];
    }
    IMat kern = integer_kernel(pair_rows); // m x (m-2), saturated
    if (kern.cols != m - 2)
        throw std::logic_error("hyperbolic completion: unexpected kernel rank");

    IMat t(m, m);
    for (int j = 0; j < m; ++j) {
        t.at(0, j) = c * wp[j];
        t.at(1, j) = c * w[j];
    }
    if (m > 2) {
        IMat p = left_inverse_primitive(kern); // (m-2) x m
        std::vector<Int> pe = mat_vec(p, e);
        std::vector<Int> pu = mat_vec(p, up);
        Int c2 = c * c;
        for (int r = 0; r < m - 2; ++r)
            for (int j = 0; j < m; ++j)
                t.at(2 + r, j) = c2 * p.at(r, j) - pe[r] * wp[j] - pu[r] * w[j];
    }

    QuadraticForm qv = q.transformed(kern);
    QuadraticForm q0(m - 2);
    for (const auto& [ij, cc] : qv.coeffs()) q0.set_coeff(ij.first, ij.second, -cc);

    Int n_scale = c * c;
    for (;;) {
        Int h = n_scale;
        for (const Int& v : t.a) h = boost::multiprecision::gcd(h, v);
        if (h <= 1) break;
        for (Int& v : t.a) v /= h;
        n_scale /= h;
    }

    if (det_bareiss(t) == 0) throw std::logic_error("hyperbolic completion: singular transform");

    // Spot-check the defining identity Q*(T x) = N^2 Q(x) on a few vectors.
    QuadraticForm qstar = hyperbolic_from_q0(q0);
    Int n2 = n_scale * n_scale;
    std::vector<std::vector<Int>> samples;
    for (int i = 0; i < m; ++i) {
        std::vector<Int> v(static_cast<std::size_t>(m), Int(0));
        v[i] = 1;
        samples.push_back(v);
    }
    samples.emplace_back(static_cast<std::size_t>(m), Int(1));
    {
        std::vector<Int> v(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) v[i] = i + 1;
        samples.push_back(v);
    }
    for (const auto& v : samples) {
        if (qstar.eval(mat_vec(t, v)) != n2 * q.eval(v))
            throw std::logic_error("hyperbolic completion: identity check failed");
    }

    return {std::move(t), std::move(n_scale), std::move(q0)};
}

} // namespace qsieve
