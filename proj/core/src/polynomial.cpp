#include "qsieve/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace qsieve {

namespace {

int monomial_degree(const Monomial& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

Monomial resized(const Monomial& m, int n) {
    Monomial r = m;
    r.resize(static_cast<std::size_t>(n), 0);
    return r;
}

} // namespace

IntegerPolynomial IntegerPolynomial::constant(int n_vars, const Int& c) {
    IntegerPolynomial p(n_vars);
    if (c != 0) p.terms_[Monomial(static_cast<std::size_t>(n_vars), 0)] = c;
    return p;
}

IntegerPolynomial IntegerPolynomial::variable(int n_vars, int index) {
    if (index < 0 || index >= n_vars) throw std::invalid_argument("variable index out of range");
    Monomial m(static_cast<std::size_t>(n_vars), 0);
    m[static_cast<std::size_t>(index)] = 1;
    return monomial(n_vars, m, 1);
}

IntegerPolynomial IntegerPolynomial::monomial(int n_vars, const Monomial& m, const Int& c) {
    IntegerPolynomial p(n_vars);
    if (c != 0) p.terms_[resized(m, n_vars)] = c;
    return p;
}

Int IntegerPolynomial::coeff(const Monomial& m) const {
    auto it = terms_.find(resized(m, n_));
    return it == terms_.end() ? Int(0) : it->second;
}

void IntegerPolynomial::add_term(const Monomial& m, const Int& c) {
    if (c == 0) return;
    Monomial key = resized(m, n_);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

IntegerPolynomial IntegerPolynomial::extended(int n_vars) const {
    if (n_vars < n_) throw std::invalid_argument("extended: cannot shrink variable count");
    IntegerPolynomial p(n_vars);
    for (const auto& [m, c] : terms_) p.terms_[resized(m, n_vars)] = c;
    return p;
}

IntegerPolynomial IntegerPolynomial::operator-() const {
    IntegerPolynomial p(n_);
    for (const auto& [m, c] : terms_) p.terms_[m] = -c;
    return p;
}

IntegerPolynomial IntegerPolynomial::operator+(const IntegerPolynomial& o) const {
    int n = std::max(n_, o.n_);
    IntegerPolynomial r = extended(n);
    for (const auto& [m, c] : o.terms_) r.add_term(resized(m, n), c);
    return r;
}

IntegerPolynomial IntegerPolynomial::operator-(const IntegerPolynomial& o) const {
    return *this + (-o);
}

IntegerPolynomial& IntegerPolynomial::operator+=(const IntegerPolynomial& o) {
    *this = *this + o;
    return *this;
}

IntegerPolynomial IntegerPolynomial::operator*(const IntegerPolynomial& o) const {
    int n = std::max(n_, o.n_);
    IntegerPolynomial r(n);
    for (const auto& [ma, ca] : terms_) {
        Monomial a = resized(ma, n);
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m = a;
            for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

bool IntegerPolynomial::operator==(const IntegerPolynomial& o) const {
    int n = std::max(n_, o.n_);
    return extended(n).terms_ == o.extended(n).terms_;
}

IntegerPolynomial IntegerPolynomial::pow(unsigned e) const {
    IntegerPolynomial r = constant(n_, 1);
    IntegerPolynomial b = *this;
    while (e) {
        if (e & 1) r = r * b;
        if (e >>= 1) b = b * b;
    }
    return r;
}

Int IntegerPolynomial::eval(const std::vector<Int>& x) const {
    if (static_cast<int>(x.size()) < n_) throw std::invalid_argument("eval: point too short");
    Int total = 0;
    for (const auto& [m, c] : terms_) {
        Int t = c;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int e = 0; e < m[i]; ++e) t *= x[i];
        total += t;
    }
    return total;
}

Int IntegerPolynomial::eval_i64pt(const std::vector<i64>& x) const {
    std::vector<Int> xi(x.begin(), x.end());
    return eval(xi);
}

i64 IntegerPolynomial::eval_mod(const std::vector<i64>& x, i64 m) const {
    if (static_cast<int>(x.size()) < n_) throw std::invalid_argument("eval_mod: point too short");
    i64 total = 0;
    for (const auto& [mono, c] : terms_) {
        i64 t = mod_pos(static_cast<i64>(c % m), m);
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] == 0) continue;
            i64 xv = mod_pos(x[i] % m, m);
            t = mulmod64(t, powmod64(xv, static_cast<u64>(mono[i]), m), m);
        }
        total = mod_pos(total + t, m);
    }
    return total;
}

IntegerPolynomial IntegerPolynomial::substituted(int var, const Int& value) const {
    IntegerPolynomial r(n_);
    for (const auto& [m, c] : terms_) {
        Int t = c;
        for (int e = 0; e < m[static_cast<std::size_t>(var)]; ++e) t *= value;
        if (t == 0) continue;
        Monomial key = m;
        key[static_cast<std::size_t>(var)] = 0;
        r.add_term(key, t);
    }
    return r;
}

std::vector<IntegerPolynomial> IntegerPolynomial::coeffs_in(int var) const {
    int d = degree_in(var);
    std::vector<IntegerPolynomial> out(static_cast<std::size_t>(d + 1), IntegerPolynomial(n_));
    for (const auto& [m, c] : terms_) {
        int e = m[static_cast<std::size_t>(var)];
        Monomial key = m;
        key[static_cast<std::size_t>(var)] = 0;
        out[static_cast<std::size_t>(e)].add_term(key, c);
    }
    return out;
}

int IntegerPolynomial::total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
        (void)c;
        d = std::max(d, monomial_degree(m));
    }
    return d;
}

int IntegerPolynomial::degree_in(int var) const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
        (void)c;
        d = std::max(d, static_cast<int>(m[static_cast<std::size_t>(var)]));
    }
    return d;
}

bool IntegerPolynomial::is_homogeneous() const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
        (void)c;
        int md = monomial_degree(m);
        if (d < 0) d = md;
        else if (md != d) return false;
    }
    return true;
}

bool IntegerPolynomial::uses_var(int var) const {
    for (const auto& [m, c] : terms_) {
        (void)c;
        if (m[static_cast<std::size_t>(var)] > 0) return true;
    }
    return false;
}

std::vector<int> IntegerPolynomial::occurring_vars() const {
    std::vector<int> out;
    for (int v = 0; v < n_; ++v)
        if (uses_var(v)) out.push_back(v);
    return out;
}

Int IntegerPolynomial::content() const {
    Int g = 0;
    for (const auto& [m, c] : terms_) {
        (void)m;
        g = boost::multiprecision::gcd(g, abs(c));
        if (g == 1) break;
    }
    return g;
}

Int IntegerPolynomial::max_abs_coeff() const {
    Int h = 0;
    for (const auto& [m, c] : terms_) {
        (void)m;
        Int a = abs(c);
        if (a > h) h = a;
    }
    return h;
}

Int IntegerPolynomial::sup_bound(const std::vector<i64>& box) const {
    Int total = 0;
    for (const auto& [m, c] : terms_) {
        Int t = abs(c);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int e = 0; e < m[i]; ++e) t *= box[i];
        total += t;
    }
    return total;
}

Int IntegerPolynomial::sup_bound_uniform(i64 B) const {
    return sup_bound(std::vector<i64>(static_cast<std::size_t>(n_), B));
}

IntegerPolynomial IntegerPolynomial::divided_by_int(const Int& d) const {
    if (d == 0) throw std::invalid_argument("divided_by_int: zero divisor");
    IntegerPolynomial r(n_);
    for (const auto& [m, c] : terms_) {
        if (c % d != 0) throw std::invalid_argument("divided_by_int: not exact");
        r.terms_[m] = c / d;
    }
    return r;
}

IntegerPolynomial IntegerPolynomial::divided_by_monomial(const Monomial& mm) const {
    Monomial div = resized(mm, n_);
    IntegerPolynomial r(n_);
    for (const auto& [m, c] : terms_) {
        Monomial key = m;
        for (std::size_t i = 0; i < key.size(); ++i) {
            key[i] -= div[i];
            if (key[i] < 0) throw std::invalid_argument("divided_by_monomial: not divisible");
        }
        r.terms_[key] = c;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Serialization

std::string IntegerPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Monomial, Int>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        int da = monomial_degree(a.first), db = monomial_degree(b.first);
        if (da != db) return da > db;
        return a.first > b.first; // lexicographically larger exponent first
    });
    std::string out;
    bool first = true;
    for (const auto& [m, c] : ts) {
        Int a = abs(c);
        bool neg = c < 0;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        std::string vars;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += "x" + std::to_string(i);
            if (m[i] > 1) vars += "^" + std::to_string(m[i]);
        }
        if (vars.empty()) {
            out += a.str();
        } else {
            if (a != 1) out += a.str() + "*";
            out += vars;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parser for the little expression grammar.

namespace {

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;

    explicit Lexer(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char take() {
        char c = peek();
        if (pos < s.size()) ++pos;
        return c;
    }
    Int take_integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("expected integer at position " + std::to_string(start));
        return Int(s.substr(start, pos - start));
    }
};

struct ParsedFactor {
    bool is_var = false;
    int var = 0;
    Int value = 1;
    int exponent = 1;
};

ParsedFactor parse_factor(Lexer& lx) {
    ParsedFactor f;
    char c = lx.peek();
    if (c == 'x' || c == 'X') {
        lx.take();
        Int idx = lx.take_integer();
        if (idx > 31) throw std::invalid_argument("variable index out of range (x0..x31)");
        f.is_var = true;
        f.var = static_cast<int>(idx);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
        f.value = lx.take_integer();
    } else {
        throw std::invalid_argument(std::string("unexpected character '") + c + "' in polynomial");
    }
    if (lx.peek() == '^') {
        lx.take();
        Int e = lx.take_integer();
        if (e > 256) throw std::invalid_argument("exponent too large");
        f.exponent = static_cast<int>(e);
    }
    return f;
}

} // namespace

IntegerPolynomial IntegerPolynomial::parse(const std::string& text, int n_vars_min) {
    Lexer lx(text);
    struct Term {
        Int coeff;
        std::map<int, int> exps;
    };
    std::vector<Term> terms;
    bool expect_term = true;
    int sign = 1;
    if (lx.peek() == '\0') throw std::invalid_argument("empty polynomial text");
    while (lx.peek() != '\0') {
        if (expect_term) {
            char c = lx.peek();
            while (c == '+' || c == '-') {
                lx.take();
                if (c == '-') sign = -sign;
                c = lx.peek();
            }
            Term t;
            t.coeff = sign;
            while (true) {
                ParsedFactor f = parse_factor(lx);
                if (f.is_var) {
                    t.exps[f.var] += f.exponent;
                } else {
                    Int v = 1;
                    for (int i = 0; i < f.exponent; ++i) v *= f.value;
                    t.coeff *= v;
                }
                if (lx.peek() == '*') {
                    lx.take();
                    continue;
                }
                break;
            }
            terms.push_back(std::move(t));
            expect_term = false;
            sign = 1;
        } else {
            char op = lx.take();
            if (op == '+') sign = 1;
            else if (op == '-') sign = -1;
            else throw std::invalid_argument(std::string("expected '+' or '-', got '") + op + "'");
            expect_term = true;
        }
    }
    if (expect_term && !terms.empty())
        throw std::invalid_argument("dangling operator at end of polynomial");
    if (expect_term && terms.empty()) {
        // Leading sign with nothing after it was consumed as an operator; the
        // only way to reach here is text like "-" alone.
        throw std::invalid_argument("empty polynomial text");
    }
    int n = n_vars_min;
    for (const auto& t : terms)
        for (const auto& [v, e] : t.exps) {
            (void)e;
            n = std::max(n, v + 1);
        }
    IntegerPolynomial p(n);
    for (const auto& t : terms) {
        Monomial m(static_cast<std::size_t>(n), 0);
        for (const auto& [v, e] : t.exps) m[static_cast<std::size_t>(v)] = e;
        p.add_term(m, t.coeff);
    }
    return p;
}

} // namespace qsieve
