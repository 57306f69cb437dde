#include <doctest.h>

#include <qsieve/polynomial.hpp>

#include <random>
#include <vector>

using namespace qsieve;

namespace {

IntegerPolynomial random_poly(std::mt19937& rng, int n_vars, int max_terms, int max_deg,
                              int coeff_abs) {
    std::uniform_int_distribution<int> nt(1, max_terms);
    std::uniform_int_distribution<int> dg(0, max_deg);
    std::uniform_int_distribution<int> cf(-coeff_abs, coeff_abs);
    IntegerPolynomial f(n_vars);
    int terms = nt(rng);
    for (int t = 0; t < terms; ++t) {
        Monomial m(static_cast<std::size_t>(n_vars), 0);
        for (auto& e : m) e = dg(rng);
        f.add_term(m, Int(cf(rng)));
    }
    return f;
}

std::vector<Int> random_point(std::mt19937& rng, int n, int b) {
    std::uniform_int_distribution<int> d(-b, b);
    std::vector<Int> x;
    for (int i = 0; i < n; ++i) x.push_back(Int(d(rng)));
    return x;
}

// Independent evaluation: no reuse of IntegerPolynomial::eval internals.
Int eval_oracle(const IntegerPolynomial& f, const std::vector<Int>& x) {
    Int total = 0;
    for (const auto& [mono, c] : f.terms()) {
        Int term = c;
        for (std::size_t i = 0; i < mono.size(); ++i)
            for (std::int32_t e = 0; e < mono[i]; ++e) term *= x[i];
        total += term;
    }
    return total;
}

} // namespace

TEST_CASE("parse produces the expected coefficients") {
    IntegerPolynomial f = IntegerPolynomial::parse("x0^2 - 2*x1*x2 + 7");
    CHECK(f.n_vars() == 3);
    CHECK(f.coeff({2, 0, 0}) == 1);
    CHECK(f.coeff({0, 1, 1}) == -2);
    CHECK(f.coeff({0, 0, 0}) == 7);
    CHECK(f.coeff({1, 0, 0}) == 0);

    IntegerPolynomial g = IntegerPolynomial::parse("-x0 + 3", 4);
    CHECK(g.n_vars() == 4); // n_vars_min widens the ambient
    CHECK(g.coeff({1, 0, 0, 0}) == -1);

    CHECK(IntegerPolynomial::parse("0").terms().empty());
    CHECK_THROWS_AS(IntegerPolynomial::parse("x0 + ?"), std::invalid_argument);
    CHECK_THROWS_AS(IntegerPolynomial::parse(""), std::invalid_argument);
}

TEST_CASE("to_string / parse round trip") {
    std::mt19937 rng(321);
    for (int trial = 0; trial < 200; ++trial) {
        IntegerPolynomial f = random_poly(rng, 1 + static_cast<int>(rng() % 4), 5, 3, 9);
        IntegerPolynomial g = IntegerPolynomial::parse(f.to_string(), f.n_vars());
        CHECK(f == g);
    }
    // canonical string for a known polynomial
    IntegerPolynomial f = IntegerPolynomial::parse("x1 + x0^2 - 3");
    CHECK(IntegerPolynomial::parse(f.to_string(), f.n_vars()) == f);
}

TEST_CASE("factories agree with parse") {
    CHECK(IntegerPolynomial::constant(3, Int(5)) == IntegerPolynomial::parse("5", 3));
    CHECK(IntegerPolynomial::variable(3, 1) == IntegerPolynomial::parse("x1", 3));
    Monomial m = {1, 2, 0};
    CHECK(IntegerPolynomial::monomial(3, m, Int(-4)) == IntegerPolynomial::parse("-4*x0*x1^2", 3));
}

TEST_CASE("evaluation matches the independent oracle") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng() % 4);
        IntegerPolynomial f = random_poly(rng, n, 6, 3, 9);
        std::vector<Int> x = random_point(rng, n, 7);
        CHECK(f.eval(x) == eval_oracle(f, x));
        std::vector<i64> xi;
        for (const Int& v : x) xi.push_back(v.convert_to<i64>());
        CHECK(f.eval_i64pt(xi) == eval_oracle(f, x));
    }
}

TEST_CASE("arithmetic respects evaluation") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2;
        IntegerPolynomial f = random_poly(rng, n, 4, 3, 6);
        IntegerPolynomial g = random_poly(rng, n, 4, 3, 6);
        std::vector<Int> x = random_point(rng, n, 5);
        CHECK((f + g).eval(x) == f.eval(x) + g.eval(x));
        CHECK((f - g).eval(x) == f.eval(x) - g.eval(x));
        CHECK((f * g).eval(x) == f.eval(x) * g.eval(x));
        CHECK((f * IntegerPolynomial::constant(n, Int(-3))).eval(x) == f.eval(x) * -3);
    }
}

TEST_CASE("extended pads the ambient without changing values") {
    IntegerPolynomial f = IntegerPolynomial::parse("x0*x1 - 2");
    IntegerPolynomial g = f.extended(5);
    CHECK(g.n_vars() == 5);
    CHECK(g.eval({Int(3), Int(4), Int(9), Int(9), Int(9)}) == f.eval({Int(3), Int(4)}));
    CHECK_THROWS_AS(f.extended(1), std::invalid_argument);
}

TEST_CASE("occurring_vars and coeffs_in rebuild the polynomial") {
    IntegerPolynomial f = IntegerPolynomial::parse("x0^2*x2 + 3*x2^2 - x0 + 5", 3);
    CHECK(f.occurring_vars() == std::vector<int>{0, 2});

    for (int var : {0, 1, 2}) {
        auto cs = f.coeffs_in(var);
        IntegerPolynomial rebuilt(3);
        IntegerPolynomial xv = IntegerPolynomial::variable(3, var);
        IntegerPolynomial pow = IntegerPolynomial::constant(3, 1);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            rebuilt = rebuilt + cs[k] * pow;
            pow = pow * xv;
        }
        CHECK(rebuilt == f);
    }
}

TEST_CASE("sup_bound dominates box values") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        IntegerPolynomial f = random_poly(rng, n, 5, 3, 8);
        std::vector<i64> caps;
        for (int i = 0; i < n; ++i) caps.push_back(1 + static_cast<i64>(rng() % 5));
        Int bound = f.sup_bound(caps);
        Int uniform = f.sup_bound_uniform(caps.empty() ? 1 : caps[0]);
        for (int probe = 0; probe < 20; ++probe) {
            std::vector<Int> x;
            for (int i = 0; i < n; ++i) {
                std::uniform_int_distribution<i64> d(-caps[static_cast<std::size_t>(i)],
                                                     caps[static_cast<std::size_t>(i)]);
                x.push_back(Int(d(rng)));
            }
            CHECK(boost::multiprecision::abs(f.eval(x)) <= bound);
        }
        if (n == 1) CHECK(uniform == bound);
    }
}
