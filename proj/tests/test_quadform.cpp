#include <doctest.h>

#include <qsieve/errors.hpp>
#include <qsieve/quadform.hpp>

#include <random>
#include <stdexcept>
#include <vector>

using namespace qsieve;

namespace {

std::vector<Int> random_point(std::mt19937& rng, int n, int abs_max) {
    std::uniform_int_distribution<int> d(-abs_max, abs_max);
    std::vector<Int> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = d(rng);
    return x;
}

std::vector<Int> apply_mat(const IMat& T, const std::vector<Int>& x) {
    std::vector<Int> y(static_cast<std::size_t>(T.rows), Int(0));
    for (int i = 0; i < T.rows; ++i)
        for (int j = 0; j < T.cols; ++j) y[static_cast<std::size_t>(i)] += T.at(i, j) * x[static_cast<std::size_t>(j)];
    return y;
}

} // namespace

TEST_CASE("parse round-trip and rejection of non-quadratic input") {
    for (const char* text : {"x0*x1 - x2^2", "x0^2 + 3*x1^2 - 5*x2^2 + x0*x3", "2*x0^2"}) {
        QuadraticForm q = QuadraticForm::parse(text);
        CHECK(QuadraticForm::parse(q.to_string()) == q);
    }
    CHECK_THROWS_AS(QuadraticForm::parse("x0^3"), std::invalid_argument);
    CHECK_THROWS_AS(QuadraticForm::parse("x0*x1*x2"), std::invalid_argument);
    CHECK_THROWS_AS(QuadraticForm::parse("x0^2 + x1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(QuadraticForm::parse("x0^2 + 1"),
                         "quadratic form must be homogeneous of degree 2", std::invalid_argument);
}

TEST_CASE("rank, signature, indefiniteness") {
    QuadraticForm h3 = QuadraticForm::parse("x0*x1 - x2^2");
    CHECK(rank(h3) == 3);
    CHECK(signature(h3) == std::pair<int, int>{1, 2});
    CHECK(is_indefinite(h3));

    QuadraticForm pos = QuadraticForm::parse("x0^2 + x1^2");
    CHECK(rank(pos) == 2);
    CHECK(signature(pos) == std::pair<int, int>{2, 0});
    CHECK(!is_indefinite(pos));

    QuadraticForm degen = QuadraticForm::parse("x0^2", 3);
    CHECK(rank(degen) == 1);
    CHECK(signature(degen) == std::pair<int, int>{1, 0});

    QuadraticForm five = QuadraticForm::parse("x0^2 + x1^2 + x2^2 - x3^2 - 2*x4^2");
    CHECK(rank(five) == 5);
    CHECK(signature(five) == std::pair<int, int>{3, 2});
    CHECK(is_indefinite(five));
}

TEST_CASE("doubled matrix and polynomial evaluation agree") {
    std::mt19937 rng(97);
    QuadraticForm q = QuadraticForm::parse("3*x0^2 - x0*x1 + 2*x1*x2 - x2^2 + 7*x0*x2");
    IMat A = q.doubled_matrix();
    CHECK(A.at(0, 0) == 6);
    CHECK(A.at(0, 1) == -1);
    CHECK(A.at(1, 0) == -1);
    CHECK(A.at(2, 2) == -2);
    IntegerPolynomial f = q.to_polynomial();
    for (int t = 0; t < 30; ++t) {
        auto x = random_point(rng, 3, 20);
        CHECK(q.eval(x) == f.eval(x));
        // 2 Q(x) = x^T A x
        Int xtAx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                xtAx += x[static_cast<std::size_t>(i)] * A.at(i, j) * x[static_cast<std::size_t>(j)];
        CHECK(xtAx == 2 * q.eval(x));
    }
}

TEST_CASE("transformed computes the pullback Q(Ux)") {
    std::mt19937 rng(1234);
    QuadraticForm q = QuadraticForm::parse("x0*x1 + x2^2 - 3*x0*x2");
    IMat U(3, 3);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) U.at(i, j) = d(rng);
    QuadraticForm qt = q.transformed(U);
    for (int t = 0; t < 30; ++t) {
        auto x = random_point(rng, 3, 15);
        CHECK(qt.eval(x) == q.eval(apply_mat(U, x)));
    }
}

TEST_CASE("rebased_to_used drops unused leading variables") {
    QuadraticForm q = QuadraticForm::parse("x1^2 + x2^2 - x3^2");
    CHECK(q.n_vars() == 4);
    QuadraticForm r = q.rebased_to_used();
    CHECK(r.n_vars() == 3);
    CHECK(r == QuadraticForm::parse("x0^2 + x1^2 - x2^2"));

    // untouched when x0 already occurs
    QuadraticForm p = QuadraticForm::parse("x0*x1");
    CHECK(p.rebased_to_used() == p);
}

TEST_CASE("good primes") {
    // det of the doubled matrix for x0^2+x1^2+x2^2-x3^2-x4^2 is -32: every
    // odd prime keeps full rank, 2 is excluded by definition
    QuadraticForm q = QuadraticForm::parse("x0^2 + x1^2 + x2^2 - x3^2 - x4^2");
    CHECK(!is_good_prime(q, 2));
    for (i64 p : {3, 5, 7, 11, 13, 97}) CHECK(is_good_prime(q, p));

    QuadraticForm r = QuadraticForm::parse("x0^2 + 3*x1^2");
    CHECK(!is_good_prime(r, 3)); // rank drops mod 3
    CHECK(is_good_prime(r, 5));
}

TEST_CASE("classify_prime") {
    CHECK(classify_prime(Int(2), 7) == PrimeClass::Split);   // 3^2 = 2 mod 7
    CHECK(classify_prime(Int(2), 3) == PrimeClass::Inert);
    CHECK(classify_prime(Int(2), 5) == PrimeClass::Inert);
    CHECK(classify_prime(Int(2), 2) == PrimeClass::Ramified);
    CHECK(classify_prime(Int(3), 2) == PrimeClass::Ramified); // 2 | 2d always
    CHECK(classify_prime(Int(3), 3) == PrimeClass::Ramified);
    CHECK(classify_prime(Int(3), 11) == PrimeClass::Split);  // 5^2 = 3 mod 11
    CHECK(classify_prime(Int(3), 7) == PrimeClass::Inert);
    CHECK(classify_prime(Int(-1), 5) == PrimeClass::Split);  // 2^2 = -1 mod 5
    CHECK(classify_prime(Int(-1), 7) == PrimeClass::Inert);
    CHECK_THROWS_AS(classify_prime(Int(4), 5), std::invalid_argument);
    CHECK_THROWS_AS(classify_prime(Int(0), 5), std::invalid_argument);
    CHECK(std::string(to_string(PrimeClass::Split)) == "split");
    CHECK(std::string(to_string(PrimeClass::Inert)) == "inert");
    CHECK(std::string(to_string(PrimeClass::Ramified)) == "ramified");
}

TEST_CASE("normalize_to_hyperbolic satisfies Q*(Tx) = N^2 Q(x)") {
    std::mt19937 rng(31337);
    for (const char* text :
         {"x0*x1 - x2^2", "x0^2 + x1^2 - x2^2", "x0*x1 + x2*x3", "x0^2 - 2*x1^2 + x1*x2"}) {
        QuadraticForm q = QuadraticForm::parse(text);
        HyperbolicNormalization hn = normalize_to_hyperbolic(q);
        CHECK(hn.N > 0);
        CHECK(hn.Q0.n_vars() == q.n_vars() - 2);
        QuadraticForm qstar = hyperbolic_from_q0(hn.Q0);
        Int n2 = hn.N * hn.N;
        for (int t = 0; t < 25; ++t) {
            auto x = random_point(rng, q.n_vars(), 10);
            CHECK(qstar.eval(apply_mat(hn.T, x)) == n2 * q.eval(x));
        }
    }

    // already-hyperbolic forms come back untouched
    QuadraticForm h = QuadraticForm::parse("x0*x1 - 2*x2^2 - x2*x3");
    HyperbolicNormalization hn = normalize_to_hyperbolic(h);
    CHECK(hn.N == 1);
    CHECK(hn.Q0 == QuadraticForm::parse("2*x0^2 + x0*x1"));
    for (int i = 0; i < hn.T.rows; ++i)
        for (int j = 0; j < hn.T.cols; ++j) CHECK(hn.T.at(i, j) == (i == j ? 1 : 0));

    CHECK_THROWS_AS(normalize_to_hyperbolic(QuadraticForm::parse("x0^2 + x1^2")), DomainError);
    CHECK_THROWS_WITH_AS(normalize_to_hyperbolic(QuadraticForm::parse("x0^2 + 5*x1^2 + x2^2")),
                         "NotIndefinite: form has no real zeros besides the origin", DomainError);
}

TEST_CASE("hyperbolic shape recognition") {
    QuadraticForm q0;
    CHECK(is_hyperbolic_shape(QuadraticForm::parse("x0*x1 - x2^2"), &q0));
    CHECK(q0 == QuadraticForm::parse("x0^2"));
    CHECK(!is_hyperbolic_shape(QuadraticForm::parse("x0*x1 + x0*x2 - x2^2")));
    CHECK(!is_hyperbolic_shape(QuadraticForm::parse("2*x0*x1 - x2^2")));
    CHECK(!is_hyperbolic_shape(QuadraticForm::parse("x0^2 + x1^2 - x2^2")));

    QuadraticForm built = hyperbolic_from_q0(QuadraticForm::parse("x0^2 + x0*x1"));
    CHECK(built == QuadraticForm::parse("x0*x1 - x2^2 - x2*x3"));
    QuadraticForm back;
    CHECK(is_hyperbolic_shape(built, &back));
    CHECK(back == QuadraticForm::parse("x0^2 + x0*x1"));
}
