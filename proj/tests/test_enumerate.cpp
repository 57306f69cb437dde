#include <doctest.h>

#include <qsieve/enumerate.hpp>
#include <qsieve/errors.hpp>
#include <qsieve/primes.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

using namespace qsieve;

namespace {

using PointSet = std::set<std::vector<i64>>;

// Plain box sweep; the reference answer for every enumeration routine here.
PointSet brute_zeros(const QuadraticForm& q, i64 B) {
    PointSet out;
    const int n = q.n_vars();
    std::vector<i64> x(static_cast<std::size_t>(n), -B);
    for (;;) {
        if (q.eval_i64pt(x) == 0) out.insert(x);
        int pos = n - 1;
        while (pos >= 0 && x[static_cast<std::size_t>(pos)] == B) x[static_cast<std::size_t>(pos--)] = -B;
        if (pos < 0) break;
        ++x[static_cast<std::size_t>(pos)];
    }
    return out;
}

Int family_gcd(const std::vector<IntegerPolynomial>& family, const std::vector<i64>& x, int n) {
    std::vector<Int> xi(x.begin(), x.end());
    Int g = 0;
    for (const auto& f : family) g = boost::multiprecision::gcd(g, f.extended(n).eval(xi));
    return boost::multiprecision::abs(g);
}

bool oracle_survives(const Int& g, i64 M) {
    if (g == 0) return true; // every prime divides zero
    return has_prime_factor_above(g.convert_to<u64>(), static_cast<u64>(M));
}

} // namespace

TEST_CASE("quadric stream equals the brute box sweep, without duplicates") {
    for (const char* text : {"x0*x1 - x2^2", "x0*x1 - x2^2 - x3^2", "x0*x1 + 2*x2^2 - x2*x3",
                             "x0*x1", "x0*x1 - 3*x2^2"}) {
        QuadraticForm qstar = QuadraticForm::parse(text);
        for (i64 B : {0, 1, 2, 5, 9}) {
            if (qstar.n_vars() >= 4 && B > 5) continue; // keep the 4-var brute sweep small
            PointSet seen;
            bool dup = false;
            for_each_quadric_point(qstar, B, [&](const std::vector<i64>& x) {
                if (!seen.insert(x).second) dup = true;
            });
            CHECK(!dup);
            CHECK(seen == brute_zeros(qstar, B));
            CHECK(count_quadric_points(qstar, B) == static_cast<i64>(seen.size()));
        }
    }
}

TEST_CASE("frozen point counts") {
    QuadraticForm h3 = QuadraticForm::parse("x0*x1 - x2^2");
    CHECK(count_quadric_points(h3, 0) == 1);
    CHECK(count_quadric_points(h3, 2) == 17);
    CHECK(count_quadric_points(h3, 5) == 49);
    CHECK(count_quadric_points(h3, 9) == 105);
    CHECK(count_quadric_points(QuadraticForm::parse("x0*x1 - x2*x3"), 4) == 545);
}

TEST_CASE("documented visit order for B = 2") {
    std::vector<std::vector<i64>> order;
    for_each_quadric_point(QuadraticForm::parse("x0*x1 - x2^2"), 2,
                           [&](const std::vector<i64>& x) { order.push_back(x); });
    const std::vector<std::vector<i64>> expected = {
        {2, 2, -2},  {-2, -2, -2},                            // x2 = -2, t = 4
        {1, 1, -1},  {-1, -1, -1},                            // x2 = -1, t = 1
        {0, -2, 0},  {0, -1, 0},  {0, 0, 0}, {0, 1, 0}, {0, 2, 0}, // x0 = 0 line
        {-2, 0, 0},  {-1, 0, 0},  {1, 0, 0}, {2, 0, 0},            // x1 = 0 line
        {1, 1, 1},   {-1, -1, 1},                             // x2 = 1
        {2, 2, 2},   {-2, -2, 2},                             // x2 = 2
    };
    CHECK(order == expected);
}

TEST_CASE("x2 range split partitions the stream") {
    QuadraticForm qstar = QuadraticForm::parse("x0*x1 - x2^2 - x3^2");
    const i64 B = 4;
    PointSet whole;
    for_each_quadric_point(qstar, B, [&](const std::vector<i64>& x) { whole.insert(x); });
    PointSet pieces;
    i64 overlap = 0;
    for (auto [lo, hi] : std::vector<std::pair<i64, i64>>{{-4, -2}, {-1, 1}, {2, 4}}) {
        for_each_quadric_point(
            qstar, B, [&](const std::vector<i64>& x) { if (!pieces.insert(x).second) ++overlap; },
            lo, hi);
    }
    CHECK(overlap == 0);
    CHECK(pieces == whole);
}

TEST_CASE("quadric stream input validation") {
    auto nop = [](const std::vector<i64>&) {};
    CHECK_THROWS_AS(for_each_quadric_point(QuadraticForm::parse("x0^2 + x1^2 - x2^2"), 3, nop),
                    std::invalid_argument);
    CHECK_THROWS_AS(for_each_quadric_point(QuadraticForm::parse("x0*x1 - x2^2"), -1, nop),
                    std::invalid_argument);
    CHECK_THROWS_AS(for_each_quadric_point(QuadraticForm::parse("x0*x1 - x2^2"), i64(1) << 32, nop),
                    std::invalid_argument);
}

TEST_CASE("congruence sweep equals the brute filtered sweep") {
    struct Case {
        const char* text;
        i64 B, qmod;
        std::vector<i64> a;
    };
    for (const Case& c : {Case{"x0^2 + x1^2 - x2^2", 7, 3, {1, 2, 0}},
                          Case{"x0^2 + x1^2 - x2^2", 7, 1, {0, 0, 0}},
                          Case{"x0*x1", 6, 2, {0, 1}},
                          Case{"x0*x1 - x2^2", 5, 4, {1, 1, 3}},
                          Case{"x0^2 - 2*x1^2", 9, 1, {0, 0}}}) {
        QuadraticForm q = QuadraticForm::parse(c.text);
        PointSet expected;
        for (const auto& x : brute_zeros(q, c.B)) {
            bool match = true;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (mod_pos(x[i] - c.a[i], c.qmod) != 0) match = false;
            if (match) expected.insert(x);
        }
        PointSet seen;
        bool dup = false;
        for_each_quadric_point_congruence(q, c.B, c.qmod, c.a, [&](const std::vector<i64>& x) {
            if (!seen.insert(x).second) dup = true;
        });
        CHECK(!dup);
        CHECK(seen == expected);
        CHECK(count_points_congruence(q, c.B, c.qmod, c.a) == static_cast<i64>(expected.size()));
    }
    auto nop = [](const std::vector<i64>&) {};
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2");
    CHECK_THROWS_AS(for_each_quadric_point_congruence(q, 5, 0, {0, 0, 0}, nop),
                    std::invalid_argument);
    CHECK_THROWS_AS(for_each_quadric_point_congruence(q, 5, 2, {0, 0}, nop),
                    std::invalid_argument);
    // a residue class that misses the box entirely
    i64 hits = 0;
    for_each_quadric_point_congruence(q, 2, 10, {5, 0, 0}, [&](const std::vector<i64>&) { ++hits; });
    CHECK(hits == 0);
}

TEST_CASE("collect_quadric_points materializes the visitor stream") {
    QuadraticForm qstar = QuadraticForm::parse("x0*x1 - x2^2");
    std::vector<std::vector<i64>> streamed;
    for_each_quadric_point(qstar, 6, [&](const std::vector<i64>& x) { streamed.push_back(x); });
    CHECK(collect_quadric_points(qstar, 6) == streamed);
}

TEST_CASE("sieve_count agrees with the gcd oracle on both code paths") {
    struct Case {
        const char* text;
        std::vector<const char*> fam;
        i64 B;
    };
    for (const Case& c :
         {Case{"x0*x1 - x2^2 - x3^2", {"x0 + x1", "x2 - x3"}, 6},       // hyperbolic fast path
          Case{"x0^2 + x1^2 - 2*x2^2", {"x0 + x1 + x2", "x0*x2 - x1^2"}, 8}, // congruence fallback
          Case{"x0*x1 - x2^2", {"x2"}, 9}}) {
        QuadraticForm q = QuadraticForm::parse(c.text);
        std::vector<IntegerPolynomial> family;
        for (const char* f : c.fam) family.push_back(IntegerPolynomial::parse(f, q.n_vars()));
        for (i64 M : {1, 2, 3, 5}) {
            SieveReport r = sieve_count(q, family, c.B, M);
            i64 total = 0, sieved = 0, zl = 0;
            for (const auto& x : brute_zeros(q, c.B)) {
                ++total;
                Int g = family_gcd(family, x, q.n_vars());
                if (g == 0) ++zl;
                if (oracle_survives(g, M)) ++sieved;
            }
            CHECK(r.b == c.B);
            CHECK(r.m == M);
            CHECK(r.total_points == total);
            CHECK(r.sieved_points == sieved);
            CHECK(r.zero_locus_points == zl);

            // identical counts regardless of thread count
            SieveReport r3 = sieve_count(q, family, c.B, M, 3);
            CHECK(r3.total_points == r.total_points);
            CHECK(r3.sieved_points == r.sieved_points);
            CHECK(r3.zero_locus_points == r.zero_locus_points);
        }
    }
}

TEST_CASE("five-variable totals against the box oracle") {
    QuadraticForm q = QuadraticForm::parse("x0^2 + x1^2 + x2^2 - x3^2 - x4^2");
    std::vector<IntegerPolynomial> family = {IntegerPolynomial::parse("x0 + x1", 5)};
    SieveReport r = sieve_count(q, family, 9, 2);
    auto zeros = brute_zeros(q, 9);
    CHECK(r.total_points == static_cast<i64>(zeros.size()));
    i64 sieved = 0;
    for (const auto& x : zeros)
        if (oracle_survives(family_gcd(family, x, 5), 2)) ++sieved;
    CHECK(r.sieved_points == sieved);
}

TEST_CASE("sieve_count_grid equals one sieve_count per threshold") {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2 - 2*x3^2");
    std::vector<IntegerPolynomial> family = {IntegerPolynomial::parse("x0 - x1", 4),
                                             IntegerPolynomial::parse("x2 + x3", 4)};
    std::vector<i64> m_grid = {2, 3, 5, 7};
    auto rows = sieve_count_grid(q, family, 6, m_grid);
    REQUIRE(rows.size() == m_grid.size());
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        SieveReport one = sieve_count(q, family, 6, m_grid[i]);
        CHECK(rows[i].m == m_grid[i]);
        CHECK(rows[i].total_points == one.total_points);
        CHECK(rows[i].sieved_points == one.sieved_points);
        CHECK(rows[i].zero_locus_points == one.zero_locus_points);
    }
}

TEST_CASE("affine_sieve_count over a lopsided box") {
    std::vector<IntegerPolynomial> family = {IntegerPolynomial::parse("x0", 2),
                                             IntegerPolynomial::parse("x1", 2)};
    Box box({20.0, 12.5});
    SieveReport r = affine_sieve_count(family, box, 3);
    i64 total = 0, sieved = 0;
    for (i64 x0 = -20; x0 <= 20; ++x0)
        for (i64 x1 = -12; x1 <= 12; ++x1) {
            ++total;
            Int g = family_gcd(family, {x0, x1}, 2);
            if (oracle_survives(g, 3)) ++sieved;
        }
    CHECK(r.total_points == total);
    CHECK(r.sieved_points == sieved);
    CHECK(r.zero_locus_points == 1); // only the origin kills both coordinates

    SieveReport r2 = affine_sieve_count(family, box, 3, 2);
    CHECK(r2.sieved_points == r.sieved_points);
}

TEST_CASE("Box") {
    Box b = Box::uniform(3, 4.5);
    CHECK(b.dims() == 3);
    CHECK(b.b_min() == doctest::Approx(4.5));
    CHECK(b.volume() == doctest::Approx(4.5 * 4.5 * 4.5));
    CHECK(b.axis_floor(0) == 4);
    Box lop({2.0, 8.0});
    CHECK(lop.volume() == doctest::Approx(16.0));
    CHECK(lop.b_min() == doctest::Approx(2.0));
    CHECK_THROWS_AS(Box(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(Box({3.0, 0.5}), std::invalid_argument);
}

TEST_CASE("strong approximation search") {
    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2^2");
    std::vector<IntegerPolynomial> fam_x0 = {IntegerPolynomial::parse("x0", 3)};

    auto hit = strong_approx_search(q, fam_x0, {1, 4, 2}, 3, {3}, 30);
    REQUIRE(hit.has_value());
    const auto& x = *hit;
    // postconditions, re-verified from scratch
    CHECK(q.eval_i64pt(x) == 0);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(mod_pos(x[i] - std::vector<i64>{1, 4, 2}[i], 3) == 0);
    Int g = family_gcd(fam_x0, x, 3);
    CHECK(g != 0);
    Int reduced = g;
    while (reduced % 3 == 0) reduced /= 3;
    CHECK(reduced == 1);

    // the returned point is the first admissible one in sweep order
    std::optional<std::vector<i64>> first;
    for_each_quadric_point_congruence(q, 30, 3, {1, 4, 2}, [&](const std::vector<i64>& y) {
        if (first) return;
        bool zero = std::all_of(y.begin(), y.end(), [](i64 v) { return v == 0; });
        if (zero) return;
        Int gy = family_gcd(fam_x0, y, 3);
        if (gy == 0) return;
        while (gy % 3 == 0) gy /= 3;
        if (gy == 1) first = y;
    });
    CHECK(first == hit);

    // gcd == 0 and the zero vector never qualify: this family is 0 on the
    // whole quadric, so nothing is found even though points abound
    std::vector<IntegerPolynomial> fam_zero = {IntegerPolynomial::parse("x0*x1 - x2^2", 3)};
    CHECK(!strong_approx_search(q, fam_zero, {0, 0, 0}, 1, {}, 6).has_value());

    // a family with all values even and S = {} can never reach gcd 1
    std::vector<IntegerPolynomial> fam_even = {IntegerPolynomial::parse("2*x0", 3),
                                               IntegerPolynomial::parse("2*x1", 3),
                                               IntegerPolynomial::parse("2*x2", 3)};
    CHECK(!strong_approx_search(q, fam_even, {0, 0, 0}, 1, {}, 5).has_value());

    CHECK_THROWS_AS(strong_approx_search(q, fam_x0, {1, 1, 0}, 3, {3}, 10), DomainError);
    CHECK_THROWS_AS(strong_approx_search(q, fam_x0, {0, 0, 0}, 0, {}, 10), std::invalid_argument);
    CHECK_THROWS_AS(strong_approx_search(q, fam_x0, {0, 0, 0}, 6, {2}, 10), std::invalid_argument);
    CHECK_THROWS_AS(strong_approx_search(q, fam_x0, {0, 0}, 3, {3}, 10), std::invalid_argument);
}
