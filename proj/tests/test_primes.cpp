#include <doctest.h>

#include <qsieve/primes.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

using namespace qsieve;

namespace {

bool trial_is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

TEST_CASE("is_prime64 agrees with trial division") {
    for (u64 n = 0; n <= 3000; ++n) CHECK(is_prime64(n) == trial_is_prime(n));
}

TEST_CASE("is_prime64 on known large values") {
    CHECK(is_prime64((u64(1) << 61) - 1));             // Mersenne prime
    CHECK(is_prime64(2305843009213693951ULL));         // same, spelled out
    CHECK(is_prime64(18446744073709551557ULL));        // largest 64-bit prime
    CHECK(!is_prime64(3215031751ULL));                 // strong pseudoprime to 2,3,5,7
    CHECK(!is_prime64(561));                           // Carmichael
    CHECK(!is_prime64((u64(1) << 62)));
    CHECK(!is_prime64(u64(1) << 63));
}

TEST_CASE("factor64 reassembles and yields prime factors") {
    for (u64 n = 2; n <= 4000; ++n) {
        auto f = factor64(n);
        u64 prod = 1;
        i64 prev = 0;
        for (auto [p, e] : f) {
            CHECK(is_prime64(static_cast<u64>(p)));
            CHECK(p > prev); // sorted, distinct
            prev = p;
            for (int i = 0; i < e; ++i) prod *= static_cast<u64>(p);
        }
        CHECK(prod == n);
    }
    auto big = factor64(1000003ULL * 1000033ULL);
    REQUIRE(big.size() == 2);
    CHECK(big[0].first == 1000003);
    CHECK(big[1].first == 1000033);
}

TEST_CASE("primes_up_to matches a local sieve") {
    const i64 n = 2000;
    std::vector<bool> comp(static_cast<std::size_t>(n + 1), false);
    std::vector<i64> expect;
    for (i64 p = 2; p <= n; ++p) {
        if (comp[static_cast<std::size_t>(p)]) continue;
        expect.push_back(p);
        for (i64 q = p * p; q <= n; q += p) comp[static_cast<std::size_t>(q)] = true;
    }
    CHECK(primes_up_to(n) == expect);
}

TEST_CASE("spf, largest prime factor, omega, squarefree vs factor64") {
    auto spf = spf_table(1500);
    for (i64 n = 2; n <= 1500; ++n) {
        auto f = factor64(static_cast<u64>(n));
        CHECK(spf[static_cast<std::size_t>(n)] == f.front().first);
        i64 biggest = 0;
        int distinct = 0;
        bool sqfree = true;
        for (auto [p, e] : f) {
            biggest = std::max(biggest, p);
            ++distinct;
            if (e > 1) sqfree = false;
        }
        CHECK(largest_prime_factor64(static_cast<u64>(n)) == biggest);
        CHECK(omega64(static_cast<u64>(n)) == distinct);
        CHECK(is_squarefree64(static_cast<u64>(n)) == sqfree);
        CHECK(has_prime_factor_above(static_cast<u64>(n), 10) == (biggest > 10));
    }
}

TEST_CASE("legendre symbol against brute squares") {
    for (i64 p : {3, 5, 7, 11, 13, 17, 19}) {
        std::set<i64> squares;
        for (i64 x = 1; x < p; ++x) squares.insert(x * x % p);
        for (i64 a = 0; a < p; ++a) {
            int expect = a == 0 ? 0 : (squares.count(a) ? 1 : -1);
            CHECK(legendre_symbol(a, p) == expect);
            CHECK(legendre_symbol(a - 5 * p, p) == expect); // negative inputs reduce
        }
    }
}

TEST_CASE("sqrt_mod_p returns the least root exactly on residues") {
    for (i64 p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 41, 97}) {
        for (i64 a = 0; a < p; ++a) {
            auto r = sqrt_mod_p(a, p);
            if (legendre_symbol(a, p) == -1) {
                CHECK(!r.has_value());
            } else {
                REQUIRE(r.has_value());
                CHECK(*r * *r % p == a);
                CHECK((*r <= p - *r || *r == 0)); // least of the two roots
            }
        }
    }
}

TEST_CASE("crt_pair solves both congruences") {
    const std::vector<std::pair<i64, i64>> moduli = {{3, 5}, {4, 9}, {7, 11}, {8, 15}, {1, 6}};
    for (auto [m1, m2] : moduli) {
        for (i64 a1 = 0; a1 < m1; ++a1)
            for (i64 a2 = 0; a2 < m2; ++a2) {
                i64 x = crt_pair(a1, m1, a2, m2);
                CHECK(x >= 0);
                CHECK(x < m1 * m2);
                CHECK(x % m1 == a1);
                CHECK(x % m2 == a2);
            }
    }
}

TEST_CASE("modular helpers") {
    for (i64 p : {3, 5, 17, 101}) {
        for (i64 a = 1; a < p; ++a) {
            i64 inv = invmod64(a, p);
            CHECK(mulmod64(static_cast<u64>(a), static_cast<u64>(inv), static_cast<u64>(p)) == 1);
        }
        CHECK(powmod64(2, static_cast<u64>(p - 1), static_cast<u64>(p)) == 1); // Fermat
    }
    CHECK(mod_pos(-7, 5) == 3);
    CHECK(mod_pos(7, 5) == 2);
    CHECK(mod_pos(-10, 5) == 0);
}
