#include "qsieve/primes.hpp"

#include <algorithm>
#include <numeric>

namespace qsieve {

namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod_u64(u64 base, u64 e, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin_witness(u64 n, u64 a) {
    if (a % n == 0) return false;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    u64 x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

u64 pollard_rho(u64 n) {
    // n odd composite, not a prime power of interest; classic Brent variant.
    if (n % 2 == 0) return 2;
    u64 x = 2, y = 2, d = 1, c = 1;
    auto f = [&](u64 v) { return (mulmod_u64(v, v, n) + c) % n; };
    while (d == 1 || d == n) {
        if (d == n) { ++c; x = y = 2; }
        x = f(x);
        y = f(f(y));
        u64 diff = x > y ? x - y : y - x;
        d = std::gcd(diff, n);
        if (diff == 0) { ++c; x = y = 2; d = 1; }
    }
    return d;
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime64(n)) { out.push_back(n); return; }
    u64 d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

bool is_prime64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // This base set is deterministic for every n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (miller_rabin_witness(n, a)) return false;
    }
    return true;
}

std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    for (i64 i = 2; i <= n; ++i) {
        if (!comp[static_cast<std::size_t>(i)]) {
            out.push_back(i);
            for (i64 j = i * i; j <= n; j += i) comp[static_cast<std::size_t>(j)] = true;
        }
    }
    return out;
}

std::vector<std::uint32_t> spf_table(std::size_t n) {
    std::vector<std::uint32_t> spf(n + 1, 0);
    for (std::size_t i = 2; i <= n; ++i) {
        if (spf[i] == 0) {
            for (std::size_t j = i; j <= n; j += i) {
                if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
            }
        }
    }
    return spf;
}

std::vector<std::pair<i64, int>> factor64(u64 n) {
    std::vector<std::pair<i64, int>> out;
    if (n <= 1) return out;
    std::vector<u64> primes;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        while (n % p == 0) { primes.push_back(p); n /= p; }
    }
    if (n > 1) factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    for (u64 p : primes) {
        if (!out.empty() && out.back().first == static_cast<i64>(p)) {
            ++out.back().second;
        } else {
            out.emplace_back(static_cast<i64>(p), 1);
        }
    }
    return out;
}

i64 largest_prime_factor64(u64 n) {
    auto f = factor64(n);
    return f.empty() ? 1 : f.back().first;
}

bool has_prime_factor_above(u64 n, u64 m) {
    if (n <= 1) return false;
    // Cheap exits before full factorization.
    if (n > m && is_prime64(n)) return true;
    return static_cast<u64>(largest_prime_factor64(n)) > m;
}

bool is_squarefree64(u64 n) {
    if (n == 0) return false;
    for (auto& [p, e] : factor64(n)) {
        (void)p;
        if (e > 1) return false;
    }
    return true;
}

int omega64(u64 n) { return static_cast<int>(factor64(n).size()); }

int legendre_symbol(i64 a, i64 p) {
    a = mod_pos(a, p);
    if (a == 0) return 0;
    i64 r = powmod64(a, static_cast<u64>((p - 1) / 2), p);
    return r == 1 ? 1 : -1;
}

std::optional<i64> sqrt_mod_p(i64 a, i64 p) {
    a = mod_pos(a, p);
    if (p == 2) return a;
    if (a == 0) return 0;
    if (legendre_symbol(a, p) != 1) return std::nullopt;
    if (p % 4 == 3) {
        i64 r = powmod64(a, static_cast<u64>((p + 1) / 4), p);
        return std::min(r, p - r);
    }
    // Tonelli-Shanks.
    i64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    i64 z = 2;
    while (legendre_symbol(z, p) != -1) ++z;
    i64 m = s;
    i64 c = powmod64(z, static_cast<u64>(q), p);
    i64 t = powmod64(a, static_cast<u64>(q), p);
    i64 r = powmod64(a, static_cast<u64>((q + 1) / 2), p);
    while (t != 1) {
        i64 t2 = t;
        i64 i = 0;
        while (t2 != 1) { t2 = mulmod64(t2, t2, p); ++i; }
        i64 b = c;
        for (i64 j = 0; j < m - i - 1; ++j) b = mulmod64(b, b, p);
        m = i;
        c = mulmod64(b, b, p);
        t = mulmod64(t, c, p);
        r = mulmod64(r, b, p);
    }
    return std::min(r, p - r);
}

i64 crt_pair(i64 a1, i64 m1, i64 a2, i64 m2) {
    // x = a1 + m1 * k, k = (a2 - a1) / m1 mod m2.
    i64 k = mulmod64(mod_pos(a2 - a1, m2), invmod64(m1 % m2, m2), m2);
    return mod_pos(a1 + m1 * k, m1 * m2);
}

} // namespace qsieve
