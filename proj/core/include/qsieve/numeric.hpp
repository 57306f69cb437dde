#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qsieve {

// Exact arithmetic everywhere a value can outgrow 64 bits; fixed-width
// integers only in kernels where a bound has been established first.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128_t;
using u128 = __uint128_t;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline std::optional<i64> to_i64(const Int& v) {
    static const Int lo = std::numeric_limits<i64>::min();
    static const Int hi = std::numeric_limits<i64>::max();
    if (v < lo || v > hi) return std::nullopt;
    return static_cast<i64>(v);
}

inline Int int_pow(Int base, unsigned e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline i64 ipow64(i64 base, unsigned e) {
    i64 r = 1;
    while (e--) r *= base;
    return r;
}

// Floor square root of a nonnegative __int128.
inline i128 isqrt128(i128 v) {
    if (v < 0) return -1;
    if (v == 0) return 0;
    i128 r = static_cast<i128>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Positive representative of a mod m, m > 0.
inline i64 mod_pos(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mulmod64(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<i128>(a) * b % m);
}

inline i64 powmod64(i64 base, u64 e, i64 m) {
    i64 r = 1 % m;
    base = mod_pos(base, m);
    while (e) {
        if (e & 1) r = mulmod64(r, base, m);
        base = mulmod64(base, base, m);
        e >>= 1;
    }
    return r;
}

// Modular inverse; modulus need not be prime but gcd(a, m) must be 1.
inline i64 invmod64(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = mod_pos(a, m);
    while (a1) {
        i64 q = g / a1;
        g -= q * a1; std::swap(g, a1);
        x -= q * x1; std::swap(x, x1);
    }
    return mod_pos(x, m);
}

// Formats a double with 12 significant digits (the CSV convention).
std::string format_decimal(double v);
std::string format_decimal(const Rat& v);

} // namespace qsieve
