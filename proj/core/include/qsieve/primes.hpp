#pragma once

#include "qsieve/numeric.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qsieve {

// Deterministic primality for the full 64-bit range (fixed Miller-Rabin
// base set, no probabilistic answers anywhere in the library).
bool is_prime64(u64 n);

// All primes <= n, simple sieve.
std::vector<i64> primes_up_to(i64 n);

// Smallest-prime-factor table for [0, n]; spf[0] = spf[1] = 0.
// Lets us factor any value <= n in O(log n).
std::vector<std::uint32_t> spf_table(std::size_t n);

// Prime factorization of n >= 1 as (prime, exponent) pairs, primes ascending.
// Trial division for small values, Pollard rho + Miller-Rabin above that;
// every reported factor is certified prime.
std::vector<std::pair<i64, int>> factor64(u64 n);

// Largest prime factor of |n|; 1 for n in {-1, 0, 1}
// (0 is treated as having no prime factor here; callers that want the
// "0 is divisible by everything" convention test for 0 themselves).
i64 largest_prime_factor64(u64 n);

// True iff some prime factor of n exceeds m (n >= 1).
bool has_prime_factor_above(u64 n, u64 m);

bool is_squarefree64(u64 n);

// Number of distinct prime factors.
int omega64(u64 n);

// Square root of a mod odd prime p (Tonelli-Shanks); nullopt if a is not a
// residue. Returned root is in [0, p).
std::optional<i64> sqrt_mod_p(i64 a, i64 p);

// x with x = a1 (mod m1), x = a2 (mod m2); moduli must be coprime.
// Result is in [0, m1*m2).
i64 crt_pair(i64 a1, i64 m1, i64 a2, i64 m2);

// Legendre symbol (a/p) for odd prime p: -1, 0, or 1.
int legendre_symbol(i64 a, i64 p);

} // namespace qsieve
