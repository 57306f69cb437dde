#pragma once

#include "qsieve/numeric.hpp"
#include "qsieve/polynomial.hpp"
#include "qsieve/quadform.hpp"

#include <string>
#include <vector>

namespace qsieve {

// How a density value was obtained.
enum class DensityMethod {
    BruteForce,               // exhaustive residue sweep, honest truncation
    SmoothSingularRecursion,  // Hensel smooth/singular split solved exactly
    ClosedForm,               // exact limit from a finite-field point count
};

std::string to_string(DensityMethod m);

struct DensityValue {
    i64 p = 0;
    int k_used = 0;
    DensityMethod method = DensityMethod::BruteForce;
    Rat value;
    bool stabilized = false;  // true only when value equals the analytic limit
};

enum class NuMethod {
    Auto,        // recursion/closed form when the prime is odd and Q is
                 // nonsingular mod p, brute force otherwise
    ForceBrute,  // always sweep residues (for oracle cross-checks)
};

struct DensityOptions {
    NuMethod method = NuMethod::Auto;
    i64 cap = 10000000;  // residue-evaluation budget per call
};

// nu(p^k) = #{x mod p^k : Q(x) = 0 mod p^k}.
Int nu(const QuadraticForm& q, i64 p, int k, const DensityOptions& opt = {});

// nu(p^k; p, a) = #{x mod p^k : Q(x) = 0 mod p^k, x = a mod p}.
Int nu_constrained(const QuadraticForm& q, i64 p, int k, const std::vector<i64>& a,
                   const DensityOptions& opt = {});

// sigma_p = lim_k nu(p^k) p^{-k(n-1)}; exact when the smooth/singular
// recursion applies, truncated at k_max otherwise.
DensityValue sigma_p(const QuadraticForm& q, i64 p, int k_max, const DensityOptions& opt = {});

// The sequence nu(p^k) p^{-k(n-1)} for k = 1..k_max.
std::vector<Rat> sigma_truncations(const QuadraticForm& q, i64 p, int k_max,
                                   const DensityOptions& opt = {});

// mu_{Q,p}(R_{f,g}) = lim_k #{x mod p^k : Q(x) = 0 mod p^k, p does not divide
// gcd(f(x), g(x))} / nu(p^k).  Exact limit (stabilized) when p is odd and Q
// is nonsingular mod p; honest truncation at k_max otherwise.
DensityValue mu_qp_coprime(const QuadraticForm& q, const IntegerPolynomial& f,
                           const IntegerPolynomial& g, i64 p, int k_max,
                           const DensityOptions& opt = {});

// g(q) = prod_{p | q} (1 - mu_{Q,p}) for squarefree q >= 1.
Rat g_weight(const QuadraticForm& q, const IntegerPolynomial& f, const IntegerPolynomial& g,
             i64 q_mod, int k_max, const DensityOptions& opt = {});

struct CoprimePrediction {
    Rat product;     // prod_{p <= p_max} mu_{Q,p}
    Rat tail_bound;  // certified bound on the neglected factors' effect
};

// Truncated Euler product for the coprimality density together with a tail
// bound C * sum_{p > p_max} p^{-2}, C fitted from the computed g(p) values.
CoprimePrediction predicted_coprime_density(const QuadraticForm& q, const IntegerPolynomial& f,
                                            const IntegerPolynomial& g, i64 p_max, int k_max,
                                            const DensityOptions& opt = {});

}  // namespace qsieve
