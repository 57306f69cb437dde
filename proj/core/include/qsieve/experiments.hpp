#pragma once

#include "qsieve/enumerate.hpp"
#include "qsieve/localdensity.hpp"
#include "qsieve/numeric.hpp"
#include "qsieve/polynomial.hpp"
#include "qsieve/quadform.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qsieve {

inline constexpr const char* kQsieveVersion = "0.1.0";

// Shared experiment configuration.  Grids must be nonempty, positive and
// strictly increasing; p_max >= 2, k_max >= 1; threads 0 means "all cores".
struct ExperimentConfig {
    QuadraticForm form;
    std::vector<IntegerPolynomial> polys;
    std::vector<i64> b_grid;
    std::vector<i64> m_grid;
    i64 p_max = 50;
    int k_max = 6;
    u64 seed = 0;
    int threads = 1;
};

// Throws std::invalid_argument when a config invariant fails.
void validate(const ExperimentConfig& cfg);

// One JSON object on a single line, prefixed "# manifest: ".  Keys are
// sorted, values echo the configuration plus the library version, so a run
// is reproducible from its own output header.
std::string manifest_line(const ExperimentConfig& cfg, const std::string& experiment);

struct DensityComparison {
    Rat empirical;         // coprime points / all quadric points in the box
    Rat predicted;         // truncated product of local densities
    Rat tail_bound;        // certified bound on the neglected factors
    Rat fluctuation;       // |empirical(B) - empirical(B + 50)|, observed
    i64 b = 0;
    i64 p_max = 0;
    i64 total_points = 0;
    i64 coprime_points = 0;
    int probe_codim = -1;  // heuristic codimension of Q = f = g = 0, -1 if unavailable
};

// Empirical vs. predicted density of quadric points with gcd(f(x), g(x)) = 1,
// at B = the last entry of cfg.b_grid.  Requires rank >= 5, an indefinite
// form, and exactly two polynomials.
DensityComparison coprime_density_experiment(const ExperimentConfig& cfg);

struct SieveDecayRow {
    SieveReport report;
    double scaled = 0.0;  // sieved * M * log(M) / B^(n-1)
};

struct SieveDecayResult {
    std::vector<SieveDecayRow> rows;  // b_grid x m_grid, M fastest
    int probe_codim = -1;
};

// N(B, M) over the configured grid together with the decay normalization.
SieveDecayResult sieve_decay_experiment(const ExperimentConfig& cfg);

struct Rank4Row {
    SieveReport report;
    i64 oracle_lower = 0;  // points (a, 0, c, 0), gcd(a, c) = 1, lpf(c) > M
};

// The rank-4 form X0 X1 - X2 X3 with family {X1, X2, X3}: the sieve count
// stays of order B^2 because of the explicit point family counted by
// oracle_lower.  Requires theta in (1/2, 3/4]; M = floor(B^theta).
std::vector<Rank4Row> rank4_counterexample(const std::vector<i64>& b_grid, double theta,
                                           int threads = 1);

// Least-squares exponent fit of projective point counts of
// Q = F_1 = ... = F_r = 0 over F_p for each listed prime; returns
// n_vars - 1 - round(e) as the estimated codimension (n_vars if every count
// is zero).  Needs >= 3 good primes, each with p^n_vars <= cap.  Heuristic
// and advisory: callers record the result but never gate on it.
int codim_probe(const QuadraticForm& q, const std::vector<IntegerPolynomial>& family,
                const std::vector<i64>& prime_list, i64 cap = 100000000);

// Exact projective point count used by the probe (exposed for tests).
i64 projective_count_mod_p(const QuadraticForm& q, const std::vector<IntegerPolynomial>& family,
                           i64 p);

// CSV emission.  Every writer prints the manifest comment line first, then a
// header row, then data rows.  Rationals appear as num/den plus a decimal
// column; elapsed columns print 0 unless include_timing is set, keeping
// default output byte-identical across runs.
struct CsvOptions {
    bool include_timing = false;
};

void write_density_csv(std::ostream& os, const DensityComparison& d, const std::string& manifest,
                       const CsvOptions& opt = {});
void write_sieve_decay_csv(std::ostream& os, const SieveDecayResult& r, const std::string& manifest,
                           const CsvOptions& opt = {});
void write_rank4_csv(std::ostream& os, const std::vector<Rank4Row>& rows,
                     const std::string& manifest, const CsvOptions& opt = {});

} // namespace qsieve
