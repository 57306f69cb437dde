#include "qsieve/experiments.hpp"

#include "qsieve/errors.hpp"
#include "qsieve/parallel.hpp"
#include "qsieve/primes.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsieve {

namespace {

void check_grid(const std::vector<i64>& grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(std::string(name) + " grid must be nonempty");
    i64 prev = 0;
    for (i64 v : grid) {
        if (v < 1) throw std::invalid_argument(std::string(name) + " grid entries must be positive");
        if (v <= prev) throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
        prev = v;
    }
}

std::vector<IntegerPolynomial> extend_family(const std::vector<IntegerPolynomial>& polys, int n) {
    std::vector<IntegerPolynomial> out;
    out.reserve(polys.size());
    for (const auto& f : polys) {
        if (f.n_vars() > n)
            throw std::invalid_argument("polynomial uses more variables than the form");
        out.push_back(f.extended(n));
    }
    return out;
}

struct CoprimeCensus {
    i64 total = 0;
    i64 coprime = 0;
};

// Counts quadric points in [-B, B]^n and the subset with gcd(f, g) = 1.
// Hyperbolic-shape forms take the divisor sweep (split across threads on the
// first prefix coordinate); anything else falls back to the exact congruence
// sweep with modulus 1.
CoprimeCensus coprime_census(const QuadraticForm& q, const IntegerPolynomial& f,
                             const IntegerPolynomial& g, i64 B, int threads) {
    CoprimeCensus init;
    auto tally = [&](CoprimeCensus& c, const std::vector<i64>& x) {
        ++c.total;
        Int vf = f.eval_i64pt(x);
        Int vg = g.eval_i64pt(x);
        if (boost::multiprecision::gcd(vf, vg) == 1) ++c.coprime;
    };
    QuadraticForm q0;
    if (is_hyperbolic_shape(q, &q0)) {
        return parallel_reduce(
            -B, B + 1, threads, init,
            [&](i64 lo, i64 hi) {
                CoprimeCensus part;
                for_each_quadric_point(q, B, [&](const std::vector<i64>& x) { tally(part, x); },
                                       lo, hi - 1);
                return part;
            },
            [](CoprimeCensus& acc, const CoprimeCensus& part) {
                acc.total += part.total;
                acc.coprime += part.coprime;
            });
    }
    std::vector<i64> zero(static_cast<std::size_t>(q.n_vars()), 0);
    for_each_quadric_point_congruence(q, B, 1, zero,
                                      [&](const std::vector<i64>& x) { tally(init, x); });
    return init;
}

// First three good primes (from 5 upward) small enough for the probe; the
// probe stays advisory, so any failure maps to "unavailable".
int try_probe(const QuadraticForm& q, const std::vector<IntegerPolynomial>& polys) {
    const i64 kProbeCap = 20000000;
    std::vector<i64> picked;
    for (i64 p : {5, 7, 11, 13, 17, 19, 23, 29, 31}) {
        if (!is_good_prime(q, p)) continue;
        picked.push_back(p);
        if (picked.size() == 3) break;
    }
    if (picked.size() < 3) return -1;
    try {
        return codim_probe(q, polys, picked, kProbeCap);
    } catch (const std::exception&) {
        return -1;
    }
}

std::string rat_pair(const Rat& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

std::string elapsed_field(double seconds, const CsvOptions& opt) {
    return opt.include_timing ? format_decimal(seconds) : std::string("0");
}

} // namespace

void validate(const ExperimentConfig& cfg) {
    check_grid(cfg.b_grid, "b");
    check_grid(cfg.m_grid, "m");
    if (cfg.p_max < 2) throw std::invalid_argument("p_max must be at least 2");
    if (cfg.k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    if (cfg.threads < 0) throw std::invalid_argument("threads must be nonnegative");
}

std::string manifest_line(const ExperimentConfig& cfg, const std::string& experiment) {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["form"] = cfg.form.to_string();
    auto polys = nlohmann::json::array();
    for (const auto& f : cfg.polys) polys.push_back(f.to_string());
    j["polys"] = polys;
    j["b_grid"] = cfg.b_grid;
    j["m_grid"] = cfg.m_grid;
    j["p_max"] = cfg.p_max;
    j["k_max"] = cfg.k_max;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["version"] = kQsieveVersion;
    return "# manifest: " + j.dump();
}

DensityComparison coprime_density_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    if (cfg.polys.size() != 2)
        throw std::invalid_argument("coprime density experiment needs exactly two polynomials");
    if (rank(cfg.form) < 5)
        throw DomainError("RankTooSmall", "coprime density experiment needs rank >= 5");
    if (!is_indefinite(cfg.form))
        throw DomainError("NotIndefinite", "coprime density experiment needs an indefinite form");

    const int n = cfg.form.n_vars();
    auto fam = extend_family(cfg.polys, n);
    const IntegerPolynomial& f = fam[0];
    const IntegerPolynomial& g = fam[1];

    DensityComparison out;
    out.b = cfg.b_grid.back();
    out.p_max = cfg.p_max;

    CoprimeCensus at_b = coprime_census(cfg.form, f, g, out.b, cfg.threads);
    CoprimeCensus at_b2 = coprime_census(cfg.form, f, g, out.b + 50, cfg.threads);
    out.total_points = at_b.total;
    out.coprime_points = at_b.coprime;
    out.empirical = Rat(Int(at_b.coprime), Int(at_b.total));
    Rat emp2 = Rat(Int(at_b2.coprime), Int(at_b2.total));
    out.fluctuation = boost::multiprecision::abs(out.empirical - emp2);

    DensityOptions opt;
    CoprimePrediction pred = predicted_coprime_density(cfg.form, f, g, cfg.p_max, cfg.k_max, opt);
    out.predicted = pred.product;
    out.tail_bound = pred.tail_bound;
    out.probe_codim = try_probe(cfg.form, cfg.polys);

    if (out.empirical < 0 || out.empirical > 1 || out.predicted < 0 || out.predicted > 1)
        throw std::logic_error("density outside [0, 1]");
    return out;
}

SieveDecayResult sieve_decay_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    if (cfg.polys.empty()) throw std::invalid_argument("sieve decay needs a nonempty family");
    const int n = cfg.form.n_vars();
    auto fam = extend_family(cfg.polys, n);

    SieveDecayResult out;
    out.probe_codim = try_probe(cfg.form, cfg.polys);
    for (i64 b : cfg.b_grid) {
        std::vector<SieveReport> reports = sieve_count_grid(cfg.form, fam, b, cfg.m_grid, cfg.threads);
        for (const SieveReport& rep : reports) {
            SieveDecayRow row;
            row.report = rep;
            if (rep.m >= 2)
                row.scaled = static_cast<double>(rep.sieved_points) * static_cast<double>(rep.m) *
                             std::log(static_cast<double>(rep.m)) /
                             std::pow(static_cast<double>(b), n - 1);
            out.rows.push_back(row);
        }
    }
    return out;
}

std::vector<Rank4Row> rank4_counterexample(const std::vector<i64>& b_grid, double theta,
                                           int threads) {
    if (!(theta > 0.5 && theta <= 0.75))
        throw DomainError("BadExponent", "theta must lie in (1/2, 3/4]");
    check_grid(b_grid, "b");

    QuadraticForm q = QuadraticForm::parse("x0*x1 - x2*x3", 4);
    std::vector<IntegerPolynomial> family = {IntegerPolynomial::variable(4, 1),
                                             IntegerPolynomial::variable(4, 2),
                                             IntegerPolynomial::variable(4, 3)};

    std::vector<Rank4Row> rows;
    for (i64 b : b_grid) {
        i64 m = static_cast<i64>(std::pow(static_cast<double>(b), theta) + 1e-9);
        if (m < 1) m = 1;
        Rank4Row row;
        row.report = sieve_count(q, family, b, m, threads);

        // Lower bound: distinct points (a, 0, c, 0) with 0 < |c| <= B having a
        // prime factor > M and gcd(a, c) = 1, |a| <= B.  Counting over c with
        // a Mobius sum avoids double-listing c = b p for several primes p.
        i64 oracle = 0;
        for (i64 c = 1; c <= b; ++c) {
            auto factors = factor64(static_cast<u64>(c));
            i64 biggest = 0;
            for (const auto& [p, e] : factors) biggest = std::max(biggest, p);
            if (biggest <= m) continue;
            const int r = static_cast<int>(factors.size());
            i64 cnt = 0;
            for (int mask = 0; mask < (1 << r); ++mask) {
                i64 d = 1;
                int bits = 0;
                for (int i = 0; i < r; ++i)
                    if (mask & (1 << i)) {
                        d *= factors[static_cast<std::size_t>(i)].first;
                        ++bits;
                    }
                i64 term = 2 * (b / d) + 1;
                cnt += (bits % 2 == 0) ? term : -term;
            }
            oracle += cnt;
        }
        row.oracle_lower = 2 * oracle;

        if (row.report.sieved_points < row.oracle_lower)
            throw std::logic_error("sieve count fell below the explicit-family lower bound");
        rows.push_back(row);
    }
    return rows;
}

i64 projective_count_mod_p(const QuadraticForm& q, const std::vector<IntegerPolynomial>& family,
                           i64 p) {
    if (p < 2 || !is_prime64(static_cast<u64>(p))) throw std::invalid_argument("p must be prime");
    const int n = q.n_vars();
    if (n < 1) throw std::invalid_argument("form must have at least one variable");
    auto fam = extend_family(family, n);

    // i64-reduced views: the quadratic form as (i, j, c) triples, each family
    // member as (exponents, c) terms, all coefficients in [0, p).
    struct QTerm {
        int i, j;
        i64 c;
    };
    std::vector<QTerm> qterms;
    for (const auto& [ij, c] : q.coeffs()) {
        i64 r = static_cast<i64>(c % p);
        if (r < 0) r += p;
        if (r != 0) qterms.push_back({ij.first, ij.second, r});
    }
    struct PTerm {
        const Monomial* m;
        i64 c;
    };
    std::vector<std::vector<PTerm>> pterms(fam.size());
    for (std::size_t t = 0; t < fam.size(); ++t)
        for (const auto& [mono, c] : fam[t].terms()) {
            i64 r = static_cast<i64>(c % p);
            if (r < 0) r += p;
            if (r != 0) pterms[t].push_back({&mono, r});
        }

    std::vector<i64> x(static_cast<std::size_t>(n), 0);
    auto vanishes = [&]() {
        i64 qv = 0;
        for (const QTerm& t : qterms)
            qv = (qv + t.c * x[static_cast<std::size_t>(t.i)] % p * x[static_cast<std::size_t>(t.j)]) % p;
        if (qv != 0) return false;
        for (const auto& terms : pterms) {
            i64 v = 0;
            for (const PTerm& t : terms) {
                i64 prod = t.c;
                for (int i = 0; i < n; ++i)
                    for (std::int32_t e = 0; e < (*t.m)[static_cast<std::size_t>(i)]; ++e)
                        prod = prod * x[static_cast<std::size_t>(i)] % p;
                v = (v + prod) % p;
            }
            if (v != 0) return false;
        }
        return true;
    };

    // Canonical representatives: first nonzero coordinate equal to 1.
    i64 count = 0;
    for (int lead = 0; lead < n; ++lead) {
        std::fill(x.begin(), x.end(), 0);
        x[static_cast<std::size_t>(lead)] = 1;
        const int free_from = lead + 1;
        for (;;) {
            if (vanishes()) ++count;
            int pos = n - 1;
            while (pos >= free_from && x[static_cast<std::size_t>(pos)] == p - 1)
                x[static_cast<std::size_t>(pos--)] = 0;
            if (pos < free_from) break;
            ++x[static_cast<std::size_t>(pos)];
        }
    }
    return count;
}

int codim_probe(const QuadraticForm& q, const std::vector<IntegerPolynomial>& family,
                const std::vector<i64>& prime_list, i64 cap) {
    const int n = q.n_vars();
    if (n < 2) throw std::invalid_argument("form must have at least two variables");
    if (prime_list.size() < 3) throw std::invalid_argument("need at least three probe primes");
    for (i64 p : prime_list) {
        if (p < 3 || !is_prime64(static_cast<u64>(p)) || !is_good_prime(q, p))
            throw std::invalid_argument("probe primes must be odd good primes for the form");
        Int pn = int_pow(Int(p), n);
        if (pn > cap)
            throw DomainError("CapExceeded", "p^n exceeds the probe cap at p = " + std::to_string(p));
    }

    double sxx = 0.0, sxy = 0.0;
    bool any = false;
    for (i64 p : prime_list) {
        i64 c = projective_count_mod_p(q, family, p);
        if (c <= 0) continue;
        any = true;
        double lp = std::log(static_cast<double>(p));
        sxx += lp * lp;
        sxy += lp * std::log(static_cast<double>(c));
    }
    if (!any) return n; // empty over every probe prime
    double e = sxy / sxx;
    return n - 1 - static_cast<int>(std::lround(e));
}

void write_density_csv(std::ostream& os, const DensityComparison& d, const std::string& manifest,
                       const CsvOptions&) {
    os << manifest << "\n";
    os << "b,p_max,total_points,coprime_points,empirical,empirical_dec,predicted,predicted_dec,"
          "tail_bound,tail_bound_dec,fluctuation,fluctuation_dec,probe_codim\n";
    os << d.b << "," << d.p_max << "," << d.total_points << "," << d.coprime_points << ","
       << rat_pair(d.empirical) << "," << format_decimal(d.empirical) << ","
       << rat_pair(d.predicted) << "," << format_decimal(d.predicted) << ","
       << rat_pair(d.tail_bound) << "," << format_decimal(d.tail_bound) << ","
       << rat_pair(d.fluctuation) << "," << format_decimal(d.fluctuation) << ","
       << d.probe_codim << "\n";
}

void write_sieve_decay_csv(std::ostream& os, const SieveDecayResult& r, const std::string& manifest,
                           const CsvOptions& opt) {
    os << manifest << "\n";
    os << "b,m,total_points,sieved_points,zero_locus_points,scaled,elapsed_s\n";
    for (const SieveDecayRow& row : r.rows) {
        const SieveReport& rep = row.report;
        os << rep.b << "," << rep.m << "," << rep.total_points << "," << rep.sieved_points << ","
           << rep.zero_locus_points << "," << format_decimal(row.scaled) << ","
           << elapsed_field(rep.elapsed_seconds, opt) << "\n";
    }
}

void write_rank4_csv(std::ostream& os, const std::vector<Rank4Row>& rows,
                     const std::string& manifest, const CsvOptions& opt) {
    os << manifest << "\n";
    os << "b,m,total_points,sieved_points,oracle_lower,oracle_over_b2,elapsed_s\n";
    for (const Rank4Row& row : rows) {
        const SieveReport& rep = row.report;
        double ratio = static_cast<double>(row.oracle_lower) /
                       (static_cast<double>(rep.b) * static_cast<double>(rep.b));
        os << rep.b << "," << rep.m << "," << rep.total_points << "," << rep.sieved_points << ","
           << row.oracle_lower << "," << format_decimal(ratio) << ","
           << elapsed_field(rep.elapsed_seconds, opt) << "\n";
    }
}

} // namespace qsieve
