// qsieve: command line front end for the quadric sieve library.
//
// Every subcommand prints one CSV table: a `# manifest: {...}` comment line
// echoing the full configuration, a header row, then data rows.  Rational
// values appear as num/den next to a 12-significant-digit decimal column.
// Exit codes: 0 success, 1 domain error (name on stderr), 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <qsieve/enumerate.hpp>
#include <qsieve/errors.hpp>
#include <qsieve/experiments.hpp>
#include <qsieve/latticecover.hpp>
#include <qsieve/localdensity.hpp>
#include <qsieve/polynomial.hpp>
#include <qsieve/quadform.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qsieve;
using nlohmann::json;

struct GlobalOpts {
    std::string out;
    int threads = 0;  // 0 = all logical cores
    bool timing = false;
    u64 seed = 0;
};

std::string rat_pair(const Rat& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

std::string join_i64(const std::vector<i64>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s.push_back(sep);
        s += std::to_string(v[i]);
    }
    return s;
}

std::vector<IntegerPolynomial> parse_polys(const std::string& text, int n_vars_min) {
    std::vector<IntegerPolynomial> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ';')) {
        if (token.find_first_not_of(" \t") == std::string::npos)
            throw std::invalid_argument("empty polynomial in --polys list");
        out.push_back(IntegerPolynomial::parse(token, n_vars_min));
    }
    if (out.empty()) throw std::invalid_argument("--polys list is empty");
    return out;
}

Rat parse_rat(const std::string& text) {
    try {
        Rat r(text);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse rational value: " + text);
    }
}

// Output sink: stdout unless --out was given.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void emit_manifest(std::ostream& os, const json& j) { os << "# manifest: " << j.dump() << "\n"; }

json base_manifest(const char* command, const GlobalOpts& g) {
    json j;
    j["command"] = command;
    j["seed"] = g.seed;
    j["threads"] = g.threads;
    j["version"] = kQsieveVersion;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsieve: exact quadric point enumeration, sieve counts, lattice covers and local densities"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read key = value defaults (INI style) from this file");

    GlobalOpts g;
    app.add_option("--out", g.out, "Write CSV to this file instead of stdout");
    app.add_option("--threads", g.threads, "Worker threads (0 = all logical cores)");
    app.add_flag("--timing", g.timing, "Report measured elapsed seconds instead of 0");
    app.add_option("--seed", g.seed, "Seed echoed into the manifest");

    // ------------------------------------------------------------------ count
    auto* count = app.add_subcommand("count", "Count quadric points in a box, optionally in a residue class");
    struct {
        std::string form;
        i64 bound = 0;
        i64 modulus = 0;
        std::vector<i64> target;
    } co;
    count->add_option("--form", co.form, "Quadratic form, e.g. \"x0*x1 - x2^2\"")->required();
    count->add_option("--bound", co.bound, "Sup-norm bound B")->required();
    count->add_option("--modulus", co.modulus, "Residue modulus q (omit for a plain count)");
    count->add_option("--target", co.target, "Residue class a, comma separated")->delimiter(',');
    count->callback([&] {
        QuadraticForm q = QuadraticForm::parse(co.form);
        Sink sink(g.out);
        json m = base_manifest("count", g);
        m["form"] = q.to_string();
        m["bound"] = co.bound;
        if (count->count("--modulus") == 0) {
            if (!co.target.empty())
                throw std::invalid_argument("--target requires --modulus");
            QuadraticForm q0;
            i64 total = is_hyperbolic_shape(q, &q0)
                            ? count_quadric_points(q, co.bound)
                            : count_points_congruence(q, co.bound, 1,
                                                      std::vector<i64>(q.n_vars(), 0));
            emit_manifest(sink.os(), m);
            sink.os() << "b,total_points\n" << co.bound << "," << total << "\n";
            return;
        }
        std::vector<i64> a = co.target;
        if (a.empty()) a.assign(static_cast<std::size_t>(q.n_vars()), 0);
        m["modulus"] = co.modulus;
        m["target"] = join_i64(a, ';');
        i64 total = count_points_congruence(q, co.bound, co.modulus, a);
        emit_manifest(sink.os(), m);
        sink.os() << "b,modulus,target,total_points\n"
                  << co.bound << "," << co.modulus << "," << join_i64(a, ';') << "," << total << "\n";
    });

    // ------------------------------------------------------------------ sieve
    auto* sieve = app.add_subcommand("sieve", "Sieve counts N(B, M) with the decay normalization");
    struct {
        std::string form;
        std::string polys;
        std::vector<i64> b_grid;
        std::vector<i64> m_grid;
    } so;
    sieve->add_option("--form", so.form, "Quadratic form")->required();
    sieve->add_option("--polys", so.polys, "Semicolon separated family, e.g. \"x0;x1\"")->required();
    sieve->add_option("--bound", so.b_grid, "B grid, comma separated")->required()->delimiter(',');
    sieve->add_option("--m-grid", so.m_grid, "M grid, comma separated")->required()->delimiter(',');
    sieve->callback([&] {
        ExperimentConfig cfg;
        cfg.form = QuadraticForm::parse(so.form);
        cfg.polys = parse_polys(so.polys, cfg.form.n_vars());
        cfg.b_grid = so.b_grid;
        cfg.m_grid = so.m_grid;
        cfg.seed = g.seed;
        cfg.threads = g.threads;
        SieveDecayResult res = sieve_decay_experiment(cfg);
        Sink sink(g.out);
        write_sieve_decay_csv(sink.os(), res, manifest_line(cfg, "sieve-decay"), {g.timing});
    });

    // ----------------------------------------------------------- affine-sieve
    auto* affine = app.add_subcommand("affine-sieve", "Sieve counts over a lopsided affine box");
    struct {
        std::string polys;
        std::vector<double> box;
        i64 modulus = 0;
    } ao;
    affine->add_option("--polys", ao.polys, "Semicolon separated family")->required();
    affine->add_option("--box", ao.box, "Per-axis half-widths, comma separated")->required()->delimiter(',');
    affine->add_option("--modulus", ao.modulus, "Sieve threshold M")->required();
    affine->callback([&] {
        Box box(ao.box);
        auto family = parse_polys(ao.polys, box.dims());
        SieveReport rep = affine_sieve_count(family, box, ao.modulus, g.threads);
        Sink sink(g.out);
        json m = base_manifest("affine-sieve", g);
        auto polys = json::array();
        for (const auto& f : family) polys.push_back(f.to_string());
        m["polys"] = polys;
        m["box"] = ao.box;
        m["modulus"] = ao.modulus;
        emit_manifest(sink.os(), m);
        sink.os() << "m,total_points,sieved_points,zero_locus_points,elapsed_s\n"
                  << rep.m << "," << rep.total_points << "," << rep.sieved_points << ","
                  << rep.zero_locus_points << ","
                  << (g.timing ? format_decimal(rep.elapsed_seconds) : std::string("0")) << "\n";
    });

    // ---------------------------------------------------------------- density
    auto* density = app.add_subcommand("density", "Local density sigma_p of a form");
    struct {
        std::string form;
        i64 p = 0;
        int kmax = 6;
        bool brute = false;
        i64 cap = 10000000;
    } dn;
    density->add_option("--form", dn.form, "Quadratic form")->required();
    density->add_option("--p", dn.p, "Prime p")->required();
    density->add_option("--kmax", dn.kmax, "Truncation level k_max");
    density->add_flag("--brute", dn.brute, "Force the brute residue sweep");
    density->add_option("--cap", dn.cap, "Residue sweep size cap");
    density->callback([&] {
        QuadraticForm q = QuadraticForm::parse(dn.form);
        DensityOptions opt;
        opt.method = dn.brute ? NuMethod::ForceBrute : NuMethod::Auto;
        opt.cap = dn.cap;
        DensityValue v = sigma_p(q, dn.p, dn.kmax, opt);
        Sink sink(g.out);
        json m = base_manifest("density", g);
        m["form"] = q.to_string();
        m["p"] = dn.p;
        m["kmax"] = dn.kmax;
        m["brute"] = dn.brute;
        m["cap"] = dn.cap;
        emit_manifest(sink.os(), m);
        sink.os() << "p,k_used,method,stabilized,value,value_dec\n"
                  << v.p << "," << v.k_used << "," << to_string(v.method) << ","
                  << (v.stabilized ? "true" : "false") << "," << rat_pair(v.value) << ","
                  << format_decimal(v.value) << "\n";
    });

    // ---------------------------------------------------------------- coprime
    auto* coprime = app.add_subcommand("coprime", "Empirical vs. predicted coprime-value density");
    struct {
        std::string form;
        std::string f, gpoly;
        i64 bound = 0;
        i64 pmax = 50;
        int kmax = 6;
    } cp;
    coprime->add_option("--form", cp.form, "Quadratic form, rank >= 5, indefinite")->required();
    coprime->add_option("--f", cp.f, "First polynomial")->required();
    coprime->add_option("--g", cp.gpoly, "Second polynomial")->required();
    coprime->add_option("--bound", cp.bound, "Box bound B")->required();
    coprime->add_option("--pmax", cp.pmax, "Largest prime in the truncated product");
    coprime->add_option("--kmax", cp.kmax, "Truncation level for brute primes");
    coprime->callback([&] {
        ExperimentConfig cfg;
        cfg.form = QuadraticForm::parse(cp.form);
        cfg.polys = {IntegerPolynomial::parse(cp.f, cfg.form.n_vars()),
                     IntegerPolynomial::parse(cp.gpoly, cfg.form.n_vars())};
        cfg.b_grid = {cp.bound};
        cfg.m_grid = {2};  // unused by this experiment
        cfg.p_max = cp.pmax;
        cfg.k_max = cp.kmax;
        cfg.seed = g.seed;
        cfg.threads = g.threads;
        DensityComparison d = coprime_density_experiment(cfg);
        Sink sink(g.out);
        write_density_csv(sink.os(), d, manifest_line(cfg, "coprime-density"), {g.timing});
    });

    // ------------------------------------------------------------------ cover
    auto* cover = app.add_subcommand("cover", "Lattice cover of R = 0 (mod q): one generator per row");
    struct {
        std::string form;
        i64 modulus = 0;
        i64 cap = 10000000;
    } cv;
    cover->add_option("--form", cv.form, "Quadratic form R (unused variables are dropped)")->required();
    cover->add_option("--modulus", cv.modulus, "Squarefree modulus q of good primes")->required();
    cover->add_option("--cap", cv.cap, "Residue enumeration cap");
    cover->callback([&] {
        QuadraticForm r = QuadraticForm::parse(cv.form).rebased_to_used();
        CoverLL c = build_cover_ll(r, cv.modulus, cv.cap);
        Sink sink(g.out);
        json m = base_manifest("cover", g);
        m["form"] = r.to_string();
        m["modulus"] = cv.modulus;
        m["omega"] = c.omega_q;
        m["cap"] = cv.cap;
        m["generators"] = c.generators.size();
        emit_manifest(sink.os(), m);
        sink.os() << "index";
        for (int i = 0; i < r.n_vars(); ++i) sink.os() << ",y" << i;
        sink.os() << "\n";
        for (std::size_t i = 0; i < c.generators.size(); ++i) {
            sink.os() << i;
            for (i64 v : c.generators[i]) sink.os() << "," << v;
            sink.os() << "\n";
        }
    });

    // ----------------------------------------------------------- cover-llplus
    auto* llplus = app.add_subcommand("cover-llplus", "Binary cover x1^2 = d x2^2 (mod q1 q2): one root per row");
    struct {
        i64 d = 0;
        i64 q1 = 1;
        i64 q2 = 1;
        i64 cap = 10000000;
    } lp;
    llplus->add_option("--d", lp.d, "Non-square discriminant d")->required();
    llplus->add_option("--q1", lp.q1, "Squarefree product of split primes");
    llplus->add_option("--q2", lp.q2, "Squarefree product of inert primes");
    llplus->add_option("--cap", lp.cap, "Covering verification cap");
    llplus->callback([&] {
        CoverLLPlus c = build_cover_llplus(lp.d, lp.q1, lp.q2, lp.cap);
        Sink sink(g.out);
        json m = base_manifest("cover-llplus", g);
        m["d"] = lp.d;
        m["q1"] = lp.q1;
        m["q2"] = lp.q2;
        m["cap"] = lp.cap;
        emit_manifest(sink.os(), m);
        sink.os() << "rho,det_abs,lambda1_sq,lambda1_sq_dec,lambda2_sq,lambda2_sq_dec\n";
        for (i64 rho : c.roots) {
            IntegerLattice lat = lattice_of_llplus(c, rho);
            MinimaResult mins = successive_minima_sq(lat);
            sink.os() << rho << "," << lat.det_abs.str() << "," << rat_pair(mins.lambda_sq[0])
                      << "," << format_decimal(mins.lambda_sq[0]) << ","
                      << rat_pair(mins.lambda_sq[1]) << "," << format_decimal(mins.lambda_sq[1])
                      << "\n";
        }
    });

    // ----------------------------------------------------------------- minima
    auto* minima = app.add_subcommand("minima", "Successive minima, dual pairing and reduced-basis certificates of Lambda(y; q)");
    struct {
        std::vector<i64> y;
        i64 modulus = 0;
        std::string threshold;
    } mi;
    minima->add_option("--y", mi.y, "Primitive vector y, comma separated")->required()->delimiter(',');
    minima->add_option("--modulus", mi.modulus, "Modulus q")->required();
    minima->add_option("--threshold", mi.threshold, "Witness threshold L (rational, e.g. 3 or 7/2)");
    minima->callback([&] {
        IntegerLattice lat = lattice_of(mi.y, mi.modulus);
        MinimaResult mins = successive_minima_sq(lat);
        RationalBasis dual = dual_lattice(lat);
        MinimaResult dmins = successive_minima_sq(dual);
        ReducedBasisResult red = reduced_basis(lat);
        Sink sink(g.out);
        json m = base_manifest("minima", g);
        m["y"] = join_i64(mi.y, ';');
        m["modulus"] = mi.modulus;
        m["det_abs"] = lat.det_abs.str();
        if (!mi.threshold.empty()) m["threshold"] = mi.threshold;
        emit_manifest(sink.os(), m);
        sink.os() << "i,lambda_sq,lambda_sq_dec,dual_lambda_sq,dual_lambda_sq_dec,pairing_sq,"
                     "pairing_sq_dec,reduced_ratio_sq,reduced_ratio_sq_dec\n";
        const int mdim = lat.m;
        for (int i = 0; i < mdim; ++i) {
            Rat pairing = mins.lambda_sq[static_cast<std::size_t>(i)] *
                          dmins.lambda_sq[static_cast<std::size_t>(mdim - 1 - i)];
            sink.os() << (i + 1) << "," << rat_pair(mins.lambda_sq[static_cast<std::size_t>(i)])
                      << "," << format_decimal(mins.lambda_sq[static_cast<std::size_t>(i)]) << ","
                      << rat_pair(dmins.lambda_sq[static_cast<std::size_t>(i)]) << ","
                      << format_decimal(dmins.lambda_sq[static_cast<std::size_t>(i)]) << ","
                      << rat_pair(pairing) << "," << format_decimal(pairing) << ","
                      << rat_pair(red.ratio_sq[static_cast<std::size_t>(i)]) << ","
                      << format_decimal(red.ratio_sq[static_cast<std::size_t>(i)]) << "\n";
        }
        if (!mi.threshold.empty()) {
            auto w = short_dual_witness(mi.y, mi.modulus, parse_rat(mi.threshold));
            sink.os() << "# witness: " << (w ? join_i64(*w, ';') : std::string("none")) << "\n";
        }
    });

    // ------------------------------------------------------------ strongapprox
    auto* sa = app.add_subcommand("strongapprox", "Search for a congruence-constrained quadric point with S-unit family gcd");
    struct {
        std::string form;
        std::string polys;
        std::vector<i64> target;
        i64 modulus = 0;
        std::vector<i64> s_primes;
        i64 bmax = 0;
    } sp;
    sa->add_option("--form", sp.form, "Quadratic form")->required();
    sa->add_option("--polys", sp.polys, "Semicolon separated family")->required();
    sa->add_option("--target", sp.target, "Residue class a, comma separated")->required()->delimiter(',');
    sa->add_option("--modulus", sp.modulus, "Modulus M (product of primes from S)")->required();
    sa->add_option("--s-primes", sp.s_primes, "Primes of S, comma separated")->required()->delimiter(',');
    sa->add_option("--bmax", sp.bmax, "Search bound")->required();
    sa->callback([&] {
        QuadraticForm q = QuadraticForm::parse(sp.form);
        auto family = parse_polys(sp.polys, q.n_vars());
        auto hit = strong_approx_search(q, family, sp.target, sp.modulus, sp.s_primes, sp.bmax);
        Sink sink(g.out);
        json m = base_manifest("strongapprox", g);
        m["form"] = q.to_string();
        auto polys = json::array();
        for (const auto& f : family) polys.push_back(f.to_string());
        m["polys"] = polys;
        m["target"] = join_i64(sp.target, ';');
        m["modulus"] = sp.modulus;
        m["s_primes"] = join_i64(sp.s_primes, ';');
        m["bmax"] = sp.bmax;
        emit_manifest(sink.os(), m);
        sink.os() << "found,x\n";
        if (hit)
            sink.os() << "1," << join_i64(*hit, ';') << "\n";
        else
            sink.os() << "0,\n";
    });

    // ---------------------------------------------------------- counterexample
    auto* cex = app.add_subcommand("counterexample", "Rank-4 sieve lower bound: X0*X1 - X2*X3 with family {X1, X2, X3}");
    struct {
        std::vector<i64> b_grid;
        double theta = 0.6;
    } ce;
    cex->add_option("--b-grid", ce.b_grid, "B grid, comma separated")->required()->delimiter(',');
    cex->add_option("--theta", ce.theta, "Exponent in M = floor(B^theta), in (1/2, 3/4]");
    cex->callback([&] {
        auto rows = rank4_counterexample(ce.b_grid, ce.theta, g.threads);
        Sink sink(g.out);
        json m = base_manifest("counterexample", g);
        m["b_grid"] = ce.b_grid;
        m["theta"] = ce.theta;
        std::ostringstream manifest;
        manifest << "# manifest: " << m.dump();
        write_rank4_csv(sink.os(), rows, manifest.str(), {g.timing});
    });

    // ------------------------------------------------------------------ probe
    auto* probe = app.add_subcommand("probe", "Heuristic codimension of Q = F_1 = ... = F_r = 0 from F_p point counts");
    struct {
        std::string form;
        std::string polys;
        std::vector<i64> primes;
        i64 cap = 100000000;
    } pr;
    probe->add_option("--form", pr.form, "Quadratic form")->required();
    probe->add_option("--polys", pr.polys, "Semicolon separated family (may be omitted)");
    probe->add_option("--primes", pr.primes, "At least three good primes, comma separated")->required()->delimiter(',');
    probe->add_option("--cap", pr.cap, "Cap on p^n");
    probe->callback([&] {
        QuadraticForm q = QuadraticForm::parse(pr.form);
        std::vector<IntegerPolynomial> family;
        if (!pr.polys.empty()) family = parse_polys(pr.polys, q.n_vars());
        int codim = codim_probe(q, family, pr.primes, pr.cap);
        Sink sink(g.out);
        json m = base_manifest("probe", g);
        m["form"] = q.to_string();
        auto polys = json::array();
        for (const auto& f : family) polys.push_back(f.to_string());
        m["polys"] = polys;
        m["primes"] = pr.primes;
        m["cap"] = pr.cap;
        emit_manifest(sink.os(), m);
        sink.os() << "p,projective_count,estimated_codim\n";
        for (i64 p : pr.primes)
            sink.os() << p << "," << projective_count_mod_p(q, family, p) << "," << codim << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const qsieve::DomainError& e) {
        std::cerr << e.what() << "\n"; // what() carries the "Name: message" form
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "InvalidArgument: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
