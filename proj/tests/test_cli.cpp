// Exercises the installed binary through popen: exit codes, CSV layout and
// byte-level agreement with the library routines the subcommands wrap.
#include <doctest.h>

#include <qsieve/enumerate.hpp>
#include <qsieve/experiments.hpp>
#include <qsieve/localdensity.hpp>
#include <qsieve/numeric.hpp>
#include <qsieve/quadform.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace qsieve;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout, plus stderr when the caller redirects
};

RunResult run(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(QSIEVE_BIN) + " " + args;
    if (merge_stderr)
        cmd += " 2>&1";
    else
        cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

nlohmann::json manifest_of(const std::string& line) {
    const std::string prefix = "# manifest: ";
    REQUIRE(line.rfind(prefix, 0) == 0);
    return nlohmann::json::parse(line.substr(prefix.size()));
}

std::vector<i64> split_i64(const std::string& s, char sep) {
    std::vector<i64> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, sep)) out.push_back(std::stoll(tok));
    return out;
}

} // namespace

TEST_CASE("count subcommand") {
    auto r = run("count --form \"x0*x1 - x2^2\" --bound 2");
    CHECK(r.exit_code == 0);
    auto ls = lines_of(r.output);
    REQUIRE(ls.size() == 3);
    auto m = manifest_of(ls[0]);
    CHECK(m.at("command") == "count");
    CHECK(m.at("bound") == 2);
    CHECK(m.at("version") == std::string(kQsieveVersion));
    CHECK(ls[1] == "b,total_points");
    CHECK(ls[2] == "2,17");

    // non-hyperbolic forms take the congruence path; totals must agree with
    // the library call
    QuadraticForm cone = QuadraticForm::parse("x0^2 + x1^2 - x2^2");
    i64 want = count_points_congruence(cone, 3, 1, {0, 0, 0});
    auto r2 = run("count --form \"x0^2 + x1^2 - x2^2\" --bound 3");
    CHECK(r2.exit_code == 0);
    auto ls2 = lines_of(r2.output);
    REQUIRE(ls2.size() == 3);
    CHECK(ls2[2] == "3," + std::to_string(want));

    // residue-class counting
    i64 cls = count_points_congruence(QuadraticForm::parse("x0*x1 - x2^2"), 5, 3, {1, 1, 1});
    auto r3 = run("count --form \"x0*x1 - x2^2\" --bound 5 --modulus 3 --target 1,1,1");
    CHECK(r3.exit_code == 0);
    auto ls3 = lines_of(r3.output);
    REQUIRE(ls3.size() == 3);
    CHECK(ls3[1] == "b,modulus,target,total_points");
    CHECK(ls3[2] == "5,3,1;1;1," + std::to_string(cls));

    // --target without --modulus is a usage error surfaced as InvalidArgument
    auto r4 = run("count --form \"x0*x1 - x2^2\" --bound 2 --target 0,0,0", true);
    CHECK(r4.exit_code == 1);
    CHECK(r4.output.find("InvalidArgument:") != std::string::npos);
}

TEST_CASE("density subcommand prints the recursion-stabilized value") {
    auto r = run("density --form \"x0*x1 - x2^2\" --p 3 --kmax 6");
    CHECK(r.exit_code == 0);
    auto ls = lines_of(r.output);
    REQUIRE(ls.size() == 3);
    CHECK(ls[1] == "p,k_used,method,stabilized,value,value_dec");
    CHECK(ls[2] == "3,6,SmoothSingularRecursion,true,4/3," + format_decimal(Rat(4, 3)));

    auto bad = run("density --form \"x0*x1 - x2^2\" --p 4", true);
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("InvalidArgument:") != std::string::npos);
}

TEST_CASE("cover subcommand") {
    auto r = run("cover --form \"x0^2 - x1^2 - x2^2\" --modulus 5");
    CHECK(r.exit_code == 0);
    auto ls = lines_of(r.output);
    REQUIRE(ls.size() == 2 + 6);
    auto m = manifest_of(ls[0]);
    CHECK(m.at("omega") == 1);
    CHECK(m.at("generators") == 6);
    CHECK(ls[1] == "index,y0,y1,y2");
    for (std::size_t i = 0; i < 6; ++i) {
        auto row = split_i64(ls[2 + i], ',');
        REQUIRE(row.size() == 4);
        CHECK(row[0] == static_cast<i64>(i));
    }

    // unused variables are dropped before the cover is built
    auto r2 = run("cover --form \"x1^2 - x2^2 - x3^2\" --modulus 5");
    CHECK(r2.exit_code == 0);
    auto ls2 = lines_of(r2.output);
    auto m2 = manifest_of(ls2[0]);
    CHECK(m2.at("form") == QuadraticForm::parse("x0^2 - x1^2 - x2^2").to_string());
    CHECK(ls2[1] == "index,y0,y1,y2");

    auto bad = run("cover --form \"x0^2 - x1^2 - x2^2\" --modulus 9", true);
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("InvalidArgument:") != std::string::npos);

    auto bad2 = run("cover --form \"x0^2 - x1^2 - x2^2\" --modulus 2", true);
    CHECK(bad2.exit_code == 1);
    CHECK(bad2.output.find("NotGoodModulus:") != std::string::npos);
}

TEST_CASE("sieve subcommand matches the library writer byte for byte") {
    std::string args = "sieve --form \"x0*x1 - x2^2\" --polys \"x0;x1\" --bound 5,8 --m-grid 2,3";
    auto r1 = run(args);
    auto r2 = run(args);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output == r2.output); // deterministic by default

    ExperimentConfig cfg;
    cfg.form = QuadraticForm::parse("x0*x1 - x2^2");
    cfg.polys = {IntegerPolynomial::parse("x0", 3), IntegerPolynomial::parse("x1", 3)};
    cfg.b_grid = {5, 8};
    cfg.m_grid = {2, 3};
    cfg.threads = 0; // the CLI default
    std::ostringstream want;
    write_sieve_decay_csv(want, sieve_decay_experiment(cfg), manifest_line(cfg, "sieve-decay"));
    CHECK(r1.output == want.str());
}

TEST_CASE("coprime subcommand matches the library writer byte for byte") {
    std::string args = "coprime --form \"x0*x1 - x2^2 - x3^2 - x4^2\" --f x0 --g x1 "
                       "--bound 8 --pmax 20 --kmax 4";
    auto r = run(args);
    CHECK(r.exit_code == 0);

    ExperimentConfig cfg;
    cfg.form = QuadraticForm::parse("x0*x1 - x2^2 - x3^2 - x4^2");
    cfg.polys = {IntegerPolynomial::parse("x0", 5), IntegerPolynomial::parse("x1", 5)};
    cfg.b_grid = {8};
    cfg.m_grid = {2};
    cfg.p_max = 20;
    cfg.k_max = 4;
    cfg.threads = 0;
    std::ostringstream want;
    write_density_csv(want, coprime_density_experiment(cfg), manifest_line(cfg, "coprime-density"));
    CHECK(r.output == want.str());
}

TEST_CASE("affine-sieve subcommand") {
    auto r = run("affine-sieve --polys \"x0;x1\" --box 4,4 --modulus 3");
    CHECK(r.exit_code == 0);
    auto ls = lines_of(r.output);
    REQUIRE(ls.size() == 3);
    CHECK(ls[1] == "m,total_points,sieved_points,zero_locus_points,elapsed_s");

    std::vector<IntegerPolynomial> fam = {IntegerPolynomial::parse("x0", 2),
                                          IntegerPolynomial::parse("x1", 2)};
    SieveReport rep = affine_sieve_count(fam, Box({4.0, 4.0}), 3);
    std::ostringstream want;
    want << rep.m << "," << rep.total_points << "," << rep.sieved_points << ","
         << rep.zero_locus_points << ",0";
    CHECK(ls[2] == want.str());
}

TEST_CASE("counterexample subcommand") {
    auto r = run("counterexample --b-grid 10 --theta 0.6");
    CHECK(r.exit_code == 0);
    auto ls = lines_of(r.output);
    REQUIRE(ls.size() == 3);
    CHECK(ls[1] == "b,m,total_points,sieved_points,oracle_lower,oracle_over_b2,elapsed_s");
    CHECK(ls[2].rfind("10,3,", 0) == 0);
    CHECK(ls[2].substr(ls[2].rfind(',') + 1) == "0"); // no --timing

    auto bad = run("counterexample --b-grid 10 --theta 0.5", true);
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("BadExponent:") != std::string::npos);
}

TEST_CASE("probe subcommand") {
    auto r = run("probe --form \"x0*x1 - x2^2 - x3^2 - x4^2\" --polys \"x0;x1\" --primes 5,7,11");
    CHECK(r.exit_code == 0);
    auto ls = lines_of(r.output);
    REQUIRE(ls.size() == 5);
    CHECK(ls[1] == "p,projective_count,estimated_codim");
    // Q = x0 = x1 = 0 is a smooth conic: p + 1 points, codimension 3
    CHECK(ls[2] == "5,6,3");
    CHECK(ls[3] == "7,8,3");
    CHECK(ls[4] == "11,12,3");
}

TEST_CASE("minima subcommand") {
    auto r = run("minima --y 1,2,0 --modulus 5 --threshold 1/2");
    CHECK(r.exit_code == 0);
    auto ls = lines_of(r.output);
    REQUIRE(ls.size() == 6); // manifest, header, 3 rows, witness
    CHECK(ls[1] == "i,lambda_sq,lambda_sq_dec,dual_lambda_sq,dual_lambda_sq_dec,pairing_sq,"
                   "pairing_sq_dec,reduced_ratio_sq,reduced_ratio_sq_dec");
    CHECK(ls[2].rfind("1,5/1,", 0) == 0);
    CHECK(ls[4].rfind("3,25/1,", 0) == 0);
    CHECK(ls[5].rfind("# witness: ", 0) == 0);
    CHECK(ls[5] != "# witness: none");

    auto r2 = run("minima --y 1,2,0 --modulus 5 --threshold 100");
    auto ls2 = lines_of(r2.output);
    REQUIRE(ls2.size() == 6);
    CHECK(ls2[5] == "# witness: none");

    auto r3 = run("minima --y 1,2,0 --modulus 5");
    CHECK(lines_of(r3.output).size() == 5); // no witness line without a threshold
}

TEST_CASE("strongapprox subcommand") {
    auto r = run("strongapprox --form \"x0*x1 - x2^2\" --polys x0 --target 1,4,2 "
                 "--modulus 3 --s-primes 3 --bmax 30");
    CHECK(r.exit_code == 0);
    auto ls = lines_of(r.output);
    REQUIRE(ls.size() == 3);
    CHECK(ls[1] == "found,x");
    REQUIRE(ls[2].rfind("1,", 0) == 0);
    auto x = split_i64(ls[2].substr(2), ';');
    REQUIRE(x.size() == 3);
    CHECK(x[0] * x[1] - x[2] * x[2] == 0);
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<i64> a = {1, 4, 2};
        CHECK(mod_pos(x[i] - a[i], 3) == 0);
    }
    i64 v = x[0] < 0 ? -x[0] : x[0];
    while (v != 0 && v % 3 == 0) v /= 3;
    CHECK(v == 1); // the family value is a 3-unit

    auto none = run("strongapprox --form \"x0*x1 - x2^2\" --polys \"2*x0;2*x1;2*x2\" "
                    "--target 1,4,2 --modulus 3 --s-primes 3 --bmax 6");
    CHECK(none.exit_code == 0);
    auto ls2 = lines_of(none.output);
    REQUIRE(ls2.size() == 3);
    CHECK(ls2[2] == "0,");

    auto bad = run("strongapprox --form \"x0*x1 - x2^2\" --polys x0 --target 1,1,0 "
                   "--modulus 3 --s-primes 3 --bmax 6", true);
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("BadTarget:") != std::string::npos);
}

TEST_CASE("global options: --out, --config, --threads, exit codes") {
    std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                       "/qsieve_cli_out.csv";
    auto direct = run("count --form \"x0*x1 - x2^2\" --bound 2");
    auto filed = run("--out " + path + " count --form \"x0*x1 - x2^2\" --bound 2");
    CHECK(filed.exit_code == 0);
    CHECK(filed.output.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == direct.output);
    std::remove(path.c_str());

    // INI config fills global defaults; the manifest echoes them
    std::string cfg_path = path + ".ini";
    {
        std::ofstream cfg(cfg_path);
        cfg << "threads=2\nseed=7\n";
    }
    auto withcfg = run("--config " + cfg_path + " count --form \"x0*x1 - x2^2\" --bound 2");
    CHECK(withcfg.exit_code == 0);
    auto m = manifest_of(lines_of(withcfg.output)[0]);
    CHECK(m.at("threads") == 2);
    CHECK(m.at("seed") == 7);
    std::remove(cfg_path.c_str());

    // requested thread count is echoed, not the resolved one
    auto t = run("--threads 3 count --form \"x0*x1 - x2^2\" --bound 2");
    CHECK(manifest_of(lines_of(t.output)[0]).at("threads") == 3);

    CHECK(run("--help").exit_code == 0);
    CHECK(run("", true).exit_code == 2);                       // subcommand required
    CHECK(run("count --form \"x0*x1 - x2^2\"", true).exit_code == 2); // missing --bound
    auto parse_err = run("count --form \"x0^3\" --bound 2", true);
    CHECK(parse_err.exit_code == 1);
    CHECK(parse_err.output.find("InvalidArgument:") != std::string::npos);
}
