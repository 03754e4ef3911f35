// ============================================================================
// test_cli.cpp -- the command-line front end driven in process: exit codes,
// pinned numeric output, seed precedence (flag > environment > config file >
// default), config-file handling, and byte-identical machine output across
// repeat runs and thread counts.
// ============================================================================
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rearrkit/cli.hpp"

using namespace rearrkit;

namespace {

// Clears REARRKIT_SEED for the scope and restores the outer value after.
struct ScopedSeedEnv {
    std::string saved;
    bool had = false;
    ScopedSeedEnv() {
        const char* e = std::getenv("REARRKIT_SEED");
        if (e != nullptr) {
            had = true;
            saved = e;
        }
        unsetenv("REARRKIT_SEED");
    }
    ~ScopedSeedEnv() {
        if (had) {
            setenv("REARRKIT_SEED", saved.c_str(), 1);
        } else {
            unsetenv("REARRKIT_SEED");
        }
    }
};

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    REQUIRE(f.good());
    f << text;
}

} // namespace

TEST_CASE("junge: exact uniform and permutation values") {
    ScopedSeedEnv guard;
    CliResult r = run({"junge", "--n", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("statistic 1.25") != std::string::npos);
    CHECK(r.out.find("profile p/(1+log p) = 1") != std::string::npos);
    CHECK(r.out.find("fitted c0 = 1.25") != std::string::npos);

    r = run({"junge", "--n", "5", "--matrix", "perm", "--p", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("statistic 1\n") != std::string::npos);

    // n > 8 forces the sampling path, which reports a standard error.
    r = run({"junge", "--n", "12", "--matrix", "random", "--seed", "9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("(se ") != std::string::npos);

    r = run({"junge"});
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
    r = run({"junge", "--n", "3", "--matrix", "sideways"});
    CHECK(r.code == 2);
    r = run({"junge", "--n", "3", "--p", "0.5"});
    CHECK(r.code == 2);
}

TEST_CASE("kruglov: indicator law matches the Poisson values") {
    ScopedSeedEnv guard;
    CliResult r = run({"kruglov", "--indicator", "--n", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.367879") != std::string::npos); // P(0) and P(1)
    CHECK(r.out.find("0.183940") != std::string::npos); // P(2)
    CHECK(r.out.find("tail mass bound") != std::string::npos);

    std::string dist = "/tmp/rearrkit_cli_dist.json";
    spit(dist, "{\"ambient\":\"unit\",\"atoms\":[[1.0,0.3]]}");
    r = run({"kruglov", "--dist", dist, "--n", "2"});
    CHECK(r.code == 0);
    // Thinning: P(K=1) = 0.3 exp(-0.3).
    CHECK(r.out.find("0.222245") != std::string::npos);

    spit(dist, "{not json");
    r = run({"kruglov", "--dist", dist});
    CHECK(r.code == 2);
    std::remove(dist.c_str());

    r = run({"kruglov"});
    CHECK(r.code == 2);
    r = run({"kruglov", "--dist", "/tmp/rearrkit_does_not_exist.json"});
    CHECK(r.code == 2);
}

TEST_CASE("psi: knot table prints and exports") {
    ScopedSeedEnv guard;
    std::string out_path = "/tmp/rearrkit_cli_psi.csv";
    CliResult r = run({"psi", "--knots", "4", "--out", out_path});
    CHECK(r.code == 0);
    CHECK(r.out.find("psi(t)") != std::string::npos);
    std::string payload = slurp(out_path);
    CHECK(payload.rfind("t,psi\n", 0) == 0);
    std::remove(out_path.c_str());

    r = run({"psi", "--knots", "0"});
    CHECK(r.code == 2);
}

TEST_CASE("verify: a cheap suite passes, bogus names are usage errors") {
    ScopedSeedEnv guard;
    std::string out_path = "/tmp/rearrkit_cli_verify.csv";
    CliResult r = run({"verify", "--suite", "psi", "--seed", "42", "--out", out_path});
    CHECK(r.code == 0);
    CHECK(r.out.find("[ ok ]") != std::string::npos);
    CHECK(r.out.find("checks passed (seed 42)") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    std::string payload = slurp(out_path);
    CHECK(payload.rfind("suite,check,pass,note\n", 0) == 0);
    std::remove(out_path.c_str());

    r = run({"verify", "--suite", "nonsense"});
    CHECK(r.code == 2);
    r = run({"verify", "--bogus"});
    CHECK(r.code == 2);
}

TEST_CASE("help and missing subcommands") {
    ScopedSeedEnv guard;
    CliResult r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("verify") != std::string::npos);
    CHECK(r.out.find("experiment") != std::string::npos);
    r = run({"junge", "--help"});
    CHECK(r.code == 0);
    r = run({});
    CHECK(r.code == 2);
    r = run({"frobnicate"});
    CHECK(r.code == 2);
}

TEST_CASE("experiment: byte-identical output across runs and thread counts") {
    ScopedSeedEnv guard;
    std::vector<std::string> base = {"experiment", "--theorem", "norm_equiv", "--n", "2",
                                     "--mode",     "mc",        "--trials",  "2000",
                                     "--instances", "4",        "--seed",    "7"};
    std::string f1 = "/tmp/rearrkit_cli_e1.csv";
    std::string f2 = "/tmp/rearrkit_cli_e2.csv";
    std::string f3 = "/tmp/rearrkit_cli_e3.csv";

    auto with = [&](const std::string& threads, const std::string& path) {
        std::vector<std::string> args = base;
        args.push_back("--threads");
        args.push_back(threads);
        args.push_back("--out");
        args.push_back(path);
        return run(args);
    };
    CliResult r1 = with("1", f1);
    CliResult r2 = with("1", f2);
    CliResult r3 = with("4", f3);
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);
    CHECK(r3.code == 0);
    CHECK(r1.out == r2.out);
    CHECK(r1.out == r3.out);
    std::string p1 = slurp(f1), p2 = slurp(f2), p3 = slurp(f3);
    CHECK(p1 == p2);
    CHECK(p1 == p3);
    CHECK(p1.rfind("theorem,", 0) == 0);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
    std::remove(f3.c_str());
}

TEST_CASE("experiment: config files and the seed precedence chain") {
    ScopedSeedEnv guard;
    std::string cfg = "/tmp/rearrkit_cli_cfg.json";
    spit(cfg,
         "{\"theorem\":\"modular\",\"n\":2,\"Phi\":{\"power\":2.0},"
         "\"E\":{\"ellq\":2.0},\"instances\":3,\"seed\":5}");

    CliResult r = run({"experiment", "--config", cfg});
    CHECK(r.code == 0);
    CHECK(r.out.find("modular") != std::string::npos);
    CHECK(r.out.find("seed=5") != std::string::npos); // config value

    r = run({"experiment", "--config", cfg, "--seed", "8"});
    CHECK(r.code == 0);
    CHECK(r.out.find("seed=8") != std::string::npos); // flag beats config

    setenv("REARRKIT_SEED", "777", 1);
    r = run({"experiment", "--config", cfg});
    CHECK(r.code == 0);
    CHECK(r.out.find("seed=777") != std::string::npos); // env beats config

    r = run({"experiment", "--config", cfg, "--seed", "8"});
    CHECK(r.code == 0);
    CHECK(r.out.find("seed=8") != std::string::npos); // flag beats env

    // Flag and environment draw identical samples.
    CliResult via_env = run({"junge", "--n", "10", "--matrix", "random"});
    unsetenv("REARRKIT_SEED");
    CliResult via_flag = run({"junge", "--n", "10", "--matrix", "random", "--seed", "777"});
    CHECK(via_env.code == 0);
    CHECK(via_env.out == via_flag.out);

    setenv("REARRKIT_SEED", "not-a-number", 1);
    r = run({"experiment", "--config", cfg});
    CHECK(r.code == 2);
    CHECK(r.err.find("REARRKIT_SEED") != std::string::npos);
    unsetenv("REARRKIT_SEED");

    spit(cfg, "{\"theorem\":\"modular\",");
    r = run({"experiment", "--config", cfg});
    CHECK(r.code == 2);
    spit(cfg, "{\"volume\":11}");
    r = run({"experiment", "--config", cfg});
    CHECK(r.code == 2);
    std::remove(cfg.c_str());

    r = run({"experiment", "--config", "/tmp/rearrkit_missing_cfg.json"});
    CHECK(r.code == 2);

    // Inline flags without a config run on defaults.
    r = run({"experiment", "--theorem", "norm_equiv", "--n", "1", "--instances", "2",
             "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("ratio range") != std::string::npos);
}
