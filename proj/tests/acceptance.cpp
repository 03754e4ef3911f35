// ============================================================================
// acceptance.cpp
//
// End-to-end acceptance: ten criteria, one [PASS]/[FAIL] line each, wall
// clock checked against a pinned budget per criterion. Criteria 1..9 drive
// the named verification suites with the default seed; criterion 10 reruns
// the CLI and compares machine output byte for byte across repeats and
// thread counts. Exit 0 only if every line passes.
// ============================================================================
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rearrkit/cli.hpp"
#include "rearrkit/verify.hpp"

using namespace rearrkit;

// Hard invariant of the harness itself, not a criterion.
#define REQUIRE(cond)                                                          \
    do {                                                                       \
        if (!(cond)) {                                                         \
            std::fprintf(stderr, "[FAIL] %s:%d %s\n", __FILE__, __LINE__,      \
                         #cond);                                               \
            std::exit(1);                                                      \
        }                                                                      \
    } while (0)

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criteria 1..9: a verification suite must pass wholesale inside its budget.
void suite_criterion(int index, const std::string& suite, double budget_s, int threads) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::size_t passed = 0, total = 0;
    std::string note;
    try {
        VerifyReport rep = run_verify_suite(suite, 42, threads);
        total = rep.rows.size();
        for (const CheckRow& r : rep.rows) {
            if (r.pass) {
                ++passed;
            } else if (note.empty()) {
                note = r.check + ": " + r.note;
            }
        }
        ok = rep.all_pass() && total > 0;
    } catch (const std::exception& e) {
        note = e.what();
    }
    double dt = seconds_since(t0);
    bool in_budget = dt < budget_s;
    if (ok && in_budget) {
        std::printf("[PASS] %2d %-16s %3zu/%zu checks in %.1f s (budget %g s)\n", index,
                    suite.c_str(), passed, total, dt, budget_s);
    } else {
        ++g_failures;
        std::printf("[FAIL] %2d %-16s %3zu/%zu checks in %.1f s (budget %g s)%s%s\n", index,
                    suite.c_str(), passed, total, dt, budget_s, note.empty() ? "" : " ",
                    note.c_str());
    }
    std::fflush(stdout);
}

struct CliCapture {
    int code = 0;
    std::string out;
    std::string payload;
};

CliCapture capture(std::vector<std::string> args, const std::string& out_path) {
    args.push_back("--out");
    args.push_back(out_path);
    std::ostringstream out, err;
    CliCapture c;
    c.code = run_cli(args, out, err);
    c.out = out.str();
    std::ifstream f(out_path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    c.payload = ss.str();
    std::remove(out_path.c_str());
    return c;
}

// Criterion 10: fixed seeds make repeated runs byte-identical, independent of
// the worker thread count.
void determinism_criterion(int index) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string note;
    try {
        std::vector<std::string> verify_args = {"verify", "--suite", "psi", "--seed", "42"};
        CliCapture v1 = capture(verify_args, "/tmp/rearrkit_accept_v1.csv");
        CliCapture v2 = capture(verify_args, "/tmp/rearrkit_accept_v2.csv");
        if (v1.code != 0 || v2.code != 0) {
            ok = false;
            note = "verify exited nonzero";
        } else if (v1.out != v2.out || v1.payload != v2.payload) {
            ok = false;
            note = "verify output differs between reruns";
        }

        std::vector<std::string> exp_args = {"experiment", "--theorem", "norm_equiv",
                                             "--n", "2", "--mode", "mc", "--trials", "2000",
                                             "--instances", "4", "--seed", "7", "--threads"};
        auto with_threads = [&](const char* t, const char* path) {
            std::vector<std::string> args = exp_args;
            args.push_back(t);
            return capture(args, path);
        };
        CliCapture e1 = with_threads("1", "/tmp/rearrkit_accept_e1.csv");
        CliCapture e2 = with_threads("1", "/tmp/rearrkit_accept_e2.csv");
        CliCapture e4 = with_threads("4", "/tmp/rearrkit_accept_e4.csv");
        if (e1.code != 0 || e2.code != 0 || e4.code != 0) {
            ok = false;
            note = "experiment exited nonzero";
        } else if (e1.out != e2.out || e1.payload != e2.payload) {
            ok = false;
            note = "experiment output differs between reruns";
        } else if (e1.out != e4.out || e1.payload != e4.payload) {
            ok = false;
            note = "experiment output differs across thread counts";
        }
    } catch (const std::exception& e) {
        ok = false;
        note = e.what();
    }
    double dt = seconds_since(t0);
    if (ok) {
        std::printf("[PASS] %2d %-16s reruns and thread counts byte-identical in %.1f s\n",
                    index, "determinism", dt);
    } else {
        ++g_failures;
        std::printf("[FAIL] %2d %-16s %s\n", index, "determinism", note.c_str());
    }
    std::fflush(stdout);
}

} // namespace

int main() {
    // The seed is pinned here; the environment must not leak into criteria.
    unsetenv("REARRKIT_SEED");

    suite_criterion(1, "kruglov-poisson", 1.0, 1);
    suite_criterion(2, "disjointification", 5.0, 1);
    suite_criterion(3, "exact-constants", 120.0, 1);
    suite_criterion(4, "modular-sandwich", 30.0, 1);
    suite_criterion(5, "fubini", 30.0, 1);
    suite_criterion(6, "junge", 120.0, 1);
    suite_criterion(7, "ratio-stability", 600.0, 4);
    suite_criterion(8, "mc-exact", 300.0, 4);
    suite_criterion(9, "psi", 1.0, 1);
    determinism_criterion(10);

    if (g_failures > 0) {
        std::printf("acceptance: %d of 10 criteria FAILED\n", g_failures);
        return 1;
    }
    std::printf("acceptance: 10/10 criteria passed\n");
    return 0;
}
