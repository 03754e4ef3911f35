// ============================================================================
// verify.hpp
//
// Named verification suites over the library's identities and inequality
// constants. Each suite returns labeled pass/fail rows; the CLI `verify`
// subcommand and the acceptance binary both run these, so there is a single
// source of truth for what "verified" means.
// ============================================================================
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rearrkit {

struct CheckRow {
    std::string suite;
    std::string check;
    bool pass = false;
    std::string note;
};

struct VerifyReport {
    std::vector<CheckRow> rows;
    bool all_pass() const;
};

// The runnable suite names, in report order.
std::vector<std::string> verify_suite_names();

// Run one suite by name, or every suite with name "all". Unknown names throw
// argument_error. `threads` parallelizes instance loops; results are
// bit-identical for every thread count.
VerifyReport run_verify_suite(const std::string& name, std::uint64_t seed, int threads);

} // namespace rearrkit
