// ============================================================================
// rearrkit_main.cpp -- process entry point; all logic lives in run_cli so the
// tests can drive full invocations in-process.
// ============================================================================
#include <iostream>
#include <string>
#include <vector>

#include "rearrkit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return rearrkit::run_cli(args, std::cout, std::cerr);
}
