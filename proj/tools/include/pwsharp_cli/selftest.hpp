#ifndef PWSHARP_CLI_SELFTEST_HPP
#define PWSHARP_CLI_SELFTEST_HPP

#include <string>
#include <vector>

#include "pwsharp/sharpsolve.hpp"

namespace pwsharp::cli {

struct PropertyResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Every module's invariants at reduced scale; solver options apply to all solves.
std::vector<PropertyResult> run_selftest(const SolveOptions& opts);

}  // namespace pwsharp::cli

#endif
