#pragma once

// Named self-check suites run by `klab verify --suite NAME`. Each suite is a
// list of invariant checks with a one-line detail string.

#include <string>
#include <string_view>
#include <vector>

namespace klab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    // extra table lines printed before the checks
    std::vector<std::string> table;

    bool passed() const;
};

/// arith, decomposition, cauchy_schwarz, dispersion, fourier, exponents
const std::vector<std::string>& verify_suite_names();

/// Throws ConfigError for an unknown suite name.
SuiteReport run_verify_suite(std::string_view name);

} // namespace klab
