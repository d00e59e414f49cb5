#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rphd::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick oracle and invariant checks (OSPA against enumeration, update and
/// prediction mass identities, resampling bounds, zero-roughening equivalence).
/// Runs in about a second.
std::vector<CheckResult> run_all(std::uint64_t seed);

}  // namespace rphd::selftest
