// Acceptance suite: end-to-end checks of the headline results, runnable
// through the `selftest` CLI subcommand or the acceptance test binary.
// Each criterion prints one pass/fail line.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fiberspin::selftest {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CriterionResult> run_acceptance();

/// Prints one line per criterion; returns true when every criterion passed.
bool run_acceptance(std::ostream& os);

}  // namespace fiberspin::selftest
