#pragma once

#include <string>
#include <vector>

namespace kdvtraj {

/// One invariant evaluated by the built-in suite. `measured` is compared
/// against `threshold` in the sense recorded by `comparison` ("<=" or ">=").
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    std::string comparison = "<=";
    bool passed = false;
};

/// Runs every invariant of the library on built-in systems. Deterministic.
std::vector<CheckResult> run_invariant_suite();

}  // namespace kdvtraj
