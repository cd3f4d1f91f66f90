#ifndef GTEDGE_VERIFY_HPP
#define GTEDGE_VERIFY_HPP

#include <string>
#include <vector>

namespace gtedge {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass() const;
};

/// measure, saddle, frontier, kernel, combinatorics, presets.
const std::vector<std::string>& suite_names();

/// Runs one invariant suite with fixed internal seeds.  Throws
/// std::invalid_argument for an unknown name.
SuiteReport run_suite(const std::string& name);

} // namespace gtedge

#endif
