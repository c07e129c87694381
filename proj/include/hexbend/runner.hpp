#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hexbend/config.hpp"

namespace hexbend {

struct RunOutcome {
    std::string study;
    double extrapolated_value = 0.0;
    double reference_value = 0.0;
    double relative_error = 0.0;
    bool ok = true;  // false only for a failing selftest
};

/// Runs the configured study and writes into config.output.dir:
/// config.effective.json, the study CSV table(s) and summary.json.
RunOutcome run_study(const Config& config, std::ostream& log);

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Invariant suite: bond algebra, stencil affine annihilation and quadratic
/// exactness, assembly against direct stencil sums, kernel equivalence,
/// continuum form equivalence and the decomposition of the local limit.
std::vector<SelftestCheck> run_selftest();

}  // namespace hexbend
