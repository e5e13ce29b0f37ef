#pragma once

#include <string>
#include <vector>

#include "arrival/grid.hpp"
#include "arrival/states.hpp"

namespace arrival {

struct CheckResult {
    std::string name;
    double value;      // measured deviation (or measured quantity for bound checks)
    double tolerance;  // pass iff value <= tolerance
    bool passed;
    std::string detail;
};

struct VerifySettings {
    GridSpec grid{1024, 40.0};
    PhysConsts consts;
    GaussianSpec packet;
};

// Operator, eigenstate and measurement invariants at the given grid. A check
// that throws is reported as failed with the error text in `detail`.
std::vector<CheckResult> run_verification(const VerifySettings& settings);

}  // namespace arrival
