#pragma once
// Cross-module identity checks run by `bosonic verify`.

#include <string>
#include <vector>

namespace bosonic {

struct CheckResult {
    std::string name;
    double error;      // measured discrepancy
    double tolerance;  // after scaling
    bool pass;
};

// tolerance_scale multiplies every tolerance; values far below 1 make the suite fail on purpose.
std::vector<CheckResult> run_verification(double tolerance_scale = 1.0);

}  // namespace bosonic
