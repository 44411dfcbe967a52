#pragma once

#include <string>
#include <vector>

namespace jcm::cli {

struct CheckInfo {
    std::string id;
    std::string description;
    bool mandatory = true;
};

struct CheckResult {
    std::string id;
    bool mandatory = true;
    bool passed = false;
    double metric = 0.0;     // worst observed discrepancy
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

// Cross-validation suite: identities between independent closed forms, the
// reduction web and per-family operator comparisons.  Oracle checks use
// parameters whose tails fit in oracle_dim (>= 16).
const std::vector<CheckInfo>& check_catalog();
bool is_known_check(const std::string& id);
CheckResult run_check(const std::string& id, int oracle_dim = 64);

}  // namespace jcm::cli
