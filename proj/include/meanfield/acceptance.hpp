#pragma once

#include <iosfwd>
#include <string>

namespace meanfield {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};

int criterion_count();
// run one end-to-end check (1-based index); every tolerance is pinned inside
CriterionResult run_criterion(int index);
// run all checks, print one PASS/FAIL line each, return the failure count
int run_all_criteria(std::ostream& out);

}  // namespace meanfield
