// The acceptance suite: one entry per criterion, each printing a PASS/FAIL
// line plus detail lines.  Shared by the standalone runner and the CLI's
// selftest subcommand.
#ifndef NLFRONT_ACCEPTANCE_SUITE_HPP
#define NLFRONT_ACCEPTANCE_SUITE_HPP

#include <string>
#include <vector>

namespace acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::vector<std::string> detail;
};

inline constexpr int kCriterionCount = 12;

CriterionResult run_criterion(int id, unsigned long long seed);

// runs the given criteria (all when empty), prints as it goes, returns true
// when everything passed
bool run_suite(const std::vector<int>& ids, unsigned long long seed);

}  // namespace acceptance

#endif
