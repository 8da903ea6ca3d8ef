#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ptscatter/core.hpp"

namespace ptscatter::cli {

// The closed form under test; replaceable so a perturbed formula can be shown
// to make the self-test fail.
struct SelftestHooks {
    std::function<double(const BarrierPoint&)> transmission = [](const BarrierPoint& p) {
        return transmission_probability(p);
    };
};

struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    double worst = 0.0;  // largest tolerance-normalised deviation seen
};

[[nodiscard]] std::vector<SuiteResult> run_selftest_suites(const SelftestHooks& hooks = {});

// Prints a fixed-format summary table; returns 0 when every check passes.
int run_selftest(std::ostream& out, const SelftestHooks& hooks = {});

}  // namespace ptscatter::cli
