#pragma once

#include <string>
#include <vector>

namespace rotaflow {

struct CheckResult {
    int criterion = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0.0;
    bool passed() const;
};

/// heat, conservation, contraction, duhamel, geometry, cell, all.
const std::vector<std::string>& suite_names();

/// Runs the named acceptance battery; throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name);

/// Machine-readable summary (JSON).
std::string summary_json(const SuiteResult& result);

/// Fixed-width pass/fail table, one row per check.
std::string summary_table(const SuiteResult& result);

}  // namespace rotaflow
