#pragma once

// The eight end-to-end checks, shared by the acceptance binary and `abtrace verify`.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace abtrace::acceptance {

struct Check {
    std::string label; ///< e.g. "2a"
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string summary;
    std::vector<Check> checks;
    double seconds = 0.0;
};

struct Options {
    int threads = 1;
};

CriterionResult cosine_law(const Options& options);          // 1
CriterionResult absolute_coefficient(const Options& options); // 2
CriterionResult side_and_sign(const Options& options);        // 3
CriterionResult torus_weights(const Options& options);        // 4
CriterionResult frame_and_beam(const Options& options);       // 5
CriterionResult spectral_solvers(const Options& options);     // 6
CriterionResult isolation(const Options& options);            // 7
CriterionResult planted_recovery(const Options& options);     // 8

/// Runs 1..8 in order; `on_result` is called as each finishes.
std::vector<CriterionResult> run_all(const Options& options,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] n name: summary" followed by indented sub-check lines.
void print(std::ostream& os, const CriterionResult& result);

} // namespace abtrace::acceptance
