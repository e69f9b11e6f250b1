#pragma once

#include <string>
#include <vector>

namespace gapfield {

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string measured;
    std::string tolerance;
    bool pass = false;
    double wall_s = 0.0;
};

struct AcceptanceOptions {
    int workers = 1;
    bool verbose = false;  // print progress lines while running
};

// Runs the full acceptance suite (fixed geometries, sweeps, oracles and
// tolerances) and returns one verdict per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

bool all_pass(const std::vector<CriterionResult>& results);
std::string render_verdicts(const std::vector<CriterionResult>& results);

}  // namespace gapfield
