#pragma once

#include "clopen/io.hpp"

#include <string>
#include <vector>

namespace clopen {

struct ScenarioOutcome {
    Json report;
    bool expected_pattern = false;  // drives the exit code
};

// Runs the bundled counter-example construction at the given level: dense
// periodic atoms, equicontinuity, periodic shadowing certified, strict refuted
// with the full interval-cycle witness, and strict certified for the cube.
ScenarioOutcome run_verify_example(int level, const std::vector<Rational>& eps_list,
                                   const TrackerOptions& opts);

// Bundled scenario pipelines; names: corollary-1.1, corollary-1.3, corollary-1.4,
// proposition-1.1.
ScenarioOutcome run_scenario(const std::string& name, uint64_t seed, const TrackerOptions& opts);

// Seeded disjoint-interval model with max diameter strictly below the min gap.
ModelPtr random_interval_model(uint64_t seed, int atoms);

}  // namespace clopen
