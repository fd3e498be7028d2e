#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "twcr/config.hpp"

namespace twcr::pipeline {

inline constexpr const char* kVersion = "1.0.0";

// Environment variable that, when set, replaces output.directory.
inline constexpr const char* kOutputDirEnv = "TWCR_OUTPUT_DIR";

struct RunResult {
    std::vector<std::string> files;  // every file written, manifest last
    std::string manifest;
};

struct SolveResult {
    channeling::BandStructure bands;
    std::vector<double> populations;
    std::vector<channeling::Transition> transitions;
    bool cache_hit = false;
};

// Effective output directory after the environment override.
std::string output_directory(const config::RunConfig& cfg);

// Band structure, populations and transitions (cached when enabled).
SolveResult solve(const config::RunConfig& cfg);

// Full sweep: one CSV (and optional JSON) per (m, theta_k), then the
// manifest. Files written by a failed run are removed before rethrowing.
RunResult run(const config::RunConfig& cfg, std::ostream& log);

}  // namespace twcr::pipeline
