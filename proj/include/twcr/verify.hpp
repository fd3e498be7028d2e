#pragma once

#include <ostream>
#include <vector>

#include "twcr/checks.hpp"
#include "twcr/config.hpp"

namespace twcr::verify {

// Runs every oracle check for the configuration, printing one line per check.
// Returns the results; a run passes when no gating check failed.
std::vector<checks::CheckResult> run(const config::RunConfig& cfg, std::ostream& out);

bool all_passed(const std::vector<checks::CheckResult>& results);

}  // namespace twcr::verify
