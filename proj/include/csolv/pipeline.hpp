#pragma once

#include "csolv/config.hpp"
#include "csolv/report.hpp"

#include <ostream>

namespace csolv {

// executes one CLI command against a parsed configuration; returns the exit
// code (0 all checks pass, 1 a check failed, 2 configuration or limit error)
int run_command(const RunConfig& cfg, const std::string& command, std::ostream& os);

} // namespace csolv
