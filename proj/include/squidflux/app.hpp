#pragma once

#include <string>
#include <vector>

namespace squidflux::app {

/// Runs the command-line front end. args excludes the program name.
/// Exit codes: 0 success, 1 computational failure, 2 usage/config error.
int run(const std::vector<std::string>& args);

}  // namespace squidflux::app
