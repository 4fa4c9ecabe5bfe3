#pragma once

#include <string>
#include <vector>

namespace currikit {

// Dispatches one full command line (argv[0] excluded). Returns the process
// exit code: 0 success, 1 bad input data, 2 usage error. A JSON run log line
// (command, flags, input fingerprints, outputs, wall time, warnings) is
// written to stderr for every executed command.
int run_cli(const std::vector<std::string>& args);

}  // namespace currikit
