#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cga {

/// Exit codes: 0 success, 1 verification failure or I/O error, 2 bad arguments.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

/// Names accepted by the `oracle` subcommand.
const std::vector<std::string>& oracle_names();

}  // namespace cga
