#pragma once

// Command-line frontend.  Each subcommand parses its inputs, makes one library
// call and writes a JSON object
//
//   {command, inputs, result, enclosures, warnings, timing_ms}
//
// or, with --csv, the command's main table.  Exit status: 0 success,
// 2 precision, 3 invalid input, 4 domain error.

#include <ostream>
#include <string>
#include <vector>

namespace siegel::cli {

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace siegel::cli
