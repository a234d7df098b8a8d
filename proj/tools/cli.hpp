#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace toposkit::cli {

// Exit codes: 0 success, 1 a checked property fails, 2 malformed input or
// resource limit.
enum Exit : int { kOk = 0, kPropertyFails = 1, kMalformed = 2 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toposkit::cli
