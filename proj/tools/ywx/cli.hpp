#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ywx {

// Runs one command line (without the program name). Returns the process
// exit status: 0 success, 1 validation errors, 2 usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ywx
