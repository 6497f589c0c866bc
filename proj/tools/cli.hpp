#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lesionfair::cli {

// Entry point shared by the executable and the tests. args excludes the
// program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lesionfair::cli
