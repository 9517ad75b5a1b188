#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace caustic {

// args excludes the program name. Exit codes: 0 success, 1 domain error, 2 usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caustic
