#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cnsg::cli {

enum ExitCode { kOk = 0, kPartial = 1, kParseError = 2, kSemanticError = 3 };

// args excludes the program name. Never throws; every failure maps to an exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cnsg::cli
