#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace asianmc_cli {

enum ExitCode { kOk = 0, kUsage = 1, kNumeric = 2 };

// args excludes the program name. Output goes to `out` unless --out names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace asianmc_cli
